#include "parityprobe/protocol/simulate.hpp"

#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"
#include "parityprobe/rng.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <unordered_map>
#include <utility>

namespace parityprobe {

namespace {

using Eigen::ArrayXXcd;
using Eigen::ArrayXXd;

// Joint qubit configuration q = b1*8 + b2*4 + b3*2 + a, a = ancilla bit.
inline int qbit(int q, int k) { return (q >> (3 - k)) & 1; }
inline int qflip(int q, int k) { return q ^ (1 << (3 - k)); }
inline int block_key(int q, int qp) { return q * 16 + qp; }

constexpr double kDropNorm2 = 1e-28;

// Block-sparse density operator: map from a pair of joint qubit
// configurations to an nf x nf cavity matrix.
using Blocks = std::unordered_map<int, Matrix>;

double blocks_trace(const Blocks& b) {
  double tr = 0.0;
  for (const auto& [key, m] : b)
    if (key / 16 == key % 16) tr += m.trace().real();
  return tr;
}

// Per-photon and per-configuration diagonal Hamiltonian (MHz).
double diag_energy(const DeviceParams& p, int q, int m) {
  double h = 0.0;
  double chi_sum = 0.0, chip_sum = 0.0;
  for (int k = 0; k < kNumQubits; ++k) {
    if (!qbit(q, k)) continue;
    chi_sum += p.chi[k];
    chip_sum += p.chi_prime[k];
    for (int j = k + 1; j < kNumQubits; ++j)
      if (qbit(q, j)) h -= p.chi_qq[k][j];
  }
  h -= chi_sum * m;
  h -= 0.5 * (p.kerr + chip_sum) * m * (m - 1.0);
  return h;
}

struct Rates {
  double kappa;                    // cavity decay, 1/ns
  std::array<double, 4> gamma1;    // qubit decay
  std::array<double, 4> gammaphi;  // pure dephasing
};

Rates make_rates(const DeviceParams& p) {
  Rates r{};
  r.kappa = 1e-3 / p.cavity_t1_us;
  for (int k = 0; k < kNumQubits; ++k) {
    r.gamma1[k] = 1e-3 / p.qubit_t1_us[k];
    r.gammaphi[k] =
        1e-3 * (1.0 / p.qubit_t2_us[k] - 0.5 / p.qubit_t1_us[k]);
  }
  return r;
}

inline Complex phi1(Complex z) {
  return (std::abs(z) < 1e-8) ? Complex(1.0, 0.0) + 0.5 * z
                              : (std::exp(z) - 1.0) / z;
}

// Fixed-step evolver for one free-evolution segment: the diagonal part
// (Hamiltonian phases plus elementwise decay envelopes) is applied exactly
// per step, jump terms through a second-order averaged correction.
class SegmentEvolver {
 public:
  SegmentEvolver(const DeviceParams& p, const Rates& r, int nf, double h)
      : params_(p), rates_(r), nf_(nf), h_(h) {
    weights_.resize(nf_, nf_);
    for (int m = 0; m < nf_; ++m)
      for (int n = 0; n < nf_; ++n)
        weights_(m, n) = std::sqrt(double(m + 1) * double(n + 1));
  }

  void step(Blocks& blocks) {
    Blocks u = jumps(blocks);
    Blocks v = jumps(u);
    for (auto& [key, m] : u) {
      auto it = v.find(key);
      if (it != v.end()) m += 0.5 * it->second;
    }
    for (auto& [key, m] : u) {
      auto it = blocks.find(key);
      if (it == blocks.end())
        blocks.emplace(key, std::move(m));
      else
        it->second += m;
    }
    for (auto it = blocks.begin(); it != blocks.end();) {
      it->second.array() *= cache(it->first).expAh;
      if (it->second.cwiseAbs2().sum() < kDropNorm2)
        it = blocks.erase(it);
      else
        ++it;
    }
  }

 private:
  struct KeyCache {
    ArrayXXcd a;       // elementwise generator, per ns
    ArrayXXcd expAh;   // exp(a * h)
    ArrayXXcd qcav;    // averaged-jump factor, cavity channel
    std::array<ArrayXXcd, 4> qdecay;
    std::array<bool, 4> decays{};
  };

  const KeyCache& cache(int key) {
    auto it = caches_.find(key);
    if (it != caches_.end()) return it->second;
    KeyCache c;
    const int q = key / 16, qp = key % 16;
    c.a = generator(q, qp);
    c.expAh = (c.a * h_).exp();
    c.qcav = ArrayXXcd::Zero(nf_, nf_);
    for (int m = 0; m + 1 < nf_; ++m)
      for (int n = 0; n + 1 < nf_; ++n)
        c.qcav(m, n) = phi1((c.a(m + 1, n + 1) - c.a(m, n)) * h_);
    for (int k = 0; k < kNumQubits; ++k) {
      c.decays[k] = qbit(q, k) && qbit(qp, k);
      if (!c.decays[k] || rates_.gamma1[k] <= 0.0) {
        c.decays[k] = c.decays[k] && rates_.gamma1[k] > 0.0;
        continue;
      }
      ArrayXXcd at = generator(qflip(q, k), qflip(qp, k));
      c.qdecay[k] = ((c.a - at) * h_).unaryExpr(&phi1);
    }
    return caches_.emplace(key, std::move(c)).first->second;
  }

  ArrayXXcd generator(int q, int qp) const {
    ArrayXXcd a(nf_, nf_);
    double decay_qq = 0.0;
    for (int k = 0; k < kNumQubits; ++k) {
      decay_qq -= 0.5 * rates_.gamma1[k] * (qbit(q, k) + qbit(qp, k));
      if (qbit(q, k) != qbit(qp, k)) decay_qq -= rates_.gammaphi[k];
    }
    for (int m = 0; m < nf_; ++m) {
      const double hq = diag_energy(params_, q, m);
      for (int n = 0; n < nf_; ++n) {
        const double dphase =
            -2.0 * kPi * 1e-3 * (hq - diag_energy(params_, qp, n));
        a(m, n) = Complex(decay_qq - 0.5 * rates_.kappa * (m + n), dphase);
      }
    }
    return a;
  }

  Blocks jumps(const Blocks& src) {
    Blocks out;
    for (const auto& [key, rho] : src) {
      const KeyCache& c = cache(key);
      if (rates_.kappa > 0.0) {
        Matrix t = Matrix::Zero(nf_, nf_);
        t.topLeftCorner(nf_ - 1, nf_ - 1) =
            (rho.bottomRightCorner(nf_ - 1, nf_ - 1).array() *
             weights_.topLeftCorner(nf_ - 1, nf_ - 1).array())
                .matrix();
        t.array() *= c.qcav * (h_ * rates_.kappa);
        add_to(out, key, std::move(t));
      }
      for (int k = 0; k < kNumQubits; ++k) {
        if (!c.decays[k]) continue;
        Matrix t =
            (rho.array() * c.qdecay[k] * (h_ * rates_.gamma1[k])).matrix();
        add_to(out, block_key(qflip(key / 16, k), qflip(key % 16, k)),
               std::move(t));
      }
    }
    return out;
  }

  static void add_to(Blocks& b, int key, Matrix&& m) {
    auto it = b.find(key);
    if (it == b.end())
      b.emplace(key, std::move(m));
    else
      it->second += m;
  }

  const DeviceParams& params_;
  const Rates& rates_;
  int nf_;
  double h_;
  ArrayXXd weights_;
  std::unordered_map<int, KeyCache> caches_;
};

class Simulator {
 public:
  Simulator(const DeviceParams& p, const SimulateOptions& opt)
      : params_(p), rates_(make_rates(p)), opts_(opt), nf_(p.fock_cutoff) {}

  struct Leaf {
    std::vector<int> outcomes;
    Matrix reg;  // 8x8 register output, sub-normalized
  };

  std::vector<Leaf> propagate(Blocks state,
                              const std::vector<Segment>& segments) {
    std::vector<Leaf> leaves;
    run(std::move(state), segments, 0, {}, leaves);
    return leaves;
  }

  Blocks initial_blocks(const Matrix& reg) const {
    Blocks b;
    const double pa = params_.residual_excitation[kAncilla];
    for (int r = 0; r < 8; ++r)
      for (int rp = 0; rp < 8; ++rp) {
        if (std::abs(reg(r, rp)) < 1e-300) continue;
        Matrix cav = Matrix::Zero(nf_, nf_);
        cav(0, 0) = reg(r, rp);
        if (pa > 0.0)
          b[block_key(r * 2 + 1, rp * 2 + 1)] = pa * cav;
        b[block_key(r * 2, rp * 2)] = (1.0 - pa) * cav;
      }
    return b;
  }

 private:
  void run(Blocks state, const std::vector<Segment>& segments,
           std::size_t pos, std::vector<int> outcomes,
           std::vector<Leaf>& leaves) {
    for (std::size_t i = pos; i < segments.size(); ++i) {
      const Segment& seg = segments[i];
      if (const auto* d = std::get_if<Displace>(&seg)) {
        displace(state, d->amplitude);
        check_truncation(state);
      } else if (const auto* f = std::get_if<FreeEvolve>(&seg)) {
        free_evolve(state, f->duration_ns);
      } else if (const auto* g = std::get_if<QubitGate>(&seg)) {
        apply_gate(state, *g);
      } else if (std::get_if<CavityReset>(&seg)) {
        cavity_reset(state);
      } else {
        // AncillaMeasure or Herald: branch on the projective outcome.
        for (int o = 0; o < 2; ++o) {
          Blocks part;
          for (const auto& [key, m] : state)
            if ((key / 16 & 1) == o && (key % 16 & 1) == o)
              part.emplace(key, m);
          auto path = outcomes;
          path.push_back(o);
          run(std::move(part), segments, i + 1, std::move(path), leaves);
        }
        return;
      }
    }
    leaves.push_back(Leaf{std::move(outcomes), extract_register(state)});
  }

  void free_evolve(Blocks& b, double t) {
    if (t <= 0.0 || b.empty()) return;
    if (!opts_.noise) {
      for (auto& [key, m] : b) {
        const int q = key / 16, qp = key % 16;
        for (int i = 0; i < nf_; ++i) {
          const double hq = diag_energy(params_, q, i);
          for (int j = 0; j < nf_; ++j)
            m(i, j) *= std::exp(Complex(
                0.0, -2.0 * kPi * 1e-3 *
                         (hq - diag_energy(params_, qp, j)) * t));
        }
      }
      return;
    }
    const int nsteps = std::max(1, int(std::ceil(t / opts_.step_ns)));
    SegmentEvolver ev(params_, rates_, nf_, t / nsteps);
    for (int s = 0; s < nsteps; ++s) ev.step(b);
  }

  void displace(Blocks& b, Complex beta) {
    const Matrix& d = displacement_op(beta);
    for (auto& [key, m] : b) m = d * m * d.adjoint();
  }

  void apply_gate(Blocks& b, const QubitGate& g) {
    if (g.selectivity == Selectivity::Fock0) {
      selective_gate(b, g);
      return;
    }
    const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
    Eigen::Matrix2cd u;
    if (g.axis == GateAxis::X)
      u << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
    else
      u << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
    if (std::abs(std::abs(u(0, 1)) - 1.0) < 1e-15) {
      // pi pulse: pure block permutation.
      Blocks out;
      for (auto& [key, m] : b)
        out.emplace(
            block_key(qflip(key / 16, g.target), qflip(key % 16, g.target)),
            std::move(m));
      b = std::move(out);
      return;
    }
    Blocks out;
    for (const auto& [key, m] : b) {
      const int q = key / 16, qp = key % 16;
      const int bq = qbit(q, g.target), bqp = qbit(qp, g.target);
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
          const Complex coeff = u(a, bq) * std::conj(u(ap, bqp));
          if (std::abs(coeff) < 1e-300) continue;
          const int nq = (bq == a) ? q : qflip(q, g.target);
          const int nqp = (bqp == ap) ? qp : qflip(qp, g.target);
          auto [it, fresh] =
              out.try_emplace(block_key(nq, nqp), Matrix::Zero(nf_, nf_));
          it->second += coeff * m;
        }
    }
    b = std::move(out);
  }

  // Ancilla rotation conditioned on the cavity photon number: angle pi on
  // the vacuum component, selective_leakage * pi elsewhere.
  void selective_gate(Blocks& b, const QubitGate& g) {
    if (g.target != kAncilla)
      throw ValidationError("fock0-selective gates act on the ancilla");
    Eigen::ArrayXcd diag(nf_), off(nf_);
    for (int m = 0; m < nf_; ++m) {
      const double ang = (m == 0) ? g.angle : params_.selective_leakage * kPi;
      diag(m) = std::cos(ang / 2.0);
      off(m) = Complex(0.0, -std::sin(ang / 2.0));
    }
    auto coeff = [&](int a, int bsrc) -> const Eigen::ArrayXcd& {
      return (a == bsrc) ? diag : off;
    };
    Blocks out;
    for (const auto& [key, m] : b) {
      const int q = key / 16, qp = key % 16;
      const int bq = q & 1, bqp = qp & 1;
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
          const int nq = (q & ~1) | a, nqp = (qp & ~1) | ap;
          ArrayXXcd t = m.array();
          t.colwise() *= coeff(a, bq);
          t.rowwise() *= coeff(ap, bqp).transpose().conjugate();
          auto [it, fresh] =
              out.try_emplace(block_key(nq, nqp), Matrix::Zero(nf_, nf_));
          it->second += t.matrix();
        }
    }
    for (auto it = out.begin(); it != out.end();)
      it = (it->second.cwiseAbs2().sum() < kDropNorm2) ? out.erase(it)
                                                       : std::next(it);
    b = std::move(out);
  }

  void cavity_reset(Blocks& b) {
    for (auto& [key, m] : b) {
      const Complex tr = m.trace();
      m.setZero();
      m(0, 0) = tr;
    }
  }

  void check_truncation(const Blocks& b) const {
    double top = 0.0;
    for (const auto& [key, m] : b)
      if (key / 16 == key % 16) top += std::abs(m(nf_ - 1, nf_ - 1));
    if (top > opts_.truncation_tol)
      throw TruncationError("Fock-truncation leakage " + std::to_string(top) +
                            " exceeds tolerance; raise fock_cutoff");
  }

  Matrix extract_register(const Blocks& b) const {
    Matrix out = Matrix::Zero(8, 8);
    for (const auto& [key, m] : b) {
      const int q = key / 16, qp = key % 16;
      if ((q & 1) != (qp & 1)) continue;
      out(q >> 1, qp >> 1) += m.trace();
    }
    return out;
  }

  const Matrix& displacement_op(Complex beta) {
    auto it = displacements_.find(beta);
    if (it != displacements_.end()) return it->second;
    Matrix gen = Matrix::Zero(nf_, nf_);
    for (int m = 0; m + 1 < nf_; ++m) {
      const double w = std::sqrt(double(m + 1));
      gen(m + 1, m) = beta * w;
      gen(m, m + 1) = -std::conj(beta) * w;
    }
    Matrix d = gen.exp();
    return displacements_
        .emplace(beta, std::move(d))
        .first->second;
  }

  struct ComplexLess {
    bool operator()(const Complex& a, const Complex& b) const {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    }
  };

  const DeviceParams& params_;
  Rates rates_;
  SimulateOptions opts_;
  int nf_;
  std::map<Complex, Matrix, ComplexLess> displacements_;
};

// Pre-compose independent bit-flip preparation errors: the output table is
// a convex combination of tables at flipped input indices.
using OutputTable =
    std::map<std::vector<int>, std::array<std::array<Matrix, 8>, 8>>;

int flip_register(int r, int mask) { return r ^ mask; }

OutputTable apply_residual_excitation(const OutputTable& table,
                                      const DeviceParams& params) {
  std::array<double, 3> pr{params.residual_excitation[0],
                           params.residual_excitation[1],
                           params.residual_excitation[2]};
  if (pr[0] == 0.0 && pr[1] == 0.0 && pr[2] == 0.0) return table;
  OutputTable fixed;
  for (const auto& [path, grid] : table) {
    auto& g = fixed[path];
    for (int r = 0; r < 8; ++r)
      for (int rp = 0; rp < 8; ++rp) {
        Matrix acc = Matrix::Zero(8, 8);
        for (int mask = 0; mask < 8; ++mask) {
          double w = 1.0;
          for (int k = 0; k < 3; ++k)
            w *= (mask >> (2 - k) & 1) ? pr[k] : 1.0 - pr[k];
          if (w == 0.0) continue;
          acc += w * grid[flip_register(r, mask)][flip_register(rp, mask)];
        }
        g[r][rp] = acc;
      }
  }
  return fixed;
}

Matrix choi_from_table(const std::array<std::array<Matrix, 8>, 8>& grid) {
  Matrix choi = Matrix::Zero(64, 64);
  for (int r = 0; r < 8; ++r)
    for (int rp = 0; rp < 8; ++rp)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          choi(i * 8 + r, j * 8 + rp) = grid[r][rp](i, j);
  return choi;
}

QuantumInstrument instrument_from_chois(std::vector<Matrix> chois,
                                        double kraus_tol, double tp_tol) {
  Matrix gram = Matrix::Zero(8, 8);
  std::vector<Channel> branches;
  for (auto& c : chois) {
    auto kraus = kraus_from_choi(hermitize(c), 8, 8, kraus_tol);
    branches.emplace_back(std::move(kraus), Channel::TraceBehavior::Unchecked);
    gram += branches.back().kraus_gram();
  }
  const double defect =
      (gram - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  return QuantumInstrument(std::move(branches), {"0", "1"},
                           std::max(tp_tol, defect * (1.0 + 1e-9)));
}

}  // namespace

std::int64_t OutcomeRecord::clicks() const {
  std::int64_t n = 0;
  for (const auto& [key, v] : counts)
    if (key.first == 1) n += v;
  return n;
}

SimulationResult simulate_protocol(const PulseSchedule& schedule,
                                   const DeviceParams& params,
                                   const SimulateOptions& options) {
  params.validate();
  Simulator sim(params, options);

  OutputTable table;
  for (int r = 0; r < 8; ++r)
    for (int rp = r; rp < 8; ++rp) {
      Matrix e = Matrix::Zero(8, 8);
      e(r, rp) = 1.0;
      auto leaves = sim.propagate(sim.initial_blocks(e), schedule.segments());
      for (const auto& leaf : leaves) {
        auto& grid = table[leaf.outcomes];
        for (int i = 0; i < 8; ++i)
          for (int j = 0; j < 8; ++j)
            if (grid[i][j].size() == 0) grid[i][j] = Matrix::Zero(8, 8);
        grid[r][rp] = leaf.reg;
        if (rp != r) grid[rp][r] = leaf.reg.adjoint();
      }
    }
  table = apply_residual_excitation(table, params);

  const auto& conf = params.readout_assignment;
  const bool has_herald = schedule.has_herald();

  // Unheralded assembly: observed outcome c mixes actual first outcomes
  // through the confusion matrix; later outcomes are summed over.
  std::array<Matrix, 2> choi_u{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
  for (const auto& [path, grid] : table) {
    const Matrix c = choi_from_table(grid);
    for (int obs = 0; obs < 2; ++obs)
      choi_u[obs] += conf[path[0]][obs] * c;
  }

  SimulationResult result{
      instrument_from_chois({choi_u[0], choi_u[1]},
                            std::max(1e-8, options.tp_tol), options.tp_tol),
      std::nullopt, 1.0, 0.0};
  {
    Matrix gram = Matrix::Zero(8, 8);
    for (const auto& b : result.unheralded.branches())
      gram += b.kraus_gram();
    result.tp_defect =
        (gram - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  }

  if (has_herald) {
    // Herald passes when the observed check outcome differs from the
    // observed primary outcome (cavity found empty).
    std::array<Matrix, 2> choi_h{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
    for (const auto& [path, grid] : table) {
      if (path.size() < 2) continue;
      const Matrix c = choi_from_table(grid);
      for (int obs = 0; obs < 2; ++obs)
        choi_h[obs] += conf[path[0]][obs] * conf[path[1]][1 - obs] * c;
    }
    const double total =
        (choi_h[0].trace() + choi_h[1].trace()).real();
    result.herald_probability = total / 8.0;
    if (result.herald_probability > 1e-12) {
      const double scale = 8.0 / total;
      result.heralded = instrument_from_chois(
          {scale * choi_h[0], scale * choi_h[1]},
          std::max(1e-8, options.tp_tol), 1.0);
    }
  }
  return result;
}

QuantumInstrument simulate_instrument(const PulseSchedule& schedule,
                                      const DeviceParams& params,
                                      const SimulateOptions& options) {
  SimulationResult res = simulate_protocol(schedule, params, options);
  if (options.herald) {
    if (!res.heralded)
      throw ValidationError("schedule has no herald segment");
    return *res.heralded;
  }
  return res.unheralded;
}

QuantumInstrument ideal_instrument(const SubsetParitySpec& spec) {
  spec.validate();
  const Matrix sigma = pauli_operator(spec.label());
  const Matrix id = Matrix::Identity(8, 8);
  return projective_instrument({(id + sigma) / 2.0, (id - sigma) / 2.0},
                               {"0", "1"});
}

Matrix product_preparation(const std::array<double, 3>& prep_angles) {
  Matrix rho = Matrix::Identity(1, 1);
  for (int k = 0; k < 3; ++k) {
    Vector psi(2);
    psi << Complex(std::cos(prep_angles[k] / 2.0), 0.0),
        Complex(0.0, -std::sin(prep_angles[k] / 2.0));
    rho = kron(rho, psi * psi.adjoint());
  }
  return rho;
}

RealVector outcome_distribution(const QuantumInstrument& qi,
                                const std::array<double, 3>& prep_angles) {
  return povm_from_instrument(qi).outcome_probabilities(
      product_preparation(prep_angles));
}

OutcomeRecord simulate_shots(const PulseSchedule& schedule,
                             const DeviceParams& params,
                             const std::array<double, 3>& prep_angles,
                             std::int64_t shots, std::uint64_t seed,
                             const SimulateOptions& options) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  params.validate();
  Simulator sim(params, options);

  // Fold register preparation errors directly into the prepared state.
  Matrix rho = product_preparation(prep_angles);
  for (int k = 0; k < 3; ++k) {
    const double p = params.residual_excitation[k];
    if (p == 0.0) continue;
    const Matrix x = pauli_operator(std::string(k, 'I') + "X" +
                                    std::string(2 - k, 'I'));
    rho = (1.0 - p) * rho + p * x * rho * x;
  }

  auto leaves = sim.propagate(sim.initial_blocks(rho), schedule.segments());
  const auto& conf = params.readout_assignment;
  const bool has_herald = schedule.has_herald();

  // Joint observed distribution over (outcome, herald bit).
  std::map<std::pair<int, int>, double> probs;
  for (const auto& leaf : leaves) {
    const double w = leaf.reg.trace().real();
    if (w <= 0.0) continue;
    for (int c1 = 0; c1 < 2; ++c1) {
      if (!has_herald) {
        probs[{c1, -1}] += w * conf[leaf.outcomes[0]][c1];
      } else {
        for (int c2 = 0; c2 < 2; ++c2)
          probs[{c1, c2 != c1 ? 1 : 0}] +=
              w * conf[leaf.outcomes[0]][c1] * conf[leaf.outcomes[1]][c2];
      }
    }
  }

  OutcomeRecord rec;
  rec.shots = shots;
  rec.seed = seed;
  CounterRng rng(seed);
  std::vector<std::pair<std::pair<int, int>, double>> dist(probs.begin(),
                                                           probs.end());
  double total = 0.0;
  for (const auto& [k, v] : dist) total += v;
  for (std::int64_t s = 0; s < shots; ++s) {
    double u = rng.uniform(static_cast<std::uint64_t>(s)) * total;
    std::pair<int, int> pick = dist.back().first;
    for (const auto& [k, v] : dist) {
      if (u < v) {
        pick = k;
        break;
      }
      u -= v;
    }
    ++rec.counts[pick];
  }
  return rec;
}

}  // namespace parityprobe
