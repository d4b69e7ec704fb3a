#include "parityprobe/cli/pipeline.hpp"

#include "parityprobe/channel.hpp"
#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"
#include "parityprobe/rng.hpp"
#include "parityprobe/tomo/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace parityprobe {

namespace fs = std::filesystem;

namespace {

std::mutex log_mutex;

void log_line(const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << msg << "\n";
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string herald_name(bool h) { return h ? "heralded" : "unheralded"; }

int worker_count(std::size_t jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PARITYPROBE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::min<int>(n, static_cast<int>(jobs));
}

double default_theta(const SubsetParitySpec& spec) {
  return spec.subset_size() == 3 ? kPi : 2.0 * kPi / 5.0;
}

template <typename T>
T get_or(const Json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

// ---- config ------------------------------------------------------------

Json device_to_json(const DeviceParams& p) {
  Json j;
  j["chi_mhz"] = p.chi;
  j["chi_qq_mhz"] = p.chi_qq;
  j["kerr_mhz"] = p.kerr;
  j["chi_prime_mhz"] = p.chi_prime;
  j["cavity_t1_us"] = p.cavity_t1_us;
  j["qubit_t1_us"] = p.qubit_t1_us;
  j["qubit_t2_us"] = p.qubit_t2_us;
  j["readout_assignment"] = p.readout_assignment;
  j["fock_cutoff"] = p.fock_cutoff;
  j["residual_excitation"] = p.residual_excitation;
  j["unselective_gate_ns"] = p.unselective_gate_ns;
  j["selective_gate_ns"] = p.selective_gate_ns;
  j["readout_ns"] = p.readout_ns;
  j["selective_leakage"] = p.selective_leakage;
  return j;
}

DeviceParams device_from_json(const Json& j) {
  DeviceParams base;
  const std::string preset = get_or<std::string>(j, "preset", "reference");
  if (preset == "reference")
    base = DeviceParams::reference();
  else if (preset == "ideal")
    base = DeviceParams::ideal();
  else if (preset != "default")
    throw ConfigError("unknown device preset '" + preset + "'");
  base.chi = get_or(j, "chi_mhz", base.chi);
  base.chi_qq = get_or(j, "chi_qq_mhz", base.chi_qq);
  base.kerr = get_or(j, "kerr_mhz", base.kerr);
  base.chi_prime = get_or(j, "chi_prime_mhz", base.chi_prime);
  base.cavity_t1_us = get_or(j, "cavity_t1_us", base.cavity_t1_us);
  base.qubit_t1_us = get_or(j, "qubit_t1_us", base.qubit_t1_us);
  base.qubit_t2_us = get_or(j, "qubit_t2_us", base.qubit_t2_us);
  base.readout_assignment =
      get_or(j, "readout_assignment", base.readout_assignment);
  base.fock_cutoff = get_or(j, "fock_cutoff", base.fock_cutoff);
  base.residual_excitation =
      get_or(j, "residual_excitation", base.residual_excitation);
  base.unselective_gate_ns =
      get_or(j, "unselective_gate_ns", base.unselective_gate_ns);
  base.selective_gate_ns =
      get_or(j, "selective_gate_ns", base.selective_gate_ns);
  base.readout_ns = get_or(j, "readout_ns", base.readout_ns);
  base.selective_leakage =
      get_or(j, "selective_leakage", base.selective_leakage);
  return base;
}

void ExperimentConfig::validate() const {
  if (operators.empty()) throw ConfigError("operator list must be non-empty");
  if (shots_per_rotation < 0) throw ConfigError("shots must be >= 0");
  if (scan_shots < 0) throw ConfigError("scan_shots must be >= 0");
  if (scan_points < 2) throw ConfigError("scan_points must be >= 2");
  if (!(step_ns > 0.0)) throw ConfigError("step_ns must be positive");
  if (s_restarts < 1) throw ConfigError("s_restarts must be >= 1");
  try {
    device.validate();
    for (const auto& op : operators) op.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  ExperimentConfig c;
  if (j.contains("device")) c.device = device_from_json(j.at("device"));
  c.noise = get_or(j, "noise", c.noise);
  if (!j.contains("operators") || !j.at("operators").is_array())
    throw ConfigError("config requires an 'operators' array");
  for (const auto& jo : j.at("operators")) {
    SubsetParitySpec spec;
    if (jo.is_string()) {
      spec = SubsetParitySpec::from_label(jo.get<std::string>(), kPi, 5.0);
      spec.theta = default_theta(spec);
    } else if (jo.is_object()) {
      if (!jo.contains("label"))
        throw ConfigError("operator entries need a 'label'");
      spec = SubsetParitySpec::from_label(jo.at("label").get<std::string>(),
                                          kPi, get_or(jo, "n0", 5.0));
      spec.theta = get_or(jo, "theta", default_theta(spec));
    } else {
      throw ConfigError("operator entries must be strings or objects");
    }
    c.operators.push_back(spec);
  }
  c.shots_per_rotation =
      get_or<std::int64_t>(j, "shots_per_rotation", c.shots_per_rotation);
  const std::string h = get_or<std::string>(j, "herald", "off");
  if (h == "off")
    c.herald = HeraldSetting::Off;
  else if (h == "on")
    c.herald = HeraldSetting::On;
  else if (h == "both")
    c.herald = HeraldSetting::Both;
  else
    throw ConfigError("herald must be one of off/on/both");
  if (!j.contains("seed")) throw ConfigError("config requires a 'seed'");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
  c.step_ns = get_or(j, "step_ns", c.step_ns);
  c.scan_shots = get_or<std::int64_t>(j, "scan_shots", c.scan_shots);
  c.scan_points = get_or(j, "scan_points", c.scan_points);
  c.s_restarts = get_or(j, "s_restarts", c.s_restarts);
  c.instrument_s_measures =
      get_or(j, "instrument_s_measures", c.instrument_s_measures);
  c.validate();
  return c;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["device"] = device_to_json(device);
  j["device"]["preset"] = "default";
  j["noise"] = noise;
  j["operators"] = Json::array();
  for (const auto& op : operators)
    j["operators"].push_back(
        {{"label", op.label()}, {"theta", op.theta}, {"n0", op.n0}});
  j["shots_per_rotation"] = shots_per_rotation;
  j["herald"] = herald == HeraldSetting::Off
                    ? "off"
                    : (herald == HeraldSetting::On ? "on" : "both");
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["step_ns"] = step_ns;
  j["scan_shots"] = scan_shots;
  j["scan_points"] = scan_points;
  j["s_restarts"] = s_restarts;
  j["instrument_s_measures"] = instrument_s_measures;
  return j;
}

// ---- metric report -------------------------------------------------------

Json MetricReport::to_json() const {
  Json j;
  j["operator"] = op;
  j["herald"] = herald;
  j["herald_probability"] = herald_probability;
  j["tp_defect"] = tp_defect;
  j["assignment"] = {{"offset", assignment.offset},
                     {"contrast", assignment.contrast},
                     {"fidelity", assignment.fidelity}};
  j["specificity"] = {{"c_i", spec_report.c_i},
                      {"c_t", spec_report.c_t},
                      {"c_o", spec_report.c_o},
                      {"c_max", spec_report.c_max},
                      {"theta_s_deg", spec_report.theta_s_deg},
                      {"wrong_sign", spec_report.wrong_sign}};
  j["detector"] = {{"f_j", det_f_j},
                   {"d_j", det_d_j},
                   {"f_s", det_f_s},
                   {"d_s", det_d_s}};
  j["instrument"] = {{"f_j", qi_f_j}, {"d_j", qi_d_j}};
  if (qi_f_s) j["instrument"]["f_s"] = *qi_f_s;
  if (qi_d_s) j["instrument"]["d_s"] = *qi_d_s;
  j["fits"] = {{"detector",
                {{"residual", detector_fit.residual},
                 {"kkt", detector_fit.kkt},
                 {"iterations", detector_fit.iterations},
                 {"converged", detector_fit.converged}}},
               {"instrument",
                {{"residual", instrument_fit.residual},
                 {"kkt", instrument_fit.kkt},
                 {"iterations", instrument_fit.iterations},
                 {"converged", instrument_fit.converged}}}};
  return j;
}

MetricReport MetricReport::from_json(const Json& j) {
  MetricReport r;
  r.op = j.at("operator").get<std::string>();
  r.herald = j.at("herald").get<bool>();
  r.herald_probability = j.at("herald_probability").get<double>();
  r.tp_defect = j.at("tp_defect").get<double>();
  const auto& ja = j.at("assignment");
  r.assignment.offset = ja.at("offset").get<double>();
  r.assignment.contrast = ja.at("contrast").get<double>();
  r.assignment.fidelity = ja.at("fidelity").get<double>();
  const auto& js = j.at("specificity");
  r.spec_report.c_i = js.at("c_i").get<double>();
  r.spec_report.c_t = js.at("c_t").get<double>();
  r.spec_report.c_o = js.at("c_o").get<double>();
  r.spec_report.c_max = js.at("c_max").get<double>();
  r.spec_report.theta_s_deg = js.at("theta_s_deg").get<double>();
  r.spec_report.wrong_sign = js.at("wrong_sign").get<bool>();
  const auto& jd = j.at("detector");
  r.det_f_j = jd.at("f_j").get<double>();
  r.det_d_j = jd.at("d_j").get<double>();
  r.det_f_s = jd.at("f_s").get<double>();
  r.det_d_s = jd.at("d_s").get<double>();
  const auto& jq = j.at("instrument");
  r.qi_f_j = jq.at("f_j").get<double>();
  r.qi_d_j = jq.at("d_j").get<double>();
  if (jq.contains("f_s")) r.qi_f_s = jq.at("f_s").get<double>();
  if (jq.contains("d_s")) r.qi_d_s = jq.at("d_s").get<double>();
  return r;
}

// ---- run pipeline ----------------------------------------------------------

namespace {

struct Job {
  SubsetParitySpec spec;
  bool herald = false;
  std::uint64_t seed = 0;
  fs::path dir;
};

std::vector<ScanRow> make_scan(const Povm& povm, int points,
                               std::int64_t shots, std::uint64_t seed) {
  std::vector<ScanRow> rows;
  int stream = 0;
  for (int q = 0; q < 3; ++q) {
    for (int i = 0; i < points; ++i) {
      const double angle = 2.0 * kPi * i / (points - 1);
      std::array<double, 3> angles{0.0, 0.0, 0.0};
      angles[static_cast<std::size_t>(q)] = angle;
      const Matrix rho = product_preparation(angles);
      // click = odd outcome, effect index 1
      double p = std::clamp((povm.effect(1) * rho).trace().real(), 0.0, 1.0);
      ScanRow row{q, angle, p, shots};
      if (shots > 0) {
        auto gen = seeded_engine(seed, static_cast<std::uint64_t>(stream));
        row.frequency =
            static_cast<double>(std::binomial_distribution<std::int64_t>(
                shots, p)(gen)) /
            static_cast<double>(shots);
      }
      rows.push_back(row);
      ++stream;
    }
  }
  return rows;
}

void write_scan_csv(const fs::path& path, const std::vector<ScanRow>& rows) {
  std::ofstream out(path);
  out << "qubit,angle_rad,frequency,shots\n";
  for (const auto& r : rows)
    out << (r.qubit + 1) << "," << fmt(r.angle) << "," << fmt(r.frequency)
        << "," << r.shots << "\n";
}

std::vector<ScanRow> read_scan_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing scan file " + path.string());
  std::vector<ScanRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ScanRow r;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    ss >> r.qubit >> r.angle >> r.frequency >> r.shots;
    r.qubit -= 1;
    rows.push_back(r);
  }
  return rows;
}

RunArtifacts run_single(const ExperimentConfig& config, const Job& job) {
  fs::create_directories(job.dir);
  const std::string tag = job.spec.label() + " " + herald_name(job.herald);
  log_line("[run] " + tag + ": simulating");

  const PulseSchedule schedule =
      build_schedule(job.spec, config.device, job.herald);
  write_json_file(job.dir / "schedule.json", schedule.to_json());

  SimulateOptions sim_opts;
  sim_opts.noise = config.noise;
  sim_opts.herald = job.herald;
  sim_opts.step_ns = config.step_ns;
  const SimulationResult sim =
      simulate_protocol(schedule, config.device, sim_opts);
  const QuantumInstrument& qi_true =
      job.herald ? *sim.heralded : sim.unheralded;
  write_json_file(job.dir / "instrument_true.json",
                  instrument_to_json(qi_true));
  const Povm povm_true = povm_from_instrument(qi_true);
  write_json_file(job.dir / "povm_true.json", povm_to_json(povm_true));

  log_line("[run] " + tag + ": tomography");
  const RotationSet post = RotationSet::overcomplete();
  const RotationSet prep = RotationSet::complete();
  const std::int64_t shots = config.shots_per_rotation;
  TomographyDataset det_data = synth_detector_dataset(
      povm_true, post, shots, splitmix64(job.seed ^ 0x11));
  det_data.operator_label = job.spec.label();
  det_data.herald = job.herald;
  write_json_file(job.dir / "detector_dataset.json", det_data.to_json());

  const auto det_fit = detector_tomography(
      det_data, post,
      shots == 0 ? DetectorFitMode::Inversion : DetectorFitMode::Constrained);
  write_json_file(job.dir / "povm_reconstructed.json",
                  povm_to_json(det_fit.povm));

  // Post-measurement tomograms are read out in the computational basis;
  // the ground-state projector keeps the local-rotation design complete.
  Matrix e_tomo = Matrix::Zero(8, 8);
  e_tomo(0, 0) = 1.0;
  const InstrumentDataset qi_data =
      synth_instrument_dataset(qi_true, prep, post, e_tomo, shots,
                               splitmix64(job.seed ^ 0x22));
  write_json_file(job.dir / "instrument_dataset.json", qi_data.to_json());
  const auto qi_fit = instrument_tomography(qi_data, prep, post, e_tomo);
  write_json_file(job.dir / "instrument_reconstructed.json",
                  instrument_to_json(qi_fit.instrument));

  log_line("[run] " + tag + ": metrics");
  const std::vector<ScanRow> scan =
      make_scan(povm_true, config.scan_points, config.scan_shots,
                splitmix64(job.seed ^ 0x33));
  write_scan_csv(job.dir / "scan.csv", scan);

  MetricReport rep;
  rep.op = job.spec.label();
  rep.herald = job.herald;
  rep.herald_probability = sim.herald_probability;
  rep.tp_defect = sim.tp_defect;
  rep.detector_fit = det_fit.diagnostics;
  rep.instrument_fit = qi_fit.diagnostics;

  std::vector<PreparationRecord> records;
  for (const auto& row : scan) {
    if (!job.spec.subset[static_cast<std::size_t>(row.qubit)]) continue;
    std::array<double, 3> angles{0.0, 0.0, 0.0};
    angles[static_cast<std::size_t>(row.qubit)] = row.angle;
    records.push_back({angles, row.frequency});
  }
  rep.assignment = assignment_fidelity(records, job.spec);

  rep.spec_report =
      specificity(det_fit.povm.first(), PauliString(job.spec.label()));

  const QuantumInstrument qi_ideal = ideal_instrument(job.spec);
  const Povm povm_ideal = povm_from_instrument(qi_ideal);

  // Heralded (renormalized) detectors reconstructed by inversion can stray
  // outside [0, I] by the post-selection defect; clamp before the channel
  // metrics.
  const Index d = det_fit.povm.dim();
  const Matrix lo = psd_clip(hermitize(det_fit.povm.first()), 1e-2);
  const Povm det_povm = Povm::binary(
      Matrix::Identity(d, d) -
      psd_clip(Matrix::Identity(d, d) - lo, 1e-2));

  const auto det_j =
      j_measures(detector_channel(det_povm), detector_channel(povm_ideal));
  rep.det_f_j = det_j.fidelity;
  rep.det_d_j = det_j.distance;

  OptimizerOptions sopt;
  sopt.restarts = config.s_restarts;
  sopt.seed = splitmix64(job.seed ^ 0x44);
  rep.det_f_s = detector_s_fidelity(det_povm, povm_ideal, sopt).value;
  rep.det_d_s = detector_s_distance(det_povm, povm_ideal, sopt).value;

  const auto qi_j =
      j_measures(qi_channel(qi_fit.instrument), qi_channel(qi_ideal));
  rep.qi_f_j = qi_j.fidelity;
  rep.qi_d_j = qi_j.distance;
  if (config.instrument_s_measures) {
    rep.qi_f_s = qi_s_fidelity(qi_fit.instrument, qi_ideal, sopt).value;
    rep.qi_d_s = qi_s_distance(qi_fit.instrument, qi_ideal, sopt).value;
  }

  write_json_file(job.dir / "report.json", rep.to_json());
  log_line("[run] " + tag + ": done (instrument F_J " + fmt(rep.qi_f_j) + ")");
  return RunArtifacts{rep.op, job.herald, job.dir, rep, scan};
}

const char* const kRunFiles[] = {
    "schedule.json",        "instrument_true.json",
    "povm_true.json",       "detector_dataset.json",
    "povm_reconstructed.json", "instrument_dataset.json",
    "instrument_reconstructed.json", "scan.csv", "report.json"};

}  // namespace

std::vector<RunArtifacts> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path out(config.output_dir);
  fs::create_directories(out);

  std::vector<bool> herald_flags;
  if (config.herald != HeraldSetting::On) herald_flags.push_back(false);
  if (config.herald != HeraldSetting::Off) herald_flags.push_back(true);

  std::vector<Job> jobs;
  for (const auto& op : config.operators)
    for (bool h : herald_flags) {
      Job job;
      job.spec = op;
      job.herald = h;
      job.seed = splitmix64(config.seed ^
                            (jobs.size() * 2654435761ull + 0x9e37ull));
      job.dir = out / (op.label() + "_" + herald_name(h));
      jobs.push_back(job);
    }

  std::vector<RunArtifacts> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = run_single(config, jobs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = worker_count(jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Manifest lists the successful runs; a stored first error is rethrown
  // after the partial outputs are on disk.
  Json manifest;
  const std::string config_text = config.to_json().dump(2);
  manifest["config_hash"] = fnv1a_hex(config_text);
  manifest["seed"] = config.seed;
  manifest["config"] = config.to_json();
  manifest["runs"] = Json::array();
  std::vector<RunArtifacts> ok;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) continue;
    Json run;
    run["operator"] = jobs[i].spec.label();
    run["herald"] = jobs[i].herald;
    run["dir"] = jobs[i].dir.filename().string();
    run["files"] = Json::array();
    for (const char* f : kRunFiles) run["files"].push_back(f);
    manifest["runs"].push_back(run);
    ok.push_back(results[i]);
  }
  write_json_file(out / "manifest.json", manifest);

  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return ok;
}

// ---- report ---------------------------------------------------------------

std::vector<fs::path> write_report_tables(const fs::path& results_dir) {
  const fs::path manifest_path = results_dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw std::runtime_error("no manifest.json in " + results_dir.string());
  const Json manifest = read_json_file(manifest_path);

  struct Row {
    std::string op;
    bool herald;
    fs::path dir;
    MetricReport rep;
  };
  std::vector<Row> rows;
  std::vector<std::string> missing;
  for (const auto& run : manifest.at("runs")) {
    const fs::path dir = results_dir / run.at("dir").get<std::string>();
    const fs::path rp = dir / "report.json";
    if (!fs::exists(rp)) {
      missing.push_back(rp.string());
      continue;
    }
    rows.push_back(Row{run.at("operator").get<std::string>(),
                       run.at("herald").get<bool>(), dir,
                       MetricReport::from_json(read_json_file(rp))});
  }
  for (const auto& m : missing) log_line("[report] missing artifact: " + m);

  std::vector<fs::path> written;
  auto open_table = [&](const std::string& name,
                        const std::string& header) {
    const fs::path p = results_dir / name;
    std::ofstream out(p);
    out << header << "\n";
    written.push_back(p);
    return out;
  };

  {
    auto out = open_table("assignment.csv",
                          "operator,herald,offset,contrast,assignment_fidelity");
    for (const auto& r : rows)
      out << r.op << "," << herald_name(r.herald) << ","
          << fmt(r.rep.assignment.offset) << ","
          << fmt(r.rep.assignment.contrast) << ","
          << fmt(r.rep.assignment.fidelity) << "\n";
  }
  {
    auto out = open_table("specificity.csv",
                          "operator,herald,c_i,c_t,c_o,c_max,theta_s_deg");
    for (const auto& r : rows)
      out << r.op << "," << herald_name(r.herald) << ","
          << fmt(r.rep.spec_report.c_i) << "," << fmt(r.rep.spec_report.c_t)
          << "," << fmt(r.rep.spec_report.c_o) << ","
          << fmt(r.rep.spec_report.c_max) << ","
          << fmt(r.rep.spec_report.theta_s_deg) << "\n";
  }
  {
    auto out =
        open_table("povm.csv", "operator,herald,f_j,d_j,f_s,d_s");
    for (const auto& r : rows)
      out << r.op << "," << herald_name(r.herald) << "," << fmt(r.rep.det_f_j)
          << "," << fmt(r.rep.det_d_j) << "," << fmt(r.rep.det_f_s) << ","
          << fmt(r.rep.det_d_s) << "\n";
  }
  {
    auto out = open_table("instrument.csv",
                          "operator,herald,f_j,d_j,f_s,d_s,herald_probability");
    for (const auto& r : rows) {
      out << r.op << "," << herald_name(r.herald) << "," << fmt(r.rep.qi_f_j)
          << "," << fmt(r.rep.qi_d_j) << ",";
      out << (r.rep.qi_f_s ? fmt(*r.rep.qi_f_s) : std::string()) << ",";
      out << (r.rep.qi_d_s ? fmt(*r.rep.qi_d_s) : std::string()) << ",";
      out << fmt(r.rep.herald_probability) << "\n";
    }
  }
  {
    auto out = open_table("scan.csv",
                          "operator,herald,qubit,angle_rad,frequency,shots");
    for (const auto& r : rows) {
      const fs::path sp = r.dir / "scan.csv";
      if (!fs::exists(sp)) {
        log_line("[report] missing artifact: " + sp.string());
        continue;
      }
      for (const auto& s : read_scan_csv(sp))
        out << r.op << "," << herald_name(r.herald) << "," << (s.qubit + 1)
            << "," << fmt(s.angle) << "," << fmt(s.frequency) << ","
            << s.shots << "\n";
    }
  }
  return written;
}

// ---- validate ---------------------------------------------------------------

std::vector<ScheduleDiagnostics> validate_experiment(
    const ExperimentConfig& config) {
  config.validate();
  std::vector<ScheduleDiagnostics> out;
  for (const auto& op : config.operators) {
    const PulseSchedule sched =
        build_schedule(op, config.device, config.herald != HeraldSetting::Off,
                       /*enforce_truncation=*/false);
    ScheduleDiagnostics d;
    d.op = op.label();
    d.window_ns = sched.timings().window_ns;
    d.partial_echo_ns = sched.timings().partial_echo_ns;
    d.max_mean_photon = sched.timings().max_mean_photon;
    d.overlap = pointer_separation(op.n0, op.theta).overlap;
    d.tail_mass = poisson_tail(d.max_mean_photon, config.device.fock_cutoff);
    d.overlap_warning = d.overlap > 1e-2;
    d.tail_failure = d.tail_mass > 1e-8;
    // Crude cost model calibrated on the reference device: noisy stepping
    // scales with step count and the square of the Fock cutoff.
    const double steps = sched.total_duration_ns() / config.step_ns;
    const double fock_sq = static_cast<double>(config.device.fock_cutoff) *
                           config.device.fock_cutoff;
    d.estimated_seconds = config.noise ? steps * fock_sq * 8.5e-6
                                       : 0.3 * fock_sq / 3600.0;
    out.push_back(d);
  }
  return out;
}

}  // namespace parityprobe
