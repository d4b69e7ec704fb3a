#pragma once

#include "parityprobe/channel.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/types.hpp"

#include <string>
#include <vector>

namespace parityprobe {

/// Measurement process: one trace-non-increasing branch map per outcome,
/// summing to a trace-preserving map.
class QuantumInstrument {
 public:
  QuantumInstrument(std::vector<Channel> branches,
                    std::vector<std::string> labels = {},
                    double tp_tol = kCompletenessTol);

  const std::vector<Channel>& branches() const { return branches_; }
  const Channel& branch(std::size_t i) const { return branches_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_outcomes() const { return branches_.size(); }
  Index dim_in() const { return branches_.front().dim_in(); }
  Index dim_out() const { return branches_.front().dim_out(); }

  /// Max-norm deviation of Sum_i (F^i)^dag(I) from identity. Zero for an
  /// exactly trace-preserving instrument; post-selected (heralded)
  /// reconstructions may carry a small defect.
  double tp_defect() const { return tp_defect_; }

 private:
  std::vector<Channel> branches_;
  std::vector<std::string> labels_;
  double tp_defect_ = 0.0;
};

/// POVM with effects E_i = Sum_m (K^i_m)^dag K^i_m.
Povm povm_from_instrument(const QuantumInstrument& qi);

/// Channel rho -> Sum_i F^i(rho) (x) |i><i| with Kraus set {K^i_m (x) |i>}.
/// Output ordering: system factor first, outcome register second.
Channel qi_channel(const QuantumInstrument& qi);

/// Projective instrument with branches rho -> P^i rho P^i.
QuantumInstrument projective_instrument(const std::vector<Matrix>& projectors,
                                        std::vector<std::string> labels = {});

}  // namespace parityprobe
