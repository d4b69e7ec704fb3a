#pragma once

#include "parityprobe/types.hpp"

#include <vector>

namespace parityprobe {

/// Positive effects summing to identity. A binary POVM is fully described by
/// its first effect E, with the complement I - E implied.
class Povm {
 public:
  Povm(std::vector<Matrix> effects, double psd_tol = kPsdTol,
       double completeness_tol = kCompletenessTol);

  /// Binary convenience constructor from the first effect.
  static Povm binary(const Matrix& effect, double psd_tol = kPsdTol);

  const std::vector<Matrix>& effects() const { return effects_; }
  const Matrix& effect(std::size_t i) const { return effects_.at(i); }
  std::size_t num_outcomes() const { return effects_.size(); }
  Index dim() const { return dim_; }

  /// First effect of a binary POVM.
  const Matrix& first() const;

  RealVector outcome_probabilities(const Matrix& rho) const;

 private:
  std::vector<Matrix> effects_;
  Index dim_ = 0;
};

}  // namespace parityprobe
