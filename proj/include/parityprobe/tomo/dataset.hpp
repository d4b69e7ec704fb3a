#pragma once

#include "parityprobe/serialize.hpp"
#include "parityprobe/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace parityprobe {

/// Rotation-indexed click statistics. shots == 0 marks exact probabilities,
/// stored directly in `clicks`.
struct TomographyDataset {
  struct Row {
    std::string label;
    double clicks = 0.0;
    double shots = 0.0;
    double frequency() const { return shots > 0.0 ? clicks / shots : clicks; }
  };

  std::string operator_label;
  bool herald = false;
  std::uint64_t seed = 0;
  std::vector<Row> rows;

  void validate() const;
  Json to_json() const;
  static TomographyDataset from_json(const Json& j);
};

/// Conditioned tomograms for instrument reconstruction: one block per
/// preparation, each with outcome probabilities and per-outcome datasets.
struct InstrumentDataset {
  struct PrepBlock {
    std::string prep_label;
    std::array<double, 2> outcome_probability{};
    std::array<TomographyDataset, 2> tomograms;
  };

  std::string operator_label;
  bool herald = false;
  std::uint64_t seed = 0;
  std::vector<PrepBlock> preps;

  Json to_json() const;
  static InstrumentDataset from_json(const Json& j);
};

}  // namespace parityprobe
