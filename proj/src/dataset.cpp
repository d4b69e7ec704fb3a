#include "parityprobe/tomo/dataset.hpp"

namespace parityprobe {

void TomographyDataset::validate() const {
  for (const auto& r : rows) {
    if (r.shots < 0.0) throw ValidationError("shots must be >= 0");
    if (r.shots > 0.0 && (r.clicks < 0.0 || r.clicks > r.shots))
      throw ValidationError("clicks must lie in [0, shots]");
    if (r.shots == 0.0 && (r.clicks < -1e-12 || r.clicks > 1.0 + 1e-12))
      throw ValidationError("exact frequency must lie in [0, 1]");
  }
}

Json TomographyDataset::to_json() const {
  Json j;
  j["operator"] = operator_label;
  j["herald"] = herald;
  j["seed"] = seed;
  j["rotations"] = Json::array();
  for (const auto& r : rows)
    j["rotations"].push_back(
        {{"label", r.label}, {"clicks", r.clicks}, {"shots", r.shots}});
  return j;
}

TomographyDataset TomographyDataset::from_json(const Json& j) {
  TomographyDataset d;
  d.operator_label = j.at("operator").get<std::string>();
  d.herald = j.at("herald").get<bool>();
  d.seed = j.value("seed", std::uint64_t{0});
  for (const auto& r : j.at("rotations"))
    d.rows.push_back(Row{r.at("label").get<std::string>(),
                         r.at("clicks").get<double>(),
                         r.at("shots").get<double>()});
  d.validate();
  return d;
}

Json InstrumentDataset::to_json() const {
  Json j;
  j["operator"] = operator_label;
  j["herald"] = herald;
  j["seed"] = seed;
  j["preparations"] = Json::array();
  for (const auto& p : preps) {
    Json jp;
    jp["prep"] = p.prep_label;
    jp["outcome_probability"] = p.outcome_probability;
    jp["tomograms"] = {p.tomograms[0].to_json(), p.tomograms[1].to_json()};
    j["preparations"].push_back(jp);
  }
  return j;
}

InstrumentDataset InstrumentDataset::from_json(const Json& j) {
  InstrumentDataset d;
  d.operator_label = j.at("operator").get<std::string>();
  d.herald = j.at("herald").get<bool>();
  d.seed = j.value("seed", std::uint64_t{0});
  for (const auto& jp : j.at("preparations")) {
    PrepBlock p;
    p.prep_label = jp.at("prep").get<std::string>();
    p.outcome_probability = jp.at("outcome_probability");
    p.tomograms = {TomographyDataset::from_json(jp.at("tomograms")[0]),
                   TomographyDataset::from_json(jp.at("tomograms")[1])};
    d.preps.push_back(std::move(p));
  }
  return d;
}

}  // namespace parityprobe
