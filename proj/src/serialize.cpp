#include "parityprobe/serialize.hpp"

#include <fstream>
#include <vector>

namespace parityprobe {

Json matrix_to_json(const Matrix& m) {
  Json j;
  if (m.rows() == m.cols()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  std::vector<std::vector<double>> re(m.rows()), im(m.rows());
  for (Index r = 0; r < m.rows(); ++r) {
    re[r].resize(m.cols());
    im[r].resize(m.cols());
    for (Index c = 0; c < m.cols(); ++c) {
      re[r][c] = m(r, c).real();
      im[r][c] = m(r, c).imag();
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Matrix matrix_from_json(const Json& j) {
  Index rows, cols;
  if (j.contains("dim")) {
    rows = cols = j.at("dim").get<Index>();
  } else {
    rows = j.at("rows").get<Index>();
    cols = j.at("cols").get<Index>();
  }
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Index>(re.size()) != rows ||
      static_cast<Index>(im.size()) != rows)
    throw ValidationError("matrix JSON row count mismatch");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(re[r].size()) != cols ||
        static_cast<Index>(im[r].size()) != cols)
      throw ValidationError("matrix JSON column count mismatch");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
  }
  return m;
}

Json povm_to_json(const Povm& p) {
  Json j;
  j["effects"] = Json::array();
  for (const auto& e : p.effects()) j["effects"].push_back(matrix_to_json(e));
  return j;
}

Povm povm_from_json(const Json& j) {
  std::vector<Matrix> effects;
  for (const auto& e : j.at("effects")) effects.push_back(matrix_from_json(e));
  return Povm(std::move(effects));
}

Json channel_to_json(const Channel& ch) {
  Json j;
  j["dim_in"] = ch.dim_in();
  j["dim_out"] = ch.dim_out();
  j["kraus"] = Json::array();
  for (const auto& k : ch.kraus()) j["kraus"].push_back(matrix_to_json(k));
  return j;
}

Channel channel_from_json(const Json& j) {
  std::vector<Matrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  return Channel(std::move(kraus), Channel::TraceBehavior::Unchecked);
}

Json instrument_to_json(const QuantumInstrument& qi) {
  Json j;
  j["labels"] = qi.labels();
  j["branches"] = Json::array();
  for (const auto& b : qi.branches()) j["branches"].push_back(channel_to_json(b));
  return j;
}

QuantumInstrument instrument_from_json(const Json& j, double tp_tol) {
  std::vector<Channel> branches;
  for (const auto& b : j.at("branches")) branches.push_back(channel_from_json(b));
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  return QuantumInstrument(std::move(branches), std::move(labels), tp_tol);
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open for reading: " + path.string());
  return Json::parse(in);
}

}  // namespace parityprobe
