#include "parityprobe/tomo/rotations.hpp"

#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"

#include <cmath>
#include <map>

namespace parityprobe {

namespace {

Eigen::Matrix2cd axis_rotation(char axis, double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  Eigen::Matrix2cd u;
  if (axis == 'X')
    u << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
  else
    u << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
  return u;
}

std::vector<std::string> split_label(const std::string& label) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = label.find('.', start);
    if (dot == std::string::npos) {
      tokens.push_back(label.substr(start));
      break;
    }
    tokens.push_back(label.substr(start, dot - start));
    start = dot + 1;
  }
  return tokens;
}

}  // namespace

Eigen::Matrix2cd rotation_token_unitary(const std::string& token) {
  if (token == "I") return Eigen::Matrix2cd::Identity();
  if (token == "Rx+") return axis_rotation('X', kPi / 2.0);
  if (token == "Rx-") return axis_rotation('X', -kPi / 2.0);
  if (token == "Ry+") return axis_rotation('Y', kPi / 2.0);
  if (token == "Ry-") return axis_rotation('Y', -kPi / 2.0);
  if (token == "Ry180") return axis_rotation('Y', kPi);
  throw ValidationError("unknown rotation token: " + token);
}

Matrix rotation_unitary(const std::string& label) {
  const auto tokens = split_label(label);
  if (tokens.size() != 3)
    throw ValidationError("rotation label must have 3 tokens: " + label);
  Matrix u = Matrix::Identity(1, 1);
  for (const auto& t : tokens) u = kron(u, rotation_token_unitary(t));
  return u;
}

RotationSet::RotationSet(Kind kind, const std::vector<std::string>& tokens)
    : kind_(kind) {
  for (const auto& a : tokens)
    for (const auto& b : tokens)
      for (const auto& c : tokens) {
        const std::string label = a + "." + b + "." + c;
        labels_.push_back(label);
        unitaries_.push_back(rotation_unitary(label));
      }
}

RotationSet RotationSet::complete() {
  return RotationSet(Kind::Complete, {"I", "Ry+", "Rx+", "Ry-"});
}

RotationSet RotationSet::overcomplete() {
  return RotationSet(Kind::Overcomplete,
                     {"I", "Rx+", "Rx-", "Ry+", "Ry-", "Ry180"});
}

Index RotationSet::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<Index>(i);
  throw ValidationError("rotation label not in set: " + label);
}

RealMatrix RotationSet::design_matrix(const Matrix& rho) const {
  const auto basis = pauli_basis_matrices(3);
  RealMatrix a(static_cast<Index>(size()), static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < size(); ++i) {
    const Matrix probe = unitaries_[i] * rho * unitaries_[i].adjoint();
    for (std::size_t j = 0; j < basis.size(); ++j)
      a(static_cast<Index>(i), static_cast<Index>(j)) =
          (basis[j] * probe).trace().real();
  }
  return a;
}

}  // namespace parityprobe
