#include "parityprobe/pauli.hpp"

#include "parityprobe/linalg.hpp"

namespace parityprobe {

namespace {

Matrix single_pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
  }
  return m;
}

Index letter_index(char c) {
  switch (c) {
    case 'I':
      return 0;
    case 'X':
      return 1;
    case 'Y':
      return 2;
    case 'Z':
      return 3;
    default:
      throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
  }
}

constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};

}  // namespace

PauliString::PauliString(std::string label) : label_(std::move(label)) {
  if (label_.empty()) throw ValidationError("empty Pauli label");
  for (char c : label_) (void)letter_index(c);
}

bool PauliString::is_identity() const {
  return label_.find_first_not_of('I') == std::string::npos;
}

Matrix PauliString::matrix() const { return pauli_operator(label_); }

Matrix pauli_operator(const std::string& label) {
  if (label.empty()) throw ValidationError("empty Pauli label");
  Matrix out = single_pauli(label[0]);
  for (std::size_t k = 1; k < label.size(); ++k)
    out = kron(out, single_pauli(label[k])).eval();
  return out;
}

std::vector<std::string> pauli_labels(Index num_qubits) {
  if (num_qubits < 1) throw ValidationError("need at least one qubit");
  const Index count = Index{1} << (2 * num_qubits);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    std::string label(static_cast<std::size_t>(num_qubits), 'I');
    Index v = i;
    for (Index q = num_qubits - 1; q >= 0; --q) {
      label[static_cast<std::size_t>(q)] = kLetters[v & 3];
      v >>= 2;
    }
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<Matrix> pauli_basis_matrices(Index num_qubits) {
  std::vector<Matrix> out;
  for (const auto& label : pauli_labels(num_qubits))
    out.push_back(pauli_operator(label));
  return out;
}

Index pauli_index(const std::string& label) {
  Index idx = 0;
  for (char c : label) idx = (idx << 2) | letter_index(c);
  return idx;
}

Vector pauli_expand_complex(const Matrix& m, Index num_qubits) {
  const Index dim = Index{1} << num_qubits;
  if (m.rows() != dim || m.cols() != dim)
    throw DimensionError("pauli_expand: dimension mismatch");
  const auto basis = pauli_basis_matrices(num_qubits);
  Vector coeffs(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    coeffs(static_cast<Index>(i)) =
        (basis[i] * m).trace() / static_cast<double>(dim);
  return coeffs;
}

RealVector pauli_expand(const Matrix& h, Index num_qubits) {
  if (!is_hermitian(h, 1e-10))
    throw ValidationError("pauli_expand: operator is not Hermitian");
  return pauli_expand_complex(h, num_qubits).real();
}

Matrix pauli_reconstruct(const RealVector& coeffs, Index num_qubits) {
  const auto basis = pauli_basis_matrices(num_qubits);
  if (static_cast<std::size_t>(coeffs.size()) != basis.size())
    throw DimensionError("pauli_reconstruct: coefficient count mismatch");
  const Index dim = Index{1} << num_qubits;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i)
    out += coeffs(static_cast<Index>(i)) * basis[i];
  return out;
}

}  // namespace parityprobe
