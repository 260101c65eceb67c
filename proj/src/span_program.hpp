#pragma once

#include <optional>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "qpe.hpp"

namespace spansim {

// Input strings are digit strings over {0, ..., q-1}; the string interfaces
// support alphabets up to size 10.
inline constexpr int kMaxStringAlphabet = 10;

int letter_at(const std::string& x, int j, int q);
std::vector<std::string> all_inputs(int n, int q, std::size_t cap = 1u << 16);

// Span program (H, V, tau, A) with H = H_1 + ... + H_n + H_true + H_false and
// per-letter subspaces H_{j,a} stored as orthonormal bases in local H_j
// coordinates.
class SpanProgram {
 public:
  SpanProgram(int n, int q, std::vector<int> input_dims, int true_dim, int false_dim,
              std::vector<std::vector<Matrix>> letter_bases, Matrix a, Vector tau);

  int n() const { return n_; }
  int q() const { return q_; }
  int input_dim(int j) const { return input_dims_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& input_dims() const { return input_dims_; }
  int true_dim() const { return true_dim_; }
  int false_dim() const { return false_dim_; }
  int dim_h() const { return dim_h_; }
  int dim_v() const { return static_cast<int>(a_.rows()); }
  int part_offset(int j) const { return offsets_[static_cast<std::size_t>(j)]; }
  int true_offset() const { return offsets_[static_cast<std::size_t>(n_)]; }
  int false_offset() const { return offsets_[static_cast<std::size_t>(n_) + 1]; }

  // Basis of H_{j,a} in local H_j coordinates (input_dim(j) x k, orthonormal).
  const Matrix& letter_basis(int j, int a) const;
  // The same basis embedded into full H coordinates.
  Matrix letter_basis_embedded(int j, int a) const;

  const Matrix& a_matrix() const { return a_; }
  const Vector& tau() const { return tau_; }

  // Orthonormal columns spanning H(x) = H_{1,x_1} + ... + H_{n,x_n} + H_true.
  Matrix hx_basis(const std::string& x) const;
  Matrix hx_projector(const std::string& x) const;

  std::vector<std::string> all_inputs() const;

 private:
  void validate() const;

  int n_;
  int q_;
  std::vector<int> input_dims_;
  int true_dim_;
  int false_dim_;
  int dim_h_;
  std::vector<int> offsets_;                      // n+2 entries
  std::vector<std::vector<Matrix>> letter_bases_; // [j][a]
  Matrix a_;
  Vector tau_;
};

struct Witness {
  enum class Kind { positive, negative };
  Kind kind = Kind::positive;
  double size = 0.0;
  // Positive: the optimal |w> in full H coordinates. Negative: the row omega*A
  // as entry vector.
  Vector payload;
  // Negative only: the row functional omega on V as entry vector.
  Vector omega;
};

std::optional<Witness> positive_witness(const SpanProgram& p, const std::string& x,
                                        const Tolerance& tol = {});
std::optional<Witness> negative_witness(const SpanProgram& p, const std::string& x,
                                        const Tolerance& tol = {});
// Exactly one of the two exists for every input of a program that decides a
// function; throws Infeasible when neither does.
Witness witness(const SpanProgram& p, const std::string& x, const Tolerance& tol = {});

struct WitnessTable {
  std::vector<Witness> entries;  // aligned with the input list
  double max_positive = 0.0;
  double max_negative = 0.0;
  bool has_positive = false;
  bool has_negative = false;
  double max_size() const { return std::max(max_positive, max_negative); }
};
WitnessTable enumerate_witnesses(const SpanProgram& p, const std::vector<std::string>& inputs,
                                 const Tolerance& tol = {});

// tau -> c tau; positive witness sizes scale by c^2, negative ones by 1/c^2.
SpanProgram scale_target(const SpanProgram& p, double c);

// Balance the maximum positive and negative witness sizes over the input set
// (geometric mean on both sides), then rescale so the resulting witness bound
// is at least one.
SpanProgram scale_normalize(const SpanProgram& p, const std::vector<std::string>& inputs,
                            const Tolerance& tol = {});

// Span program deciding the negated function, with witness sizes that never
// increase. Requires tau in range(A).
SpanProgram negate(const SpanProgram& p, const Tolerance& tol = {});

// A~(alpha) = (1/alpha)|tau><hat0| + A on H~ = H + span{|hat0>}.
Matrix alpha_extended_map(const SpanProgram& p, double alpha);

struct AlgorithmUnitary {
  double alpha = 0.0;
  UnitaryEigensystem eigensystem;  // queries_per_application = 2
  int hat0_index = 0;
  Matrix kernel_projector;  // Lambda(alpha), kept for diagnostics
};

// U(P, x, alpha) = (2 Pi_x - I)(2 Lambda(alpha) - I) eigendecomposed over H~.
AlgorithmUnitary algorithm_unitary(const SpanProgram& p, const std::string& x, double alpha,
                                   const Tolerance& tol = {});

}  // namespace spansim
