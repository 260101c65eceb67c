#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "span_program.hpp"

namespace spansim {

// Unit vector families used by dual adversary constructions:
// <mu_i|nu_j> = q/(2(q-1)) (1 - delta_ij).
struct MuNu {
  std::vector<Vector> mu;
  std::vector<Vector> nu;
};
MuNu mu_nu(int q);

// Vector families {u_xj}, {v_yj} realizing
// rho_xy - sigma_xy = sum_{j: x_j != y_j} <u_xj|v_yj>.
struct ConvertingVectorSet {
  std::vector<std::string> inputs;
  int n = 0;
  int q = 0;
  int m = 0;
  std::vector<std::vector<Vector>> u;  // [x][j], each of dimension m
  std::vector<std::vector<Vector>> v;

  int input_count() const { return static_cast<int>(inputs.size()); }
  int index_of(const std::string& x) const;
  double w_plus(int x_index) const;
  double w_minus(int x_index) const;
  double max_w_plus() const;
  double max_w_minus() const;
  double witness_bound() const;  // W: max over inputs of max(w+, w-)
  void validate_shapes() const;
};

struct GramPair {
  std::vector<Vector> rho;
  std::vector<Vector> sigma;
  Matrix rho_gram;
  Matrix sigma_gram;

  static GramPair from_states(std::vector<Vector> rho_states, std::vector<Vector> sigma_states);
  int state_dim() const { return rho.empty() ? 0 : static_cast<int>(rho.front().size()); }
};

struct CvsValidation {
  bool ok = false;
  double max_residual = 0.0;
};
CvsValidation validate_cvs(const ConvertingVectorSet& cvs, const GramPair& gram,
                           double tol = 1e-8);

// Swap the two families; exchanges positive and negative witness sizes and is
// an exact involution.
ConvertingVectorSet complement(const ConvertingVectorSet& cvs);

// Rescale both families so the maximum positive and negative witness sizes
// agree (each lands on the geometric mean); pairwise products are unchanged.
ConvertingVectorSet normalize_cvs(const ConvertingVectorSet& cvs);

// Function-evaluation instance of state conversion derived from a span
// program: rho_x = |0>, sigma_x = |f(x)>, with two-block witness vectors.
// Requires the letter subspaces of each part to be mutually orthogonal.
struct BridgedInstance {
  ConvertingVectorSet cvs;
  GramPair gram;
  std::vector<int> f;  // f(x) per input
};
BridgedInstance cvs_from_span_program(const SpanProgram& p,
                                      const std::vector<std::string>& inputs,
                                      const Tolerance& tol = {});

// Index layout of (C^2 (x) H) + (C^n (x) C^q (x) C^m).
struct ConversionSpace {
  int n = 0;
  int q = 0;
  int m = 0;
  int state_dim = 0;
  int dim() const { return 2 * state_dim + n * q * m; }
  int pair_index(int b, int h) const { return b * state_dim + h; }
  int witness_index(int j, int a, int k) const {
    return 2 * state_dim + (j * q + a) * m + k;
  }
};

Vector pair_state(const ConversionSpace& space, int b, const Vector& state);
Vector t_state(const ConversionSpace& space, const GramPair& gram, int x_index, int sign);

struct ConversionUnitary {
  double alpha = 0.0;
  double eps_hat = 0.0;
  ConversionSpace space;
  UnitaryEigensystem eigensystem;  // queries_per_application = 2
  Matrix kernel_projector;         // the projector onto span{psi_y}^perp
};

// U = (2 Pi_x - I)(2 Lambda^{alpha, eps_hat} - I) over the conversion space.
ConversionUnitary conversion_unitary(const ConvertingVectorSet& cvs, const GramPair& gram,
                                     const std::string& x, double alpha, double eps_hat,
                                     const Tolerance& tol = {});

// psi_x = sqrt(eps_hat/alpha) |t_{x-}> - sum_j |j>|mu_{x_j}>|u_{xj}>.
Vector probe_vector(const ConvertingVectorSet& cvs, const GramPair& gram,
                    const ConversionSpace& space, int x_index, double alpha, double eps_hat);

struct ProbeRecord {
  int round = 0;
  bool complement = false;
  double alpha = 0.0;
  double estimate = 0.0;
};

struct ConvertResult {
  double distance = 0.0;
  double alpha_stop = 0.0;
  bool used_complement = false;
  bool flagged = false;  // probing loop exhausted without a trigger
  QueryLedger ledger;
  std::vector<ProbeRecord> probe_trace;
};

// Fixed (normalized converting vector set, Gram pair, input); caches per-round
// eigensystems and exact probabilities so repeated trials only sample.
class ConvertContext {
 public:
  ConvertContext(ConvertingVectorSet cvs, GramPair gram, std::string x);

  ConvertResult run(double eps, double p, Rng& rng);

  double witness_bound() const { return witness_bound_; }
  double w_plus() const;
  double w_minus() const;

 private:
  struct RoundData {
    ConversionUnitary unitary;
    QpeConfig qpe;
    double probability = 0.0;
    std::uint64_t inner_cost = 0;
  };
  const RoundData& round(int round_index, bool complement, double eps_hat);

  ConvertingVectorSet cvs_;
  ConvertingVectorSet complement_;
  GramPair gram_;
  std::string x_;
  int x_index_;
  double witness_bound_;
  double cached_eps_hat_ = -1.0;
  std::vector<std::optional<RoundData>> cache_primary_;
  std::vector<std::optional<RoundData>> cache_complement_;
};

ConvertResult convert(const ConvertingVectorSet& cvs, const GramPair& gram,
                      const std::string& x, double eps, double p, Rng& rng);

struct LemmaCheck {
  bool applicable = false;
  bool holds = false;
  double measured = 0.0;
  double bound = 0.0;
};

// The four state-conversion inequalities, measured against exact simulation:
// (a) low-phase mass of t_{x-} at most eps_hat^2/2,
// (b) all-zeros probability at least (1 - 5 eps_hat)/2 once alpha >= w+,
// (c) wrong-phase mass of t_{x+} at most 10 eps_hat under the probe hypothesis,
// (d) reflection distance at most 6 sqrt(eps_hat) under the same hypothesis.
struct LemmaSuiteReport {
  LemmaCheck low_phase_mass;
  LemmaCheck probe_probability;
  LemmaCheck plus_leakage;
  LemmaCheck final_distance;
  double w_plus = 0.0;
  double w_minus = 0.0;
};
LemmaSuiteReport lemma_suite(const ConvertingVectorSet& cvs, const GramPair& gram,
                             const std::string& x, double alpha, double eps_hat);

}  // namespace spansim
