#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "numeric.hpp"

namespace spansim {

// Exact running count of oracle invocations, attributed per subroutine label.
struct QueryLedger {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> breakdown;

  void charge(const std::string& label, std::uint64_t queries);
  void merge(const QueryLedger& other);
};

// Deterministic RNG with bit-stable helpers (the standard distributions are
// implementation-defined, which would break byte-identical CSV output).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

// Deterministic seed derivation for (stream, substream) pairs.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Parameters of the parallel phase-estimation circuit: `copies` t-qubit copies,
// each applying powers of U summing to big_t - 1 applications.
struct QpeConfig {
  double theta = 0.0;  // precision
  double eps = 0.0;    // accuracy
  int t = 0;           // qubits per copy
  std::int64_t big_t = 0;  // 2^t
  int copies = 0;      // parallel copies c
  double beta = 0.0;   // max_{|phi| in [theta, pi]} |h0(phi)|^2, the one-copy leak

  std::uint64_t checking_queries(int queries_per_application) const;
  std::uint64_t reflection_queries(int queries_per_application) const;
};

// Smallest power-of-two register with big_t >= 2/theta and the smallest copy
// count with beta^copies <= eps. beta is found by dense grid maximization with
// local refinement.
QpeConfig plan_qpe(double theta, double eps);

// h0(theta) = (1/T) sum_{k<T} e^{ik theta}: overlap of the one-copy output with
// the all-zeros outcome.
Complex phase_amplitude(double theta, std::int64_t big_t);
double phase_amplitude_sq(double theta, std::int64_t big_t);

// One-copy output amplitudes h(theta): component y is (1/T) sum_k e^{ik(theta - 2 pi y / T)}.
Vector one_copy_amplitudes(double theta, std::int64_t big_t);

// Conjugated first row of the per-copy circuit map: component k is
// conj(<0| D_copy(theta) |k>) with D_copy = QFT^dag diag(e^{ik theta}) H^{ot}.
Vector one_copy_conjugate_row(double theta, std::int64_t big_t);

// Exact probability of the all-zeros ancilla outcome of Phase Checking:
// sum_l |<u_l|input>|^2 |h0(theta_l)|^{2c}. Charges c (T-1) q oracle queries.
double checking_probability(const UnitaryEigensystem& es, const Vector& input,
                            const QpeConfig& cfg, QueryLedger* ledger = nullptr,
                            const std::string& label = "phase_checking");

// Closed-form description of R(U) applied to input_A |0>_B: per eigenvector,
// the ancilla register holds 2 h0^c |h_tilde>^{(x)c} - |0>_B.
struct ReflectionOutput {
  Vector coefficients;      // a_l = <u_l|input>
  RealVector h0_sq_pow;     // |h0(theta_l)|^{2c}
  std::vector<Vector> h;        // per-eigenvector one-copy amplitudes (optional)
  std::vector<Vector> h_tilde;  // per-eigenvector conjugate rows (optional)
  std::int64_t big_t = 0;
  int copies = 0;

  // Norm of R(U)(input_A |0>_B), evaluated with the Gram-matrix method.
  double output_norm() const;
};

ReflectionOutput phase_reflection_output(const UnitaryEigensystem& es, const Vector& input,
                                         const QpeConfig& cfg, bool with_vectors = false);

// |R(U)(input_A|0>_B) - target_A|0>_B|, all tensor-power inner products taken
// as c-th powers of T-dimensional ones. Charges 2 c (T-1) q oracle queries.
double reflection_distance(const UnitaryEigensystem& es, const Vector& input,
                           const Vector& target, const QpeConfig& cfg,
                           QueryLedger* ledger = nullptr,
                           const std::string& label = "phase_reflection");

// Statistics-level model of amplitude estimation: with probability
// 1 - fail_prob the estimate is true_prob plus uniform noise in [-delta, delta]
// (clamped to [0,1]); otherwise it is uniform on [0,1]. Charges
// ceil(1/(delta fail_prob)) * inner_cost queries.
double amplitude_estimation_sim(double true_prob, double delta, double fail_prob,
                                std::uint64_t inner_cost, Rng& rng,
                                QueryLedger* ledger = nullptr,
                                const std::string& label = "amplitude_estimation");

}  // namespace spansim
