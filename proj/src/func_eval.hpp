#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "span_program.hpp"

namespace spansim {

struct EvalConfig {
  double delta = 0.05;        // error tolerance
  double eps = 1.0 / 9.0;     // Phase Checking accuracy
  std::uint64_t rng_seed = 0;
};

struct EvalRound {
  double alpha = 0.0;
  int zeros_program = 0;    // all-zeros outcomes seen for the program check
  int zeros_negation = -1;  // same for the negation check; -1 when not run
};

struct EvalResult {
  int output_bit = 0;
  int rounds_used = 0;
  double alpha_final = 0.0;
  QueryLedger ledger;
  std::vector<EvalRound> per_round;
};

struct EvalBudget {
  int max_round_index = 0;  // loop runs for round indices 0..max_round_index
  int repetitions = 0;      // Bernoulli repetitions per check
};

// Round and repetition budget: L = ceil(log2 sqrt(3 W)),
// N = ceil((9/2) log2(L / delta)).
EvalBudget eval_budget(double witness_bound, double delta);

// Fixed (scaled program, its negation, witness bound, input); caches the exact
// per-round checking probabilities so repeated trials only sample.
class EvalContext {
 public:
  EvalContext(SpanProgram program, SpanProgram negation, double witness_bound,
              std::string x);

  EvalResult run(const EvalConfig& cfg);

  double round_probability(int round_index, bool negation, double eps);
  QpeConfig round_qpe(int round_index, double eps);
  double witness_bound() const { return witness_bound_; }

 private:
  struct RoundData {
    QpeConfig qpe;
    double prob_program = 0.0;
    double prob_negation = 0.0;
    std::uint64_t block_queries = 0;  // per repetition
  };
  const RoundData& round(int round_index, double eps);

  SpanProgram program_;
  SpanProgram negation_;
  double witness_bound_;
  std::string x_;
  double cached_eps_ = -1.0;
  std::vector<std::optional<RoundData>> cache_;
};

// Function evaluation by doubling alpha with majority-vote Phase Checking; the
// negation program must be negate(program) and witness_bound its witness bound.
EvalResult evaluate(const SpanProgram& program, const SpanProgram& negation,
                    double witness_bound, const std::string& x, const EvalConfig& cfg);

struct Lemma6Report {
  double probability = 0.0;
  bool applicable = false;  // for positive inputs: alpha^2 >= C w(P,x)
  bool holds = false;
  double bound = 0.0;
  Witness::Kind kind = Witness::Kind::positive;
  double witness_size = 0.0;
};

// Checks the Phase Checking bounds at the algorithm's precision: probability at
// least 1 - 1/C for positive inputs once alpha^2 >= C w(P,x), and at most
// 3 eps for negative inputs.
Lemma6Report lemma6_check(const SpanProgram& p, const std::string& x, double alpha,
                          double witness_bound, double eps, double c_constant = 3.0);

}  // namespace spansim
