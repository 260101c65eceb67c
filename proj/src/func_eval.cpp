#include "func_eval.hpp"

#include <cmath>

namespace spansim {

EvalBudget eval_budget(double witness_bound, double delta) {
  if (!(witness_bound > 0.0)) throw InvalidInput("eval_budget: witness bound must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) throw InvalidInput("eval_budget: delta outside (0,1)");
  EvalBudget budget;
  budget.max_round_index =
      std::max(0, static_cast<int>(std::ceil(0.5 * std::log2(3.0 * witness_bound) - 1e-9)));
  const double rounds = std::max(budget.max_round_index, 1);
  budget.repetitions =
      static_cast<int>(std::ceil(4.5 * std::log2(rounds / delta) - 1e-9));
  if (budget.repetitions < 1) budget.repetitions = 1;
  return budget;
}

EvalContext::EvalContext(SpanProgram program, SpanProgram negation, double witness_bound,
                         std::string x)
    : program_(std::move(program)),
      negation_(std::move(negation)),
      witness_bound_(witness_bound),
      x_(std::move(x)) {
  if (!(witness_bound_ > 0.0)) throw InvalidInput("evaluation: witness bound must be positive");
  if (negation_.n() != program_.n() || negation_.q() != program_.q()) {
    throw InvalidInput("evaluation: negation shape mismatch");
  }
}

const EvalContext::RoundData& EvalContext::round(int round_index, double eps) {
  if (eps != cached_eps_) {
    cache_.clear();
    cached_eps_ = eps;
  }
  if (static_cast<std::size_t>(round_index) >= cache_.size()) {
    cache_.resize(static_cast<std::size_t>(round_index) + 1);
  }
  auto& slot = cache_[static_cast<std::size_t>(round_index)];
  if (!slot.has_value()) {
    RoundData data;
    const double alpha = std::ldexp(1.0, round_index);
    const double theta = std::sqrt(eps / (alpha * alpha * witness_bound_));
    data.qpe = plan_qpe(theta, eps);
    const AlgorithmUnitary u_pos = algorithm_unitary(program_, x_, alpha);
    const AlgorithmUnitary u_neg = algorithm_unitary(negation_, x_, alpha);
    Vector hat0_pos = Vector::Zero(u_pos.eigensystem.dim());
    hat0_pos(u_pos.hat0_index) = 1.0;
    Vector hat0_neg = Vector::Zero(u_neg.eigensystem.dim());
    hat0_neg(u_neg.hat0_index) = 1.0;
    data.prob_program = checking_probability(u_pos.eigensystem, hat0_pos, data.qpe);
    data.prob_negation = checking_probability(u_neg.eigensystem, hat0_neg, data.qpe);
    data.block_queries = data.qpe.checking_queries(2);
    slot = std::move(data);
  }
  return *slot;
}

double EvalContext::round_probability(int round_index, bool negation, double eps) {
  const RoundData& data = round(round_index, eps);
  return negation ? data.prob_negation : data.prob_program;
}

QpeConfig EvalContext::round_qpe(int round_index, double eps) {
  return round(round_index, eps).qpe;
}

EvalResult EvalContext::run(const EvalConfig& cfg) {
  const EvalBudget budget = eval_budget(witness_bound_, cfg.delta);
  const int n_rep = budget.repetitions;
  const int majority = (n_rep + 1) / 2;  // at least N/2 outcomes

  Rng rng(cfg.rng_seed);
  EvalResult result;

  auto sample_zeros = [&](double probability) {
    int zeros = 0;
    for (int i = 0; i < n_rep; ++i) {
      if (rng.bernoulli(probability)) ++zeros;
    }
    return zeros;
  };

  for (int i = 0; i <= budget.max_round_index; ++i) {
    const RoundData& data = round(i, cfg.eps);
    const double alpha = std::ldexp(1.0, i);
    EvalRound record;
    record.alpha = alpha;

    record.zeros_program = sample_zeros(data.prob_program);
    result.ledger.charge("check_program",
                         static_cast<std::uint64_t>(n_rep) * data.block_queries);
    if (record.zeros_program >= majority) {
      result.per_round.push_back(record);
      result.output_bit = 1;
      result.rounds_used = i + 1;
      result.alpha_final = alpha;
      return result;
    }

    record.zeros_negation = sample_zeros(data.prob_negation);
    result.ledger.charge("check_negation",
                         static_cast<std::uint64_t>(n_rep) * data.block_queries);
    result.per_round.push_back(record);
    if (record.zeros_negation >= majority) {
      result.output_bit = 0;
      result.rounds_used = i + 1;
      result.alpha_final = alpha;
      return result;
    }
  }

  // Loop exhausted without a verdict; this branch has vanishing probability.
  result.output_bit = 1;
  result.rounds_used = budget.max_round_index + 1;
  result.alpha_final = std::ldexp(1.0, budget.max_round_index);
  return result;
}

EvalResult evaluate(const SpanProgram& program, const SpanProgram& negation,
                    double witness_bound, const std::string& x, const EvalConfig& cfg) {
  EvalContext ctx(program, negation, witness_bound, x);
  return ctx.run(cfg);
}

Lemma6Report lemma6_check(const SpanProgram& p, const std::string& x, double alpha,
                          double witness_bound, double eps, double c_constant) {
  if (!(alpha > 0.0)) throw InvalidInput("lemma6_check: alpha must be positive");
  if (!(c_constant >= 2.0)) throw InvalidInput("lemma6_check: constant must be at least 2");
  Lemma6Report report;
  const Witness w = witness(p, x);
  report.kind = w.kind;
  report.witness_size = w.size;

  const AlgorithmUnitary u = algorithm_unitary(p, x, alpha);
  const double theta = std::sqrt(eps / (alpha * alpha * witness_bound));
  const QpeConfig qpe = plan_qpe(theta, eps);
  Vector hat0 = Vector::Zero(u.eigensystem.dim());
  hat0(u.hat0_index) = 1.0;
  report.probability = checking_probability(u.eigensystem, hat0, qpe);

  if (w.kind == Witness::Kind::positive) {
    report.applicable = alpha * alpha >= c_constant * w.size * (1.0 - 1e-12);
    report.bound = 1.0 - 1.0 / c_constant;
    report.holds = report.probability >= report.bound - 1e-12;
  } else {
    report.applicable = true;
    report.bound = 3.0 * eps;
    report.holds = report.probability <= report.bound + 1e-12;
  }
  return report;
}

}  // namespace spansim
