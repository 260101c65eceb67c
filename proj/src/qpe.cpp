#include "qpe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace spansim {

void QueryLedger::charge(const std::string& label, std::uint64_t queries) {
  total += queries;
  breakdown[label] += queries;
}

void QueryLedger::merge(const QueryLedger& other) {
  total += other.total;
  for (const auto& [label, queries] : other.breakdown) breakdown[label] += queries;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double reduce_phase(double phi) {
  // principal value in (-pi, pi]
  phi = std::remainder(phi, 2.0 * M_PI);
  if (phi <= -M_PI) phi += 2.0 * M_PI;
  return phi;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = splitmix64(base ^ splitmix64(a + 1));
  return splitmix64(z ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

std::uint64_t QpeConfig::checking_queries(int queries_per_application) const {
  return static_cast<std::uint64_t>(copies) * static_cast<std::uint64_t>(big_t - 1) *
         static_cast<std::uint64_t>(queries_per_application);
}

std::uint64_t QpeConfig::reflection_queries(int queries_per_application) const {
  return 2 * checking_queries(queries_per_application);
}

Complex phase_amplitude(double theta, std::int64_t big_t) {
  const double phi = reduce_phase(theta);
  if (std::abs(phi) < 1e-14) return Complex(1.0, 0.0);
  const double t = static_cast<double>(big_t);
  const double num = std::sin(0.5 * t * phi);
  const double den = t * std::sin(0.5 * phi);
  return std::polar(num / den, 0.5 * (t - 1.0) * phi);
}

double phase_amplitude_sq(double theta, std::int64_t big_t) {
  return std::norm(phase_amplitude(theta, big_t));
}

QpeConfig plan_qpe(double theta, double eps) {
  if (!(theta > 0.0)) throw InvalidInput("plan_qpe: theta must be positive");
  if (theta >= M_PI) throw InvalidInput("plan_qpe: theta must be below pi");
  if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("plan_qpe: eps must lie in (0,1)");

  QpeConfig cfg;
  cfg.theta = theta;
  cfg.eps = eps;
  cfg.t = std::max(1, static_cast<int>(std::ceil(std::log2(2.0 / theta) - 1e-12)));
  if (cfg.t > 24) throw InvalidInput("plan_qpe: precision too fine for desk scale");
  cfg.big_t = std::int64_t{1} << cfg.t;
  if (static_cast<double>(cfg.big_t) * theta < 2.0 * (1.0 - 1e-9)) {
    throw InternalError("plan_qpe: register size below 2/theta");
  }

  // Dense maximization of |h0|^2 on [theta, pi], then local ternary refinement.
  const std::int64_t grid = 10 * cfg.big_t;
  double best = 0.0;
  std::int64_t best_i = 0;
  for (std::int64_t i = 0; i <= grid; ++i) {
    const double phi =
        theta + (M_PI - theta) * static_cast<double>(i) / static_cast<double>(grid);
    const double value = phase_amplitude_sq(phi, cfg.big_t);
    if (value > best) {
      best = value;
      best_i = i;
    }
  }
  double lo = theta + (M_PI - theta) * static_cast<double>(std::max<std::int64_t>(best_i - 1, 0)) /
                          static_cast<double>(grid);
  double hi = theta + (M_PI - theta) *
                          static_cast<double>(std::min<std::int64_t>(best_i + 1, grid)) /
                          static_cast<double>(grid);
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (phase_amplitude_sq(m1, cfg.big_t) < phase_amplitude_sq(m2, cfg.big_t)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  best = std::max(best, phase_amplitude_sq(0.5 * (lo + hi), cfg.big_t));
  cfg.beta = best;

  if (!(cfg.beta < 1.0)) throw InternalError("plan_qpe: leak bound not below one");
  cfg.copies = 1;
  double acc = cfg.beta;
  while (acc > eps) {
    acc *= cfg.beta;
    ++cfg.copies;
    if (cfg.copies > 1'000'000) throw InternalError("plan_qpe: copy count runaway");
  }
  return cfg;
}

Vector one_copy_amplitudes(double theta, std::int64_t big_t) {
  if (big_t < 2 || (big_t & (big_t - 1)) != 0) {
    throw InvalidInput("one_copy_amplitudes: register size must be a power of two");
  }
  if (big_t > (std::int64_t{1} << 20)) {
    throw InvalidInput("one_copy_amplitudes: register too large to materialize");
  }
  Vector h(big_t);
  for (std::int64_t y = 0; y < big_t; ++y) {
    h(y) = phase_amplitude(theta - 2.0 * M_PI * static_cast<double>(y) /
                                       static_cast<double>(big_t),
                           big_t);
  }
  return h;
}

Vector one_copy_conjugate_row(double theta, std::int64_t big_t) {
  if (big_t < 2 || (big_t & (big_t - 1)) != 0) {
    throw InvalidInput("one_copy_conjugate_row: register size must be a power of two");
  }
  if (big_t > (std::int64_t{1} << 14)) {
    throw InvalidInput("one_copy_conjugate_row: register too large to materialize");
  }
  // h~_k = conj(<0|D_copy|k>) = (1/T) sum_y (-1)^{popcount(y & k)} e^{-iy theta}
  Vector out = Vector::Zero(big_t);
  for (std::int64_t k = 0; k < big_t; ++k) {
    Complex acc(0.0, 0.0);
    for (std::int64_t y = 0; y < big_t; ++y) {
      const int sign = (std::popcount(static_cast<std::uint64_t>(y & k)) & 1) ? -1 : 1;
      acc += static_cast<double>(sign) *
             std::polar(1.0, -theta * static_cast<double>(y));
    }
    out(k) = acc / static_cast<double>(big_t);
  }
  return out;
}

namespace {

void require_unit_state(const Vector& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) throw InvalidInput(std::string(what) + ": dimension mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-8) {
    throw InvalidInput(std::string(what) + ": state is not unit norm");
  }
}

}  // namespace

double checking_probability(const UnitaryEigensystem& es, const Vector& input,
                            const QpeConfig& cfg, QueryLedger* ledger,
                            const std::string& label) {
  require_unit_state(input, es.vectors.rows(), "checking_probability");
  const Vector amps = es.vectors.adjoint() * input;
  double p = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double k = std::pow(phase_amplitude_sq(es.phases(i), cfg.big_t), cfg.copies);
    p += std::norm(amps(i)) * k;
  }
  if (ledger != nullptr) {
    ledger->charge(label, cfg.checking_queries(es.queries_per_application));
  }
  return std::clamp(p, 0.0, 1.0);
}

ReflectionOutput phase_reflection_output(const UnitaryEigensystem& es, const Vector& input,
                                         const QpeConfig& cfg, bool with_vectors) {
  require_unit_state(input, es.vectors.rows(), "phase_reflection_output");
  ReflectionOutput out;
  out.big_t = cfg.big_t;
  out.copies = cfg.copies;
  out.coefficients = es.vectors.adjoint() * input;
  out.h0_sq_pow = RealVector(out.coefficients.size());
  for (Eigen::Index i = 0; i < out.coefficients.size(); ++i) {
    out.h0_sq_pow(i) = std::pow(phase_amplitude_sq(es.phases(i), cfg.big_t), cfg.copies);
  }
  if (with_vectors) {
    out.h.reserve(static_cast<std::size_t>(out.coefficients.size()));
    out.h_tilde.reserve(static_cast<std::size_t>(out.coefficients.size()));
    for (Eigen::Index i = 0; i < out.coefficients.size(); ++i) {
      out.h.push_back(one_copy_amplitudes(es.phases(i), cfg.big_t));
      out.h_tilde.push_back(one_copy_conjugate_row(es.phases(i), cfg.big_t));
    }
  }
  return out;
}

double ReflectionOutput::output_norm() const {
  // Per eigenvector the ancilla state is 2 h0^c h~^{(x)c} - e0^{(x)c}; all inner
  // products reduce to c-th powers of one-copy ones.
  double norm_sq = 0.0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    double htilde_sq_pow = 1.0;
    double k = h0_sq_pow(i);
    if (!h_tilde.empty()) {
      const Vector& ht = h_tilde[static_cast<std::size_t>(i)];
      htilde_sq_pow = std::pow(ht.squaredNorm(), copies);
      k = std::pow(std::norm(ht(0)), copies);
    }
    norm_sq += std::norm(coefficients(i)) * (4.0 * k * htilde_sq_pow + 1.0 - 4.0 * k);
  }
  return std::sqrt(std::max(norm_sq, 0.0));
}

double reflection_distance(const UnitaryEigensystem& es, const Vector& input,
                           const Vector& target, const QpeConfig& cfg,
                           QueryLedger* ledger, const std::string& label) {
  require_unit_state(input, es.vectors.rows(), "reflection_distance input");
  require_unit_state(target, es.vectors.rows(), "reflection_distance target");
  const Vector a = es.vectors.adjoint() * input;
  const Vector b = es.vectors.adjoint() * target;
  double d_sq = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double k = std::pow(phase_amplitude_sq(es.phases(i), cfg.big_t), cfg.copies);
    const Complex sum = a(i) + b(i);
    d_sq += 4.0 * std::norm(a(i)) * k + std::norm(sum) -
            4.0 * k * (std::conj(sum) * a(i)).real();
  }
  if (ledger != nullptr) {
    ledger->charge(label, cfg.reflection_queries(es.queries_per_application));
  }
  return std::sqrt(std::max(d_sq, 0.0));
}

double amplitude_estimation_sim(double true_prob, double delta, double fail_prob,
                                std::uint64_t inner_cost, Rng& rng, QueryLedger* ledger,
                                const std::string& label) {
  if (!(true_prob >= 0.0) || !(true_prob <= 1.0)) {
    throw InvalidInput("amplitude_estimation_sim: probability outside [0,1]");
  }
  if (!(delta > 0.0)) throw InvalidInput("amplitude_estimation_sim: delta must be positive");
  if (!(fail_prob > 0.0) || !(fail_prob < 1.0)) {
    throw InvalidInput("amplitude_estimation_sim: failure probability outside (0,1)");
  }
  if (ledger != nullptr) {
    const auto calls = static_cast<std::uint64_t>(std::ceil(1.0 / (delta * fail_prob)));
    ledger->charge(label, calls * inner_cost);
  }
  if (rng.uniform() < fail_prob) return rng.uniform();
  return std::clamp(true_prob + rng.uniform(-delta, delta), 0.0, 1.0);
}

}  // namespace spansim
