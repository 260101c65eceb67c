#include "state_conversion.hpp"

#include <cmath>

namespace spansim {

MuNu mu_nu(int q) {
  if (q < 2) throw InvalidInput("mu_nu: alphabet size must be at least 2");
  const double qd = static_cast<double>(q);
  const double alpha = std::sqrt(0.5 - std::sqrt(qd - 1.0) / qd);
  const double alpha_sq = alpha * alpha;
  MuNu out;
  out.mu.reserve(static_cast<std::size_t>(q));
  out.nu.reserve(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    Vector mu = Vector::Zero(q);
    Vector nu = Vector::Zero(q);
    for (int j = 0; j < q; ++j) {
      if (j == i) {
        mu(j) = -alpha;
        nu(j) = std::sqrt(1.0 - alpha_sq);
      } else {
        mu(j) = std::sqrt((1.0 - alpha_sq) / (qd - 1.0));
        nu(j) = alpha / std::sqrt(qd - 1.0);
      }
    }
    out.mu.push_back(std::move(mu));
    out.nu.push_back(std::move(nu));
  }
  return out;
}

int ConvertingVectorSet::index_of(const std::string& x) const {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i] == x) return static_cast<int>(i);
  }
  throw InvalidInput("input " + x + " is not in the instance set");
}

double ConvertingVectorSet::w_plus(int x_index) const {
  double total = 0.0;
  for (const Vector& vec : u[static_cast<std::size_t>(x_index)]) total += vec.squaredNorm();
  return total;
}

double ConvertingVectorSet::w_minus(int x_index) const {
  double total = 0.0;
  for (const Vector& vec : v[static_cast<std::size_t>(x_index)]) total += vec.squaredNorm();
  return total;
}

double ConvertingVectorSet::max_w_plus() const {
  double best = 0.0;
  for (int i = 0; i < input_count(); ++i) best = std::max(best, w_plus(i));
  return best;
}

double ConvertingVectorSet::max_w_minus() const {
  double best = 0.0;
  for (int i = 0; i < input_count(); ++i) best = std::max(best, w_minus(i));
  return best;
}

double ConvertingVectorSet::witness_bound() const {
  return std::max(max_w_plus(), max_w_minus());
}

void ConvertingVectorSet::validate_shapes() const {
  if (inputs.empty()) throw InvalidInput("converting vector set: empty input set");
  if (n < 1 || q < 2 || m < 1) throw InvalidInput("converting vector set: bad shape");
  if (u.size() != inputs.size() || v.size() != inputs.size()) {
    throw InvalidInput("converting vector set: one vector family per input required");
  }
  for (std::size_t xi = 0; xi < inputs.size(); ++xi) {
    if (static_cast<int>(inputs[xi].size()) != n) {
      throw InvalidInput("converting vector set: input string length mismatch");
    }
    for (int j = 0; j < n; ++j) letter_at(inputs[xi], j, q);
    if (static_cast<int>(u[xi].size()) != n || static_cast<int>(v[xi].size()) != n) {
      throw InvalidInput("converting vector set: one vector per index required");
    }
    for (int j = 0; j < n; ++j) {
      if (u[xi][static_cast<std::size_t>(j)].size() != m ||
          v[xi][static_cast<std::size_t>(j)].size() != m) {
        throw InvalidInput("converting vector set: vector dimension mismatch");
      }
      require_finite(u[xi][static_cast<std::size_t>(j)], "converting vector set");
      require_finite(v[xi][static_cast<std::size_t>(j)], "converting vector set");
    }
  }
}

GramPair GramPair::from_states(std::vector<Vector> rho_states,
                               std::vector<Vector> sigma_states) {
  if (rho_states.empty() || rho_states.size() != sigma_states.size()) {
    throw InvalidInput("gram pair: state families must be nonempty and aligned");
  }
  const Eigen::Index dim = rho_states.front().size();
  for (const Vector& s : rho_states) {
    if (s.size() != dim) throw InvalidInput("gram pair: state dimension mismatch");
    if (std::abs(s.norm() - 1.0) > 1e-8) throw InvalidInput("gram pair: states must be unit norm");
  }
  for (const Vector& s : sigma_states) {
    if (s.size() != dim) throw InvalidInput("gram pair: state dimension mismatch");
    if (std::abs(s.norm() - 1.0) > 1e-8) throw InvalidInput("gram pair: states must be unit norm");
  }
  GramPair gp;
  const auto count = static_cast<Eigen::Index>(rho_states.size());
  gp.rho_gram = Matrix(count, count);
  gp.sigma_gram = Matrix(count, count);
  for (Eigen::Index x = 0; x < count; ++x) {
    for (Eigen::Index y = 0; y < count; ++y) {
      gp.rho_gram(x, y) = rho_states[static_cast<std::size_t>(x)].dot(
          rho_states[static_cast<std::size_t>(y)]);
      gp.sigma_gram(x, y) = sigma_states[static_cast<std::size_t>(x)].dot(
          sigma_states[static_cast<std::size_t>(y)]);
    }
  }
  gp.rho = std::move(rho_states);
  gp.sigma = std::move(sigma_states);
  return gp;
}

CvsValidation validate_cvs(const ConvertingVectorSet& cvs, const GramPair& gram,
                           double tol) {
  cvs.validate_shapes();
  if (gram.rho.size() != cvs.inputs.size()) {
    throw InvalidInput("validate_cvs: gram pair does not match the input set");
  }
  CvsValidation result;
  for (int x = 0; x < cvs.input_count(); ++x) {
    for (int y = 0; y < cvs.input_count(); ++y) {
      Complex sum(0.0, 0.0);
      for (int j = 0; j < cvs.n; ++j) {
        if (cvs.inputs[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] !=
            cvs.inputs[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)]) {
          sum += cvs.u[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)].dot(
              cvs.v[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)]);
        }
      }
      const Complex expected = gram.rho_gram(x, y) - gram.sigma_gram(x, y);
      result.max_residual = std::max(result.max_residual, std::abs(expected - sum));
    }
  }
  result.ok = result.max_residual <= tol;
  return result;
}

ConvertingVectorSet complement(const ConvertingVectorSet& cvs) {
  ConvertingVectorSet out = cvs;
  std::swap(out.u, out.v);
  return out;
}

ConvertingVectorSet normalize_cvs(const ConvertingVectorSet& cvs) {
  const double max_plus = cvs.max_w_plus();
  const double max_minus = cvs.max_w_minus();
  if (!(max_plus > 0.0) || !(max_minus > 0.0)) {
    throw InvalidInput("normalize_cvs: both witness families must be nonzero");
  }
  // Witness sizes are quadratic in the vectors, so the fourth root of the size
  // ratio lands both maxima on the geometric mean.
  const double u_factor = std::pow(max_minus / max_plus, 0.25);
  ConvertingVectorSet out = cvs;
  for (auto& per_input : out.u) {
    for (Vector& vec : per_input) vec *= u_factor;
  }
  for (auto& per_input : out.v) {
    for (Vector& vec : per_input) vec /= u_factor;
  }
  return out;
}

BridgedInstance cvs_from_span_program(const SpanProgram& p,
                                      const std::vector<std::string>& inputs,
                                      const Tolerance& tol) {
  // The block-cancellation argument needs Pi_{H(x)} to annihilate exactly the
  // letter components that differ, so overlapping letter subspaces are out.
  for (int j = 0; j < p.n(); ++j) {
    for (int a = 0; a < p.q(); ++a) {
      for (int b = a + 1; b < p.q(); ++b) {
        const Matrix& ba = p.letter_basis(j, a);
        const Matrix& bb = p.letter_basis(j, b);
        if (ba.cols() == 0 || bb.cols() == 0) continue;
        if ((ba.adjoint() * bb).cwiseAbs().maxCoeff() > 1e-8) {
          throw Unsupported("cvs_from_span_program: letter subspaces overlap within a part");
        }
      }
    }
  }

  int max_part = 0;
  for (int j = 0; j < p.n(); ++j) max_part = std::max(max_part, p.input_dim(j));
  if (max_part == 0) throw Unsupported("cvs_from_span_program: all input parts are empty");

  BridgedInstance out;
  out.cvs.inputs = inputs;
  out.cvs.n = p.n();
  out.cvs.q = p.q();
  out.cvs.m = 2 * max_part;

  std::vector<Vector> rho_states;
  std::vector<Vector> sigma_states;
  Vector ket0 = Vector::Zero(2);
  ket0(0) = 1.0;
  Vector ket1 = Vector::Zero(2);
  ket1(1) = 1.0;

  for (const std::string& x : inputs) {
    const Witness w = witness(p, x, tol);
    const bool positive = w.kind == Witness::Kind::positive;
    out.f.push_back(positive ? 1 : 0);
    rho_states.push_back(ket0);
    sigma_states.push_back(positive ? ket1 : ket0);

    std::vector<Vector> u_row;
    std::vector<Vector> v_row;
    u_row.reserve(static_cast<std::size_t>(p.n()));
    v_row.reserve(static_cast<std::size_t>(p.n()));
    for (int j = 0; j < p.n(); ++j) {
      Vector block = Vector::Zero(max_part);
      const int d = p.input_dim(j);
      if (d > 0) {
        block.head(d) = w.payload.segment(p.part_offset(j), d);
      }
      Vector uj = Vector::Zero(out.cvs.m);
      Vector vj = Vector::Zero(out.cvs.m);
      if (positive) {
        uj.head(max_part) = block;
        vj.tail(max_part) = block.conjugate();
      } else {
        uj.tail(max_part) = block.conjugate();
        vj.head(max_part) = block.conjugate();
      }
      u_row.push_back(std::move(uj));
      v_row.push_back(std::move(vj));
    }
    out.cvs.u.push_back(std::move(u_row));
    out.cvs.v.push_back(std::move(v_row));
  }

  out.gram = GramPair::from_states(std::move(rho_states), std::move(sigma_states));
  const CvsValidation check = validate_cvs(out.cvs, out.gram);
  if (!check.ok) {
    throw InternalError("cvs_from_span_program: defining identity violated, residual " +
                        std::to_string(check.max_residual));
  }
  return out;
}

Vector pair_state(const ConversionSpace& space, int b, const Vector& state) {
  if (state.size() != space.state_dim) throw InvalidInput("pair_state: dimension mismatch");
  Vector out = Vector::Zero(space.dim());
  for (int h = 0; h < space.state_dim; ++h) out(space.pair_index(b, h)) = state(h);
  return out;
}

Vector t_state(const ConversionSpace& space, const GramPair& gram, int x_index, int sign) {
  const Vector& rho = gram.rho[static_cast<std::size_t>(x_index)];
  const Vector& sigma = gram.sigma[static_cast<std::size_t>(x_index)];
  Vector out = Vector::Zero(space.dim());
  const double scale = 1.0 / std::sqrt(2.0);
  for (int h = 0; h < space.state_dim; ++h) {
    out(space.pair_index(0, h)) = scale * rho(h);
    out(space.pair_index(1, h)) = static_cast<double>(sign) * scale * sigma(h);
  }
  return out;
}

Vector probe_vector(const ConvertingVectorSet& cvs, const GramPair& gram,
                    const ConversionSpace& space, int x_index, double alpha,
                    double eps_hat) {
  const MuNu basis = mu_nu(cvs.q);
  Vector psi = std::sqrt(eps_hat / alpha) * t_state(space, gram, x_index, -1);
  const std::string& x = cvs.inputs[static_cast<std::size_t>(x_index)];
  for (int j = 0; j < cvs.n; ++j) {
    const int letter = letter_at(x, j, cvs.q);
    const Vector& mu = basis.mu[static_cast<std::size_t>(letter)];
    const Vector& uxj = cvs.u[static_cast<std::size_t>(x_index)][static_cast<std::size_t>(j)];
    for (int a = 0; a < cvs.q; ++a) {
      for (int k = 0; k < cvs.m; ++k) {
        psi(space.witness_index(j, a, k)) -= mu(a) * uxj(k);
      }
    }
  }
  return psi;
}

ConversionUnitary conversion_unitary(const ConvertingVectorSet& cvs, const GramPair& gram,
                                     const std::string& x, double alpha, double eps_hat,
                                     const Tolerance& tol) {
  if (!(alpha > 0.0)) throw InvalidInput("conversion_unitary: alpha must be positive");
  if (!(eps_hat > 0.0) || !(eps_hat < 1.0)) {
    throw InvalidInput("conversion_unitary: eps_hat outside (0,1)");
  }
  cvs.validate_shapes();

  ConversionUnitary out;
  out.alpha = alpha;
  out.eps_hat = eps_hat;
  out.space = ConversionSpace{cvs.n, cvs.q, cvs.m, gram.state_dim()};
  const int dim = out.space.dim();
  if (dim > kMaxDimension) throw InvalidInput("conversion_unitary: dimension exceeds cap");

  Matrix spanning(dim, cvs.input_count());
  for (int y = 0; y < cvs.input_count(); ++y) {
    spanning.col(y) = probe_vector(cvs, gram, out.space, y, alpha, eps_hat);
  }
  const Matrix q_basis = range_basis(spanning, tol);
  const Matrix identity = Matrix::Identity(dim, dim);
  Matrix lambda = identity - q_basis * q_basis.adjoint();
  out.kernel_projector = lambda;

  Matrix pi = identity;
  const MuNu basis = mu_nu(cvs.q);
  const int x_index = cvs.index_of(x);
  for (int j = 0; j < cvs.n; ++j) {
    const int letter = letter_at(cvs.inputs[static_cast<std::size_t>(x_index)], j, cvs.q);
    const Vector& mu = basis.mu[static_cast<std::size_t>(letter)];
    for (int a = 0; a < cvs.q; ++a) {
      for (int b = 0; b < cvs.q; ++b) {
        const Complex weight = mu(a) * std::conj(mu(b));
        for (int k = 0; k < cvs.m; ++k) {
          pi(out.space.witness_index(j, a, k), out.space.witness_index(j, b, k)) -= weight;
        }
      }
    }
  }

  const Matrix u = (2.0 * pi - identity) * (2.0 * lambda - identity);
  out.eigensystem = eig_unitary(u, tol);
  out.eigensystem.queries_per_application = 2;
  return out;
}

ConvertContext::ConvertContext(ConvertingVectorSet cvs, GramPair gram, std::string x)
    : cvs_(std::move(cvs)), gram_(std::move(gram)), x_(std::move(x)) {
  cvs_.validate_shapes();
  const double max_plus = cvs_.max_w_plus();
  const double max_minus = cvs_.max_w_minus();
  const double scale = std::max({max_plus, max_minus, 1.0});
  if (std::abs(max_plus - max_minus) > 1e-6 * scale) {
    throw InvalidInput("convert: converting vector set must be normalized first");
  }
  complement_ = complement(cvs_);
  x_index_ = cvs_.index_of(x_);
  witness_bound_ = cvs_.witness_bound();
}

double ConvertContext::w_plus() const { return cvs_.w_plus(x_index_); }
double ConvertContext::w_minus() const { return cvs_.w_minus(x_index_); }

const ConvertContext::RoundData& ConvertContext::round(int round_index, bool use_complement,
                                                       double eps_hat) {
  if (eps_hat != cached_eps_hat_) {
    cache_primary_.clear();
    cache_complement_.clear();
    cached_eps_hat_ = eps_hat;
  }
  auto& cache = use_complement ? cache_complement_ : cache_primary_;
  if (static_cast<std::size_t>(round_index) >= cache.size()) {
    cache.resize(static_cast<std::size_t>(round_index) + 1);
  }
  auto& slot = cache[static_cast<std::size_t>(round_index)];
  if (!slot.has_value()) {
    RoundData data;
    const double alpha = std::ldexp(1.0, round_index);
    const ConvertingVectorSet& active = use_complement ? complement_ : cvs_;
    data.unitary = conversion_unitary(active, gram_, x_, alpha, eps_hat);
    const double theta = std::pow(eps_hat, 1.5) / std::sqrt(alpha * witness_bound_);
    data.qpe = plan_qpe(theta, eps_hat * eps_hat);
    const Vector start = pair_state(data.unitary.space, 0, gram_.rho[static_cast<std::size_t>(x_index_)]);
    data.probability = checking_probability(data.unitary.eigensystem, start, data.qpe);
    data.inner_cost = data.qpe.checking_queries(2);
    slot = std::move(data);
  }
  return *slot;
}

ConvertResult ConvertContext::run(double eps, double p, Rng& rng) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("convert: eps outside (0,1)");
  if (!(p > 0.0) || !(p < 1.0)) throw InvalidInput("convert: p outside (0,1)");

  const double eps_hat = eps * eps / 9.0;
  const int max_round =
      std::max(0, static_cast<int>(std::ceil(std::log2(witness_bound_) - 1e-9)));
  const int fail_rounds = std::max(1, max_round);
  const double per_round_fail = p / static_cast<double>(fail_rounds);

  ConvertResult result;
  const RoundData* chosen = nullptr;

  for (int i = 0; i <= max_round && chosen == nullptr; ++i) {
    for (int which = 0; which < 2 && chosen == nullptr; ++which) {
      const bool use_complement = which == 1;
      const RoundData& data = round(i, use_complement, eps_hat);
      const double estimate = amplitude_estimation_sim(
          data.probability, eps_hat / 4.0, per_round_fail, data.inner_cost, rng,
          &result.ledger, use_complement ? "probe_complement" : "probe_primary");
      result.probe_trace.push_back({i, use_complement, data.unitary.alpha, estimate});
      if (estimate - 0.5 > -2.75 * eps_hat) {
        chosen = &data;
        result.alpha_stop = data.unitary.alpha;
        result.used_complement = use_complement;
      }
    }
  }

  if (chosen == nullptr) {
    // No probe triggered; convert with the final round anyway and flag it.
    const RoundData& data = round(max_round, true, eps_hat);
    chosen = &data;
    result.alpha_stop = data.unitary.alpha;
    result.used_complement = true;
    result.flagged = true;
  }

  const Vector start =
      pair_state(chosen->unitary.space, 0, gram_.rho[static_cast<std::size_t>(x_index_)]);
  const Vector target =
      pair_state(chosen->unitary.space, 1, gram_.sigma[static_cast<std::size_t>(x_index_)]);
  result.distance = reflection_distance(chosen->unitary.eigensystem, start, target,
                                        chosen->qpe, &result.ledger, "reflect");
  return result;
}

ConvertResult convert(const ConvertingVectorSet& cvs, const GramPair& gram,
                      const std::string& x, double eps, double p, Rng& rng) {
  ConvertContext ctx(cvs, gram, x);
  return ctx.run(eps, p, rng);
}

LemmaSuiteReport lemma_suite(const ConvertingVectorSet& cvs, const GramPair& gram,
                             const std::string& x, double alpha, double eps_hat) {
  LemmaSuiteReport report;
  const int x_index = cvs.index_of(x);
  report.w_plus = cvs.w_plus(x_index);
  report.w_minus = cvs.w_minus(x_index);

  const double witness_bound = cvs.witness_bound();
  const ConversionUnitary unit = conversion_unitary(cvs, gram, x, alpha, eps_hat);
  const double theta = std::pow(eps_hat, 1.5) / std::sqrt(alpha * witness_bound);
  const QpeConfig qpe = plan_qpe(theta, eps_hat * eps_hat);

  const Vector t_minus = t_state(unit.space, gram, x_index, -1);
  const Vector t_plus = t_state(unit.space, gram, x_index, +1);
  const Vector start = pair_state(unit.space, 0, gram.rho[static_cast<std::size_t>(x_index)]);
  const Vector target = pair_state(unit.space, 1, gram.sigma[static_cast<std::size_t>(x_index)]);

  // (a) mass of t_{x-} on eigenphases within the precision window
  {
    const Vector amps = unit.eigensystem.vectors.adjoint() * t_minus;
    double mass = 0.0;
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      if (std::abs(unit.eigensystem.phases(i)) <= qpe.theta + 1e-12) mass += std::norm(amps(i));
    }
    report.low_phase_mass.applicable = true;
    report.low_phase_mass.measured = mass;
    report.low_phase_mass.bound = eps_hat * eps_hat / 2.0;
    report.low_phase_mass.holds = mass <= report.low_phase_mass.bound + 1e-12;
  }

  // (b) all-zeros probability of the probe state
  const double probe_probability = checking_probability(unit.eigensystem, start, qpe);
  report.probe_probability.applicable = alpha >= report.w_plus * (1.0 - 1e-12);
  report.probe_probability.measured = probe_probability;
  report.probe_probability.bound = 0.5 * (1.0 - 5.0 * eps_hat);
  report.probe_probability.holds =
      probe_probability >= report.probe_probability.bound - 1e-12;

  const bool hypothesis = probe_probability >= 0.5 - 3.0 * eps_hat;

  // (c) wrong-phase mass of t_{x+}
  report.plus_leakage.applicable = hypothesis;
  report.plus_leakage.measured = 1.0 - checking_probability(unit.eigensystem, t_plus, qpe);
  report.plus_leakage.bound = 10.0 * eps_hat;
  report.plus_leakage.holds = report.plus_leakage.measured <= report.plus_leakage.bound + 1e-12;

  // (d) distance of the reflected state from the target
  report.final_distance.applicable = hypothesis;
  report.final_distance.measured =
      reflection_distance(unit.eigensystem, start, target, qpe);
  report.final_distance.bound = 6.0 * std::sqrt(eps_hat);
  report.final_distance.holds =
      report.final_distance.measured <= report.final_distance.bound + 1e-12;

  return report;
}

}  // namespace spansim
