#include "span_program.hpp"

#include <cmath>

namespace spansim {

int letter_at(const std::string& x, int j, int q) {
  if (j < 0 || static_cast<std::size_t>(j) >= x.size()) {
    throw InvalidInput("input string too short");
  }
  const char ch = x[static_cast<std::size_t>(j)];
  if (ch < '0' || ch > '9') throw InvalidInput("input string must be digits over [q]");
  const int a = ch - '0';
  if (a >= q) throw InvalidInput("input letter out of range for alphabet");
  return a;
}

std::vector<std::string> all_inputs(int n, int q, std::size_t cap) {
  if (n < 1 || q < 2) throw InvalidInput("all_inputs: need n >= 1 and q >= 2");
  if (q > kMaxStringAlphabet) throw InvalidInput("all_inputs: alphabet too large for digit strings");
  double count = std::pow(static_cast<double>(q), n);
  if (count > static_cast<double>(cap)) throw InvalidInput("all_inputs: input set too large");
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  std::string x(static_cast<std::size_t>(n), '0');
  while (true) {
    out.push_back(x);
    int j = n - 1;
    while (j >= 0) {
      if (x[static_cast<std::size_t>(j)] - '0' + 1 < q) {
        ++x[static_cast<std::size_t>(j)];
        break;
      }
      x[static_cast<std::size_t>(j)] = '0';
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

SpanProgram::SpanProgram(int n, int q, std::vector<int> input_dims, int true_dim,
                         int false_dim, std::vector<std::vector<Matrix>> letter_bases,
                         Matrix a, Vector tau)
    : n_(n),
      q_(q),
      input_dims_(std::move(input_dims)),
      true_dim_(true_dim),
      false_dim_(false_dim),
      letter_bases_(std::move(letter_bases)),
      a_(std::move(a)),
      tau_(std::move(tau)) {
  dim_h_ = true_dim_ + false_dim_;
  offsets_.resize(static_cast<std::size_t>(n_) + 2);
  int off = 0;
  for (int j = 0; j < n_; ++j) {
    offsets_[static_cast<std::size_t>(j)] = off;
    off += input_dims_[static_cast<std::size_t>(j)];
  }
  offsets_[static_cast<std::size_t>(n_)] = off;        // H_true
  offsets_[static_cast<std::size_t>(n_) + 1] = off + true_dim_;  // H_false
  dim_h_ = off + true_dim_ + false_dim_;
  validate();
}

void SpanProgram::validate() const {
  if (n_ < 1) throw InvalidInput("span program: input length must be at least 1");
  if (q_ < 2) throw InvalidInput("span program: alphabet size must be at least 2");
  if (static_cast<int>(input_dims_.size()) != n_) {
    throw InvalidInput("span program: one part dimension per input index required");
  }
  for (int d : input_dims_) {
    if (d < 0) throw InvalidInput("span program: negative part dimension");
  }
  if (true_dim_ < 0 || false_dim_ < 0) throw InvalidInput("span program: negative part dimension");
  if (dim_h_ < 1) throw InvalidInput("span program: H must be nonempty");
  if (dim_h_ > kMaxDimension) throw InvalidInput("span program: dimension exceeds desk-scale cap");
  if (a_.rows() < 1 || a_.cols() != dim_h_) {
    throw InvalidInput("span program: map shape must be dim(V) x dim(H)");
  }
  if (tau_.size() != a_.rows()) throw InvalidInput("span program: target dimension mismatch");
  require_finite(a_, "span program map");
  require_finite(tau_, "span program target");
  if (tau_.norm() == 0.0) throw InvalidInput("span program: target must be nonzero");

  if (static_cast<int>(letter_bases_.size()) != n_) {
    throw InvalidInput("span program: one letter-basis family per input index required");
  }
  for (int j = 0; j < n_; ++j) {
    const auto& per_letter = letter_bases_[static_cast<std::size_t>(j)];
    if (static_cast<int>(per_letter.size()) != q_) {
      throw InvalidInput("span program: one letter basis per alphabet letter required");
    }
    const int d = input_dims_[static_cast<std::size_t>(j)];
    Eigen::Index total_cols = 0;
    for (int a = 0; a < q_; ++a) {
      const Matrix& b = per_letter[static_cast<std::size_t>(a)];
      if (b.rows() != d) throw InvalidInput("span program: letter basis outside its part");
      if (b.cols() > d) throw InvalidInput("span program: letter basis overcomplete");
      require_finite(b, "span program letter basis");
      if (b.cols() > 0) {
        const double dev =
            (b.adjoint() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
        if (dev > 1e-8) throw InvalidInput("span program: letter basis not orthonormal");
      }
      total_cols += b.cols();
    }
    if (d > 0) {
      Matrix joined(d, total_cols);
      Eigen::Index at = 0;
      for (int a = 0; a < q_; ++a) {
        const Matrix& b = per_letter[static_cast<std::size_t>(a)];
        joined.middleCols(at, b.cols()) = b;
        at += b.cols();
      }
      if (range_basis(joined).cols() != d) {
        throw InvalidInput("span program: letter subspaces do not span their part");
      }
    }
  }
}

const Matrix& SpanProgram::letter_basis(int j, int a) const {
  if (j < 0 || j >= n_) throw InvalidInput("letter basis: index out of range");
  if (a < 0 || a >= q_) throw InvalidInput("letter basis: letter out of range");
  return letter_bases_[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
}

Matrix SpanProgram::letter_basis_embedded(int j, int a) const {
  const Matrix& local = letter_basis(j, a);
  Matrix out = Matrix::Zero(dim_h_, local.cols());
  if (local.cols() > 0) {
    out.middleRows(part_offset(j), input_dim(j)) = local;
  }
  return out;
}

Matrix SpanProgram::hx_basis(const std::string& x) const {
  if (static_cast<int>(x.size()) != n_) throw InvalidInput("input string length mismatch");
  Eigen::Index cols = true_dim_;
  for (int j = 0; j < n_; ++j) {
    cols += letter_basis(j, letter_at(x, j, q_)).cols();
  }
  Matrix basis = Matrix::Zero(dim_h_, cols);
  Eigen::Index at = 0;
  for (int j = 0; j < n_; ++j) {
    const Matrix& local = letter_basis(j, letter_at(x, j, q_));
    if (local.cols() > 0) {
      basis.block(part_offset(j), at, input_dim(j), local.cols()) = local;
      at += local.cols();
    }
  }
  for (int k = 0; k < true_dim_; ++k) {
    basis(true_offset() + k, at + k) = 1.0;
  }
  return basis;
}

Matrix SpanProgram::hx_projector(const std::string& x) const {
  const Matrix basis = hx_basis(x);
  if (basis.cols() == 0) return Matrix::Zero(dim_h_, dim_h_);
  return basis * basis.adjoint();
}

std::vector<std::string> SpanProgram::all_inputs() const { return spansim::all_inputs(n_, q_); }

std::optional<Witness> positive_witness(const SpanProgram& p, const std::string& x,
                                        const Tolerance& tol) {
  const Matrix basis = p.hx_basis(x);
  if (basis.cols() == 0) return std::nullopt;  // tau != 0 cannot be reached from {0}
  const Matrix restricted = p.a_matrix() * basis;
  const MinNormSolution sol =
      min_norm_solution(restricted, p.tau(), tol, p.a_matrix().norm());
  if (!sol.feasible) return std::nullopt;
  Witness w;
  w.kind = Witness::Kind::positive;
  w.payload = basis * sol.x;
  w.size = w.payload.squaredNorm();
  return w;
}

std::optional<Witness> negative_witness(const SpanProgram& p, const std::string& x,
                                        const Tolerance& tol) {
  const int dim_v = p.dim_v();
  const int dim_h = p.dim_h();
  const Matrix proj = p.hx_projector(x);

  // Feasible rows satisfy omega tau = 1 and omega A Pi_{H(x)} = 0; both are
  // linear in the entries of omega, solved as G z = e_1 with z = omega^T.
  Matrix constraints(1 + dim_h, dim_v);
  constraints.row(0) = p.tau().transpose();
  constraints.bottomRows(dim_h) = (p.a_matrix() * proj).transpose();
  Vector rhs = Vector::Zero(1 + dim_h);
  rhs(0) = 1.0;

  const MinNormSolution particular = min_norm_solution(constraints, rhs, tol);
  if (!particular.feasible) return std::nullopt;

  Vector z = particular.x;
  const std::vector<Vector> null_dirs = kernel_basis(constraints, tol);
  if (!null_dirs.empty()) {
    Matrix null_mat(dim_v, static_cast<Eigen::Index>(null_dirs.size()));
    for (std::size_t i = 0; i < null_dirs.size(); ++i) {
      null_mat.col(static_cast<Eigen::Index>(i)) = null_dirs[i];
    }
    // Minimize |A^T (z0 + N k)| over the free directions.
    const Matrix m2 = p.a_matrix().transpose() * null_mat;
    const Vector target = -(p.a_matrix().transpose() * z);
    const Vector k = least_squares(m2, target, tol);
    z += null_mat * k;
  }

  Witness w;
  w.kind = Witness::Kind::negative;
  w.omega = z;
  w.payload = p.a_matrix().transpose() * z;  // entries of the row omega A
  w.size = w.payload.squaredNorm();

  const Complex applied_target = p.tau().transpose() * z;
  if (std::abs(applied_target - Complex(1.0, 0.0)) > 1e-8) {
    throw InternalError("negative witness: target constraint violated");
  }
  if ((proj.transpose() * w.payload).norm() > 1e-8 * std::max(1.0, w.payload.norm())) {
    throw InternalError("negative witness: annihilation constraint violated");
  }
  return w;
}

Witness witness(const SpanProgram& p, const std::string& x, const Tolerance& tol) {
  if (auto w = positive_witness(p, x, tol)) return *w;
  if (auto w = negative_witness(p, x, tol)) return *w;
  throw Infeasible("program has neither witness for input " + x);
}

WitnessTable enumerate_witnesses(const SpanProgram& p, const std::vector<std::string>& inputs,
                                 const Tolerance& tol) {
  WitnessTable table;
  table.entries.reserve(inputs.size());
  for (const std::string& x : inputs) {
    Witness w = witness(p, x, tol);
    if (w.kind == Witness::Kind::positive) {
      table.has_positive = true;
      table.max_positive = std::max(table.max_positive, w.size);
    } else {
      table.has_negative = true;
      table.max_negative = std::max(table.max_negative, w.size);
    }
    table.entries.push_back(std::move(w));
  }
  return table;
}

SpanProgram scale_target(const SpanProgram& p, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("scale_target: factor must be positive");
  std::vector<std::vector<Matrix>> bases;
  bases.reserve(static_cast<std::size_t>(p.n()));
  for (int j = 0; j < p.n(); ++j) {
    std::vector<Matrix> per_letter;
    per_letter.reserve(static_cast<std::size_t>(p.q()));
    for (int a = 0; a < p.q(); ++a) per_letter.push_back(p.letter_basis(j, a));
    bases.push_back(std::move(per_letter));
  }
  return SpanProgram(p.n(), p.q(), p.input_dims(), p.true_dim(), p.false_dim(),
                     std::move(bases), p.a_matrix(), p.tau() * c);
}

SpanProgram scale_normalize(const SpanProgram& p, const std::vector<std::string>& inputs,
                            const Tolerance& tol) {
  if (inputs.empty()) throw InvalidInput("scale_normalize: empty input set");
  WitnessTable table = enumerate_witnesses(p, inputs, tol);

  SpanProgram balanced = p;
  if (table.has_positive && table.has_negative) {
    // tau -> c tau multiplies positive sizes by c^2 and negative ones by 1/c^2;
    // c^2 = sqrt(W-/W+) lands both maxima on the geometric mean.
    const double c_sq = std::sqrt(table.max_negative / table.max_positive);
    balanced = scale_target(p, std::sqrt(c_sq));
    table = enumerate_witnesses(balanced, inputs, tol);
  }

  // A witness bound below one breaks the query analysis; raise the maximum to
  // one when needed (a single target rescale cannot raise both sides, so the
  // bound, not every witness, is what gets pinned).
  const double bound = table.max_size();
  if (bound < 1.0 - 1e-12) {
    const bool max_is_positive = table.max_positive >= table.max_negative;
    const double c_sq = max_is_positive ? 1.0 / bound : bound;
    balanced = scale_target(balanced, std::sqrt(c_sq));
  }
  return balanced;
}

SpanProgram negate(const SpanProgram& p, const Tolerance& tol) {
  const MinNormSolution w0 = min_norm_solution(p.a_matrix(), p.tau(), tol);
  if (!w0.feasible) {
    throw Infeasible("negate: target is not in the range of the program map");
  }

  const int dim_h = p.dim_h();
  const std::vector<Vector> kernel = kernel_basis(p.a_matrix(), tol);
  Matrix kernel_proj = Matrix::Zero(dim_h, dim_h);
  for (const Vector& k : kernel) kernel_proj += k * k.adjoint();

  // New letter spaces H'_{j,a} = H_j intersect H_{j,a}^perp, in local coords.
  std::vector<std::vector<Matrix>> complements(static_cast<std::size_t>(p.n()));
  std::vector<Matrix> part_basis(static_cast<std::size_t>(p.n()));  // H'_j inside H_j
  std::vector<int> new_dims(static_cast<std::size_t>(p.n()));
  for (int j = 0; j < p.n(); ++j) {
    const int d = p.input_dim(j);
    std::vector<Matrix> locals;
    locals.reserve(static_cast<std::size_t>(p.q()));
    Eigen::Index total = 0;
    for (int a = 0; a < p.q(); ++a) {
      const Matrix& b = p.letter_basis(j, a);
      Matrix comp;
      if (d == 0) {
        comp = Matrix(0, 0);
      } else if (b.cols() == 0) {
        comp = Matrix::Identity(d, d);
      } else if (b.cols() == d) {
        comp = Matrix(d, 0);
      } else {
        const std::vector<Vector> null_dirs = kernel_basis(b.adjoint(), tol);
        comp = Matrix(d, static_cast<Eigen::Index>(null_dirs.size()));
        for (std::size_t i = 0; i < null_dirs.size(); ++i) {
          comp.col(static_cast<Eigen::Index>(i)) = null_dirs[i];
        }
      }
      total += comp.cols();
      locals.push_back(std::move(comp));
    }
    Matrix joined(d, total);
    Eigen::Index at = 0;
    for (const Matrix& c : locals) {
      joined.middleCols(at, c.cols()) = c;
      at += c.cols();
    }
    part_basis[static_cast<std::size_t>(j)] = (d == 0) ? Matrix(0, 0) : range_basis(joined, tol);
    new_dims[static_cast<std::size_t>(j)] =
        static_cast<int>(part_basis[static_cast<std::size_t>(j)].cols());
    // Re-express each complement in H'_j coordinates.
    std::vector<Matrix> re;
    re.reserve(locals.size());
    for (const Matrix& c : locals) {
      re.push_back(part_basis[static_cast<std::size_t>(j)].adjoint() * c);
    }
    complements[static_cast<std::size_t>(j)] = std::move(re);
  }

  const int new_true = p.false_dim();
  const int new_false = p.true_dim();
  int new_dim_h = new_true + new_false;
  for (int d : new_dims) new_dim_h += d;

  // Embedding of the new H into the old H coordinates.
  Matrix embed = Matrix::Zero(dim_h, new_dim_h);
  {
    Eigen::Index at = 0;
    for (int j = 0; j < p.n(); ++j) {
      const Matrix& basis = part_basis[static_cast<std::size_t>(j)];
      if (basis.cols() > 0) {
        embed.block(p.part_offset(j), at, p.input_dim(j), basis.cols()) = basis;
      }
      at += basis.cols();
    }
    for (int k = 0; k < new_true; ++k) {  // H'_true = old H_false
      embed(p.false_offset() + k, at + k) = 1.0;
    }
    at += new_true;
    for (int k = 0; k < new_false; ++k) {  // H'_false = old H_true
      embed(p.true_offset() + k, at + k) = 1.0;
    }
  }

  // A' = |0~><w0| + Pi_H Lambda_A on V' = H + span{|0~>}, with |0~> last.
  Matrix a_new = Matrix::Zero(dim_h + 1, new_dim_h);
  a_new.topRows(dim_h) = kernel_proj * embed;
  a_new.row(dim_h) = (w0.x.adjoint() * embed);
  Vector tau_new = Vector::Zero(dim_h + 1);
  tau_new(dim_h) = 1.0;

  return SpanProgram(p.n(), p.q(), new_dims, new_true, new_false, std::move(complements),
                     std::move(a_new), std::move(tau_new));
}

Matrix alpha_extended_map(const SpanProgram& p, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  Matrix atil(p.dim_v(), p.dim_h() + 1);
  atil.leftCols(p.dim_h()) = p.a_matrix();
  atil.col(p.dim_h()) = p.tau() / alpha;
  return atil;
}

AlgorithmUnitary algorithm_unitary(const SpanProgram& p, const std::string& x, double alpha,
                                   const Tolerance& tol) {
  if (!(alpha > 0.0)) throw InvalidInput("algorithm_unitary: alpha must be positive");
  const int dim = p.dim_h() + 1;
  if (dim > kMaxDimension) throw InvalidInput("algorithm_unitary: dimension exceeds cap");

  const Matrix atil = alpha_extended_map(p, alpha);
  const std::vector<Vector> kern = kernel_basis(atil, tol);
  Matrix lambda = Matrix::Zero(dim, dim);
  for (const Vector& k : kern) lambda += k * k.adjoint();

  Matrix pi = Matrix::Zero(dim, dim);
  pi.topLeftCorner(p.dim_h(), p.dim_h()) = p.hx_projector(x);
  pi(dim - 1, dim - 1) = 1.0;  // |hat0> is always available

  const Matrix identity = Matrix::Identity(dim, dim);
  const Matrix u = (2.0 * pi - identity) * (2.0 * lambda - identity);

  AlgorithmUnitary out;
  out.alpha = alpha;
  out.hat0_index = p.dim_h();
  out.kernel_projector = std::move(lambda);
  out.eigensystem = eig_unitary(u, tol);
  out.eigensystem.queries_per_application = 2;
  return out;
}

}  // namespace spansim
