#include "catalog.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace spansim {

void GraphSpec::validate() const {
  if (vertices < 2) throw InvalidInput("graph: at least two vertices required");
  if (s < 0 || s >= vertices || t < 0 || t >= vertices) {
    throw InvalidInput("graph: terminal out of range");
  }
  if (s == t) throw InvalidInput("graph: terminals must differ");
  if (edges.empty()) throw InvalidInput("graph: at least one potential edge required");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= vertices || v < 0 || v >= vertices) {
      throw InvalidInput("graph: edge endpoint out of range");
    }
    if (u == v) throw InvalidInput("graph: self-loops are not allowed");
  }
}

SpanProgram build_or(int n) {
  if (n < 1) throw InvalidInput("build_or: n must be at least 1");
  std::vector<int> dims(static_cast<std::size_t>(n), 1);
  std::vector<std::vector<Matrix>> bases;
  bases.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Matrix empty(1, 0);
    Matrix full = Matrix::Identity(1, 1);
    bases.push_back({empty, full});  // H_{j,0} = {0}, H_{j,1} = H_j
  }
  Matrix a = Matrix::Ones(1, n);
  Vector tau = Vector::Ones(1);
  return SpanProgram(n, 2, std::move(dims), 0, 0, std::move(bases), std::move(a),
                     std::move(tau));
}

SpanProgram build_stconn(const GraphSpec& g) {
  g.validate();
  const int n = static_cast<int>(g.edges.size());
  std::vector<int> dims(static_cast<std::size_t>(n), 1);
  std::vector<std::vector<Matrix>> bases;
  bases.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Matrix empty(1, 0);
    Matrix full = Matrix::Identity(1, 1);
    bases.push_back({empty, full});
  }
  Matrix a = Matrix::Zero(g.vertices, n);
  for (int j = 0; j < n; ++j) {
    a(g.edges[static_cast<std::size_t>(j)].first, j) = 1.0;
    a(g.edges[static_cast<std::size_t>(j)].second, j) = -1.0;
  }
  Vector tau = Vector::Zero(g.vertices);
  tau(g.s) = 1.0;
  tau(g.t) = -1.0;
  return SpanProgram(n, 2, std::move(dims), 0, 0, std::move(bases), std::move(a),
                     std::move(tau));
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

double effective_resistance(const GraphSpec& g, const std::string& x) {
  g.validate();
  if (x.size() != g.edges.size()) throw InvalidInput("effective_resistance: input length mismatch");

  UnionFind uf(g.vertices);
  RealMatrix laplacian = RealMatrix::Zero(g.vertices, g.vertices);
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const int bit = letter_at(x, static_cast<int>(j), 2);
    if (bit != 1) continue;
    const auto [u, v] = g.edges[j];
    laplacian(u, u) += 1.0;
    laplacian(v, v) += 1.0;
    laplacian(u, v) -= 1.0;
    laplacian(v, u) -= 1.0;
    uf.unite(u, v);
  }
  if (uf.find(g.s) != uf.find(g.t)) return std::numeric_limits<double>::infinity();

  RealVector demand = RealVector::Zero(g.vertices);
  demand(g.s) = 1.0;
  demand(g.t) = -1.0;

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(laplacian);
  if (eig.info() != Eigen::Success) throw InternalError("effective_resistance: eigensolver failed");
  const double cutoff = 1e-10 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  double resistance = 0.0;
  for (int i = 0; i < g.vertices; ++i) {
    const double lambda = eig.eigenvalues()(i);
    if (lambda <= cutoff) continue;
    const double overlap = eig.eigenvectors().col(i).dot(demand);
    resistance += overlap * overlap / lambda;
  }
  return resistance;
}

}  // namespace spansim
