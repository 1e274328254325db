#include "kinex/comove.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

#include "kinex/error.hpp"
#include "kinex/format.hpp"
#include "kinex/kernels.hpp"

namespace kinex {
namespace {

void check_square(const std::vector<CountryCode>& labels, const SquareMatrix& m,
                  const char* what) {
  if (m.n != labels.size() || m.data.size() != m.n * m.n) {
    throw Error(ErrorCode::Domain, std::string(what) + ": labels and matrix size differ");
  }
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(std::vector<CountryCode> labels, SquareMatrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  check_square(labels_, entries_, "correlation matrix");
  for (std::size_t i = 0; i < entries_.n; ++i) {
    if (entries_(i, i) != 1.0) throw Error(ErrorCode::Domain, "correlation matrix: diagonal must be 1");
    for (std::size_t j = 0; j < entries_.n; ++j) {
      const double v = entries_(i, j);
      if (!(v >= -1.0 && v <= 1.0)) {
        throw Error(ErrorCode::Domain, "correlation matrix: entry outside [-1, 1]");
      }
      if (v != entries_(j, i)) throw Error(ErrorCode::Domain, "correlation matrix: not symmetric");
    }
  }
}

DistanceMatrix::DistanceMatrix(std::vector<CountryCode> labels, SquareMatrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  check_square(labels_, entries_, "distance matrix");
  for (std::size_t i = 0; i < entries_.n; ++i) {
    if (entries_(i, i) != 0.0) throw Error(ErrorCode::Domain, "distance matrix: diagonal must be 0");
    for (std::size_t j = 0; j < entries_.n; ++j) {
      const double v = entries_(i, j);
      if (!(v >= 0.0 && v <= 2.0)) {
        throw Error(ErrorCode::Domain, "distance matrix: entry outside [0, 2]");
      }
      if (v != entries_(j, i)) throw Error(ErrorCode::Domain, "distance matrix: not symmetric");
    }
  }
}

double SpanningTree::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  --components_;
  return true;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::Domain, "pearson: series lengths differ (" + std::to_string(x.size()) +
                                       " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::InsufficientData,
                "pearson: need at least 3 observations, got " + std::to_string(x.size()));
  }
  auto constant = [](std::span<const double> s) {
    return std::all_of(s.begin(), s.end(), [&](double v) { return v == s.front(); });
  };
  if (constant(x) || constant(y)) {
    throw Error(ErrorCode::Degenerate, "pearson: constant series has undefined correlation");
  }
  const double n = static_cast<double>(x.size());
  const double mx = kernels::sum(x) / n;
  const double my = kernels::sum(y) / n;
  const auto m = kernels::centered_moments(x, mx, y, my);
  if (!(m.sxx > 0.0) || !(m.syy > 0.0)) {
    throw Error(ErrorCode::Degenerate, "pearson: zero variance");
  }
  const double rho = m.sxy / (std::sqrt(m.sxx) * std::sqrt(m.syy));
  return std::clamp(rho, -1.0, 1.0);
}

namespace {

struct PairOutcome {
  bool valid = false;
  double rho = 0.0;
  std::size_t overlap = 0;
  bool degenerate = false;
};

PairOutcome evaluate_pair(const TimeSeriesPanel& panel, std::size_t i, std::size_t j,
                          const CleaningPolicy& policy) {
  PairOutcome out;
  std::vector<double> a, b;
  auto ra = panel.row(i);
  auto rb = panel.row(j);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    if (ra[k] && rb[k]) {
      a.push_back(*ra[k]);
      b.push_back(*rb[k]);
    }
  }
  out.overlap = a.size();
  if (out.overlap < static_cast<std::size_t>(policy.min_overlap)) return out;
  try {
    out.rho = pearson(a, b);
    out.valid = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Degenerate) throw;
    out.degenerate = true;
  }
  return out;
}

bool series_is_constant(std::span<const std::optional<double>> row) {
  std::optional<double> first;
  for (const auto& v : row) {
    if (!v) continue;
    if (!first) {
      first = v;
    } else if (*v != *first) {
      return false;
    }
  }
  return true;
}

}  // namespace

CorrelationResult correlation_matrix(const TimeSeriesPanel& panel, const CleaningPolicy& policy,
                                     unsigned threads) {
  policy.validate();
  const std::size_t n = panel.num_countries();
  std::vector<PairOutcome> pairs(n * n);

  std::vector<std::pair<std::size_t, std::size_t>> todo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) todo.emplace_back(i, j);
  }
  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t k = start; k < todo.size(); k += stride) {
      auto [i, j] = todo[k];
      pairs[i * n + j] = evaluate_pair(panel, i, j, policy);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, todo.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  auto outcome = [&](std::size_t i, std::size_t j) -> const PairOutcome& {
    return i < j ? pairs[i * n + j] : pairs[j * n + i];
  };

  std::vector<bool> alive(n, true);
  std::vector<DroppedCountry> dropped;
  for (;;) {
    std::size_t worst = n;
    std::size_t worst_bad = 0;
    std::size_t survivors = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      ++survivors;
      std::size_t bad = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && alive[j] && !outcome(i, j).valid) ++bad;
      }
      // Ties go to the later country so earlier rows are kept.
      if (bad > 0 && bad >= worst_bad) {
        worst = i;
        worst_bad = bad;
      }
    }
    if (worst == n) break;
    std::string reason;
    if (series_is_constant(panel.row(worst))) {
      reason = "constant series (correlation undefined)";
    } else {
      reason = "no valid correlation with " + std::to_string(worst_bad) + " of " +
               std::to_string(survivors - 1) + " remaining countries (overlap below " +
               std::to_string(policy.min_overlap) + " years or constant over the overlap)";
    }
    dropped.push_back({panel.countries()[worst], reason});
    alive[worst] = false;
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) keep.push_back(i);
  }
  if (keep.size() < 2) {
    std::string msg = "correlation matrix needs at least 2 usable countries, got " +
                      std::to_string(keep.size());
    if (!dropped.empty()) {
      msg += "; dropped:";
      for (const auto& d : dropped) msg += " " + d.code.str();
    }
    throw Error(ErrorCode::InsufficientData, msg);
  }

  SquareMatrix m(keep.size(), 0.0);
  std::vector<CountryCode> labels;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    labels.push_back(panel.countries()[keep[a]]);
    m(a, a) = 1.0;
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const double rho = outcome(keep[a], keep[b]).rho;
      m(a, b) = rho;
      m(b, a) = rho;
    }
  }
  return {CorrelationMatrix(std::move(labels), std::move(m)), std::move(dropped)};
}

DistanceMatrix distance_matrix(const CorrelationMatrix& c) {
  SquareMatrix out(c.size());
  kernels::correlation_to_distance(c.entries().data, out.data);
  for (std::size_t i = 0; i < out.n; ++i) out(i, i) = 0.0;
  return DistanceMatrix(c.labels(), std::move(out));
}

Embedding classical_mds(const DistanceMatrix& d, std::size_t dims) {
  const std::size_t n = d.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData, "classical_mds: need at least 2 points");
  }
  if (dims < 1 || dims > n - 1) {
    throw Error(ErrorCode::Domain, "classical_mds: dims must be in [1, " + std::to_string(n - 1) +
                                       "], got " + std::to_string(dims));
  }
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd sq(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const double v = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      sq(i, j) = v * v;
    }
  }
  // B = -1/2 J D^2 J with J the centering matrix.
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Numeric, "classical_mds: eigendecomposition failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  Embedding e;
  e.labels = d.labels();
  e.dims = dims;
  e.coords.assign(n * dims, 0.0);
  const double scale = std::max(std::abs(values(N - 1)), std::abs(values(0)));
  e.min_eigenvalue = values(0);
  e.non_euclidean = values(0) < -1e-10 * std::max(scale, 1e-300);

  for (std::size_t axis = 0; axis < dims; ++axis) {
    const Eigen::Index col = N - 1 - static_cast<Eigen::Index>(axis);
    const double lambda = values(col);
    e.eigenvalues.push_back(lambda);
    const double root = std::sqrt(std::max(lambda, 0.0));
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(vectors(static_cast<Eigen::Index>(i), col)) >
          std::abs(vectors(static_cast<Eigen::Index>(pivot), col))) {
        pivot = i;
      }
    }
    const double sign = vectors(static_cast<Eigen::Index>(pivot), col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      e.coords[i * dims + axis] = sign * root * vectors(static_cast<Eigen::Index>(i), col);
    }
  }
  return e;
}

SpanningTree mst(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) throw Error(ErrorCode::InsufficientData, "mst: need at least 2 nodes");
  std::vector<TreeEdge> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) candidates.push_back({i, j, d(i, j)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const TreeEdge& x, const TreeEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  SpanningTree tree;
  tree.labels = d.labels();
  UnionFind uf(n);
  for (const auto& e : candidates) {
    if (uf.unite(e.a, e.b)) {
      tree.edges.push_back(e);
      if (tree.edges.size() == n - 1) break;
    }
  }
  return tree;
}

namespace {

void write_labels(JsonWriter& w, const std::vector<CountryCode>& labels) {
  w.key("labels").begin_array();
  for (const auto& l : labels) w.value(l.str());
  w.end_array();
}

void write_matrix(std::ostream& out, const std::vector<CountryCode>& labels, const SquareMatrix& m,
                  std::string_view kind) {
  JsonWriter w(out);
  w.begin_object();
  w.key("kind").value(kind);
  write_labels(w, labels);
  w.key("rows").begin_array();
  for (std::size_t i = 0; i < m.n; ++i) {
    w.number_array(std::vector<double>(m.data.begin() + static_cast<std::ptrdiff_t>(i * m.n),
                                       m.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.n)));
  }
  w.end_array();
  w.end_object();
}

}  // namespace

void write_json(std::ostream& out, const CorrelationMatrix& c) {
  write_matrix(out, c.labels(), c.entries(), "correlation");
}

void write_json(std::ostream& out, const DistanceMatrix& d) {
  write_matrix(out, d.labels(), d.entries(), "distance");
}

void write_json(std::ostream& out, const Embedding& e) {
  JsonWriter w(out);
  w.begin_object();
  write_labels(w, e.labels);
  w.key("coords").begin_array();
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    w.number_array(std::vector<double>(e.coords.begin() + static_cast<std::ptrdiff_t>(i * e.dims),
                                       e.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * e.dims)));
  }
  w.end_array();
  w.key("eigenvalues").number_array(e.eigenvalues);
  w.key("non_euclidean").value(e.non_euclidean);
  w.key("min_eigenvalue").value(e.min_eigenvalue);
  w.end_object();
}

void write_json(std::ostream& out, const SpanningTree& t) {
  JsonWriter w(out);
  w.begin_object();
  write_labels(w, t.labels);
  w.key("edges").begin_array();
  for (const auto& e : t.edges) {
    w.begin_object();
    w.key("a").value(t.labels[e.a].str());
    w.key("b").value(t.labels[e.b].str());
    w.key("w").value(e.weight);
    w.end_object();
  }
  w.end_array();
  w.key("total_weight").value(t.total_weight());
  w.end_object();
}

void write_dropped_json(std::ostream& out, const std::vector<DroppedCountry>& dropped) {
  JsonWriter w(out);
  w.begin_object();
  w.key("dropped").begin_array();
  for (const auto& d : dropped) {
    w.begin_object();
    w.key("country").value(d.code.str());
    w.key("reason").value(d.reason);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace kinex
