#pragma once

// Co-movement analytics: Pearson correlation matrices over country panels,
// the sqrt(2(1 - rho)) distance transform, classical MDS maps and minimum
// spanning trees.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kinex/panel.hpp"

namespace kinex {

// Dense row-major square matrix of doubles.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), data(size * size, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

// Symmetric, unit diagonal, entries in [-1, 1].
class CorrelationMatrix {
 public:
  // Throws Error(Domain) if the invariants do not hold.
  CorrelationMatrix(std::vector<CountryCode> labels, SquareMatrix entries);

  const std::vector<CountryCode>& labels() const noexcept { return labels_; }
  const SquareMatrix& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  std::vector<CountryCode> labels_;
  SquareMatrix entries_;
};

// Symmetric, zero diagonal, entries in [0, 2].
class DistanceMatrix {
 public:
  // Throws Error(Domain) if the invariants do not hold.
  DistanceMatrix(std::vector<CountryCode> labels, SquareMatrix entries);

  const std::vector<CountryCode>& labels() const noexcept { return labels_; }
  const SquareMatrix& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  std::vector<CountryCode> labels_;
  SquareMatrix entries_;
};

struct Embedding {
  std::vector<CountryCode> labels;
  std::size_t dims = 0;
  // N x dims, row-major.
  std::vector<double> coords;
  // Retained eigenvalues of the double-centred matrix, descending, unclamped.
  std::vector<double> eigenvalues;
  // True if the full spectrum has a clearly negative eigenvalue, i.e. the
  // distances are not exactly Euclidean.
  bool non_euclidean = false;
  double min_eigenvalue = 0.0;

  double coord(std::size_t point, std::size_t axis) const { return coords[point * dims + axis]; }
};

struct TreeEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

struct SpanningTree {
  std::vector<CountryCode> labels;
  std::vector<TreeEdge> edges;

  double total_weight() const;
};

struct DroppedCountry {
  CountryCode code;
  std::string reason;
};

struct CorrelationResult {
  CorrelationMatrix matrix;
  std::vector<DroppedCountry> dropped;
};

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  // Returns false if x and y were already connected.
  bool unite(std::size_t x, std::size_t y);
  std::size_t components() const noexcept { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t components_;
};

// Equal-time Pearson correlation, clamped to [-1, 1]. Requires equal lengths
// of at least 3; throws Error(Degenerate) if either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Pairwise-complete correlation matrix. Countries that cannot be paired with
// every other survivor (constant series, too little overlap) are removed one
// at a time, worst first, and listed in `dropped`. Entries are computed
// independently per pair, so `threads` never changes the result.
CorrelationResult correlation_matrix(const TimeSeriesPanel& panel, const CleaningPolicy& policy,
                                     unsigned threads = 1);

DistanceMatrix distance_matrix(const CorrelationMatrix& c);

// Classical (Torgerson) MDS. Each axis is oriented so that its
// largest-magnitude coordinate is positive (first such point on ties).
Embedding classical_mds(const DistanceMatrix& d, std::size_t dims = 2);

// Kruskal with ties broken by (weight, a, b) ascending.
SpanningTree mst(const DistanceMatrix& d);

void write_json(std::ostream& out, const CorrelationMatrix& c);
void write_json(std::ostream& out, const DistanceMatrix& d);
void write_json(std::ostream& out, const Embedding& e);
void write_json(std::ostream& out, const SpanningTree& t);
void write_dropped_json(std::ostream& out, const std::vector<DroppedCountry>& dropped);

}  // namespace kinex
