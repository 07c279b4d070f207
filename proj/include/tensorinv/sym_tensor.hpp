#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tensorinv {

/// A multi-index is a list of slot indices, 0-based in memory. The canonical
/// representative of a symmetry class is the non-decreasing sort. The text
/// file format uses 1-based indices; conversion happens at the I/O boundary.
using MultiIndex = std::vector<int>;

/// Shared per-(order, dim) index bookkeeping: the lexicographically ordered
/// list of canonical multi-indices, each class's orbit size (number of
/// distinct slot permutations), and a dense map from any full index tuple to
/// its class. Instances are immutable and cached process-wide.
class IndexTable {
 public:
  static std::shared_ptr<const IndexTable> get(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  std::int64_t dense_size() const { return dense_size_; }

  const std::vector<MultiIndex>& classes() const { return classes_; }
  const MultiIndex& class_index(int k) const { return classes_[k]; }
  double orbit_size(int k) const { return orbit_sizes_[k]; }

  /// Row-major flat offset of a full index tuple.
  std::int64_t flat(std::span<const int> idx) const;
  /// Class id of a full index tuple (any slot order).
  int class_of(std::span<const int> idx) const { return class_of_flat_[flat(idx)]; }
  int class_of_flat(std::int64_t f) const { return class_of_flat_[f]; }

 private:
  IndexTable(int order, int dim);

  int order_;
  int dim_;
  std::int64_t dense_size_;
  std::vector<MultiIndex> classes_;
  std::vector<double> orbit_sizes_;
  std::vector<std::int32_t> class_of_flat_;
};

/// Dense fully symmetric real tensor of order m and dimension n, stored with
/// one value per symmetry class (C(n+m-1, n-1) values). Reading any
/// permutation of a multi-index returns the same value by construction.
/// Order 0 is allowed and holds a single scalar (traces of matrices land
/// there); the space-level API restricts itself to m >= 1.
class SymTensor {
 public:
  SymTensor() : SymTensor(0, 1) {}
  SymTensor(int order, int dim);

  int order() const { return table_->order(); }
  int dim() const { return table_->dim(); }
  int num_classes() const { return table_->num_classes(); }
  const IndexTable& table() const { return *table_; }

  double value(std::span<const int> idx) const { return values_[table_->class_of(idx)]; }
  void set(std::span<const int> idx, double v) { values_[table_->class_of(idx)] = v; }

  double class_value(int k) const { return values_[k]; }
  void set_class(int k, double v) { values_[k] = v; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Full n^m row-major array.
  std::vector<double> to_dense() const;

  SymTensor& operator+=(const SymTensor& rhs);
  SymTensor& operator-=(const SymTensor& rhs);
  SymTensor& operator*=(double s);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }
  friend SymTensor operator-(SymTensor a) { return a *= -1.0; }

 private:
  std::shared_ptr<const IndexTable> table_;
  std::vector<double> values_;
};

/// Symmetrize a raw order-m dense array (row-major, size n^m): the value at a
/// canonical index is the average of the input over all slot permutations.
SymTensor symmetrize(int order, int dim, std::span<const double> dense);

/// Contract one index pair: out(i3..im) = sum_i a(i, i, i3..im). For a
/// symmetric tensor every choice of the traced pair gives the same result.
SymTensor trace_vector(const SymTensor& a);

/// True iff every entry of trace_vector(a) has magnitude <= tol.
bool is_traceless(const SymTensor& a, double tol);

/// Orthogonal projection onto the symmetric traceless subspace. Closed forms
/// for m = 2: a - (tr a / n) I, and m = 3:
///   out_ijk = a_ijk - (d_ij t_k + d_jk t_i + d_ki t_j) / (n + 2),  t = trace_vector(a).
/// Other orders are rejected.
SymTensor traceless_project(const SymTensor& a);

/// Frobenius inner product over all n^m full tuples (each class weighted by
/// its orbit size).
double frobenius_inner(const SymTensor& a, const SymTensor& b);

double frobenius_norm(const SymTensor& a);

/// Largest entry magnitude over all classes.
double max_abs(const SymTensor& a);

}  // namespace tensorinv
