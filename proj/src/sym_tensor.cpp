#include "tensorinv/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace tensorinv {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Iterate all full tuples of length `order` over {0..dim-1} in row-major
// (lexicographic) order. Returns false once exhausted.
bool advance(std::vector<int>& idx, int dim) {
  for (int s = static_cast<int>(idx.size()) - 1; s >= 0; --s) {
    if (++idx[s] < dim) return true;
    idx[s] = 0;
  }
  return false;
}

}  // namespace

IndexTable::IndexTable(int order, int dim) : order_(order), dim_(dim) {
  if (order < 0) throw std::invalid_argument("tensor order must be >= 0");
  if (dim < 1) throw std::invalid_argument("tensor dimension must be >= 1");

  dense_size_ = 1;
  for (int s = 0; s < order; ++s) {
    dense_size_ *= dim;
    if (dense_size_ > (1 << 24)) throw std::invalid_argument("tensor too large for dense enumeration");
  }

  // Canonical classes: non-decreasing tuples in lexicographic order.
  MultiIndex cur(order, 0);
  auto emit = [&](auto&& self, int slot, int lo) -> void {
    if (slot == order) {
      classes_.push_back(cur);
      return;
    }
    for (int v = lo; v < dim; ++v) {
      cur[slot] = v;
      self(self, slot + 1, v);
    }
  };
  emit(emit, 0, 0);

  // Orbit size of a class = order! / prod(multiplicity!), the number of
  // distinct slot permutations of its canonical tuple.
  orbit_sizes_.resize(classes_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    double denom = 1.0;
    std::size_t s = 0;
    while (s < classes_[k].size()) {
      std::size_t e = s;
      while (e < classes_[k].size() && classes_[k][e] == classes_[k][s]) ++e;
      denom *= factorial(static_cast<int>(e - s));
      s = e;
    }
    orbit_sizes_[k] = factorial(order) / denom;
  }

  class_of_flat_.assign(static_cast<std::size_t>(dense_size_), -1);
  if (order == 0) {
    class_of_flat_[0] = 0;
  } else {
    std::vector<int> idx(order, 0);
    MultiIndex sorted(order);
    std::int64_t f = 0;
    do {
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      const int k = static_cast<int>(std::lower_bound(classes_.begin(), classes_.end(), sorted) - classes_.begin());
      class_of_flat_[f++] = k;
    } while (advance(idx, dim));
  }
}

std::int64_t IndexTable::flat(std::span<const int> idx) const {
  std::int64_t f = 0;
  for (int s = 0; s < order_; ++s) f = f * dim_ + idx[s];
  return f;
}

std::shared_ptr<const IndexTable> IndexTable::get(int order, int dim) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{order, dim}];
  if (!slot) slot = std::shared_ptr<const IndexTable>(new IndexTable(order, dim));
  return slot;
}

SymTensor::SymTensor(int order, int dim)
    : table_(IndexTable::get(order, dim)), values_(table_->num_classes(), 0.0) {}

std::vector<double> SymTensor::to_dense() const {
  std::vector<double> out(static_cast<std::size_t>(table_->dense_size()), 0.0);
  if (order() == 0) {
    out[0] = values_[0];
    return out;
  }
  std::vector<int> idx(order(), 0);
  std::int64_t f = 0;
  do {
    out[f] = values_[table_->class_of_flat(f)];
    ++f;
  } while (advance(idx, dim()));
  return out;
}

namespace {

void require_same_shape(const SymTensor& a, const SymTensor& b, const char* what) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": tensor shapes differ");
}

}  // namespace

SymTensor& SymTensor::operator+=(const SymTensor& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= rhs.values_[k];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

SymTensor symmetrize(int order, int dim, std::span<const double> dense) {
  SymTensor out(order, dim);
  const IndexTable& tab = out.table();
  if (static_cast<std::int64_t>(dense.size()) != tab.dense_size())
    throw std::invalid_argument("symmetrize: dense array has wrong size");
  if (order == 0) {
    out.set_class(0, dense[0]);
    return out;
  }
  std::vector<int> idx(order, 0);
  std::int64_t f = 0;
  do {
    out.values()[tab.class_of_flat(f)] += dense[f];
    ++f;
  } while (advance(idx, dim));
  for (int k = 0; k < tab.num_classes(); ++k) out.values()[k] /= tab.orbit_size(k);
  return out;
}

SymTensor trace_vector(const SymTensor& a) {
  if (a.order() < 2) throw std::invalid_argument("trace_vector: tensor order must be >= 2");
  const int n = a.dim();
  SymTensor out(a.order() - 2, n);
  const auto& classes = out.table().classes();
  std::vector<int> idx(a.order());
  for (int k = 0; k < out.num_classes(); ++k) {
    const MultiIndex& rest = classes[k];
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      idx[0] = i;
      idx[1] = i;
      std::copy(rest.begin(), rest.end(), idx.begin() + 2);
      s += a.value(idx);
    }
    out.set_class(k, s);
  }
  return out;
}

bool is_traceless(const SymTensor& a, double tol) {
  return max_abs(trace_vector(a)) <= tol;
}

SymTensor traceless_project(const SymTensor& a) {
  const int n = a.dim();
  if (n < 2) throw std::invalid_argument("traceless_project: dimension must be >= 2");
  if (a.order() == 2) {
    const double t = trace_vector(a).class_value(0);
    SymTensor out = a;
    for (int i = 0; i < n; ++i) {
      const int idx[2] = {i, i};
      out.set(idx, a.value(idx) - t / n);
    }
    return out;
  }
  if (a.order() == 3) {
    const SymTensor t = trace_vector(a);
    SymTensor out = a;
    const auto& classes = a.table().classes();
    for (int k = 0; k < a.num_classes(); ++k) {
      const int i = classes[k][0], j = classes[k][1], l = classes[k][2];
      double corr = 0.0;
      if (i == j) corr += t.class_value(l);
      if (j == l) corr += t.class_value(i);
      if (l == i) corr += t.class_value(j);
      out.set_class(k, a.class_value(k) - corr / (n + 2));
    }
    return out;
  }
  throw std::invalid_argument("traceless_project: only orders 2 and 3 are supported");
}

double frobenius_inner(const SymTensor& a, const SymTensor& b) {
  require_same_shape(a, b, "frobenius_inner");
  double s = 0.0;
  for (int k = 0; k < a.num_classes(); ++k)
    s += a.table().orbit_size(k) * a.class_value(k) * b.class_value(k);
  return s;
}

double frobenius_norm(const SymTensor& a) { return std::sqrt(frobenius_inner(a, a)); }

double max_abs(const SymTensor& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace tensorinv
