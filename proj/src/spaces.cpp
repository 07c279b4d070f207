#include "tensorinv/spaces.hpp"

#include <stdexcept>

namespace tensorinv {

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::T: return "T";
    case SpaceKind::S: return "S";
    case SpaceKind::St: return "St";
  }
  throw std::logic_error("unreachable");
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "T") return SpaceKind::T;
  if (s == "S") return SpaceKind::S;
  if (s == "St") return SpaceKind::St;
  throw std::invalid_argument("unknown space kind '" + s + "' (expected T, S, or St)");
}

void TensorSpaceSpec::validate() const {
  if (order < 1) throw std::invalid_argument("space order must be >= 1");
  if (dim < 1) throw std::invalid_argument("space dimension must be >= 1");
  if (kind == SpaceKind::St && order < 2)
    throw std::invalid_argument("St(m,n) requires m >= 2: tracelessness contracts an index pair");
}

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::int64_t dim_space(const TensorSpaceSpec& spec) {
  spec.validate();
  const std::int64_t m = spec.order, n = spec.dim;
  switch (spec.kind) {
    case SpaceKind::T: {
      std::int64_t r = 1;
      for (int i = 0; i < m; ++i) r *= n;
      return r;
    }
    case SpaceKind::S:
      return binomial(n + m - 1, n - 1);
    case SpaceKind::St:
      return binomial(n + m - 1, n - 1) - binomial(n + m - 3, n - 1);
  }
  throw std::logic_error("unreachable");
}

SubspaceBasis orthonormal_basis(const TensorSpaceSpec& spec) {
  spec.validate();
  if (spec.kind == SpaceKind::T)
    throw std::invalid_argument("orthonormal_basis: only S and St spaces have a symmetric-storage basis");
  if (spec.kind == SpaceKind::St && spec.order > 3)
    throw std::invalid_argument("orthonormal_basis: St supported for orders 2 and 3 only");

  const int m = spec.order, n = spec.dim;
  const auto tab = IndexTable::get(m, n);
  constexpr double kDropTol = 1e-10;

  SubspaceBasis basis;
  basis.space = spec;
  for (int k = 0; k < tab->num_classes(); ++k) {
    // Symmetrized unit tensor of the class: value 1/orbit at the class.
    SymTensor v(m, n);
    v.set_class(k, 1.0 / tab->orbit_size(k));
    if (spec.kind == SpaceKind::St) v = traceless_project(v);
    // Modified Gram-Schmidt, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (const SymTensor& b : basis.elements) v -= frobenius_inner(v, b) * b;
    const double nv = frobenius_norm(v);
    if (nv > kDropTol) basis.elements.push_back(v * (1.0 / nv));
  }
  return basis;
}

Eigen::VectorXd coords(const SymTensor& a, const SubspaceBasis& basis, double tol) {
  if (!basis.elements.empty() &&
      (a.order() != basis.elements[0].order() || a.dim() != basis.elements[0].dim()))
    throw std::invalid_argument("coords: tensor shape does not match basis");
  Eigen::VectorXd x(basis.size());
  for (int i = 0; i < basis.size(); ++i) x[i] = frobenius_inner(a, basis.elements[i]);
  SymTensor resid = a;
  for (int i = 0; i < basis.size(); ++i) resid -= x[i] * basis.elements[i];
  if (frobenius_norm(resid) > tol)
    throw std::invalid_argument("coords: input lies outside the subspace (residual above tolerance)");
  return x;
}

SymTensor from_coords(const Eigen::VectorXd& x, const SubspaceBasis& basis) {
  if (x.size() != basis.size())
    throw std::invalid_argument("from_coords: coordinate length does not match basis size");
  SymTensor out(basis.space.order, basis.space.dim);
  for (int i = 0; i < basis.size(); ++i) out += x[i] * basis.elements[i];
  return out;
}

bool in_space(const SymTensor& a, const TensorSpaceSpec& spec, double tol) {
  if (a.order() != spec.order || a.dim() != spec.dim) return false;
  if (spec.kind == SpaceKind::St) return is_traceless(a, tol);
  return true;
}

SymTensor random_tensor(const SubspaceBasis& basis, Rng& rng) {
  Eigen::VectorXd x(basis.size());
  for (int i = 0; i < basis.size(); ++i) x[i] = rng.gaussian();
  return from_coords(x, basis);
}

SymTensor random_tensor(const TensorSpaceSpec& spec, Rng& rng) {
  const SubspaceBasis basis = orthonormal_basis(spec);
  return random_tensor(basis, rng);
}

SymTensor random_unit_tensor(const SubspaceBasis& basis, Rng& rng) {
  SymTensor a = random_tensor(basis, rng);
  const double nrm = frobenius_norm(a);
  if (nrm == 0.0) return a;
  return a * (1.0 / nrm);
}

}  // namespace tensorinv
