#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensorinv/rng.hpp"
#include "tensorinv/sym_tensor.hpp"

namespace tensorinv {

/// T: all tensors, S: symmetric, St: symmetric traceless.
enum class SpaceKind { T, S, St };

std::string to_string(SpaceKind k);
SpaceKind space_kind_from_string(const std::string& s);

struct TensorSpaceSpec {
  SpaceKind kind = SpaceKind::S;
  int order = 1;
  int dim = 1;

  /// Throws std::invalid_argument on m < 1, n < 1, or St with m < 2.
  void validate() const;
};

/// Linear-space dimension: n^m for T, C(n+m-1, n-1) for S, and
/// C(n+m-1, n-1) - C(n+m-3, n-1) for St.
std::int64_t dim_space(const TensorSpaceSpec& spec);

/// Orthonormal (Frobenius) basis of S(m,n) or St(m,n). Deterministic
/// construction: canonical multi-indices in lexicographic order give
/// symmetrized unit tensors; for St each is projected with
/// traceless_project; modified Gram-Schmidt with drop tolerance 1e-10.
struct SubspaceBasis {
  TensorSpaceSpec space;
  std::vector<SymTensor> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

SubspaceBasis orthonormal_basis(const TensorSpaceSpec& spec);

/// Coordinates of `a` in the orthonormal basis. Rejects inputs whose
/// reconstruction residual exceeds `tol` (input outside the subspace).
Eigen::VectorXd coords(const SymTensor& a, const SubspaceBasis& basis, double tol = 1e-9);

SymTensor from_coords(const Eigen::VectorXd& x, const SubspaceBasis& basis);

/// Membership predicate: matching shape, and traceless within tol for St.
bool in_space(const SymTensor& a, const TensorSpaceSpec& spec, double tol = 1e-10);

/// Unit-Gaussian coordinates in the space's orthonormal basis.
SymTensor random_tensor(const TensorSpaceSpec& spec, Rng& rng);
SymTensor random_tensor(const SubspaceBasis& basis, Rng& rng);

/// Same, normalized to unit Frobenius norm.
SymTensor random_unit_tensor(const SubspaceBasis& basis, Rng& rng);

}  // namespace tensorinv
