#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensorinv/rng.hpp"
#include "tensorinv/sym_tensor.hpp"

namespace tensorinv {

enum class GroupKind { O, SO };

std::string to_string(GroupKind k);
GroupKind group_kind_from_string(const std::string& s);

struct GroupSpec {
  GroupKind kind = GroupKind::O;
  int dim = 2;

  void validate() const;
};

/// Manifold dimension n(n-1)/2, the same for O(n) and SO(n).
int group_dim(const GroupSpec& spec);

/// Validated group element: ||g^T g - I||_max <= 1e-10, |det g| = 1 within
/// 1e-10, and det g = +1 when the parent is SO.
class OrthogonalMatrix {
 public:
  OrthogonalMatrix(Eigen::MatrixXd m, GroupSpec parent);

  const Eigen::MatrixXd& matrix() const { return m_; }
  const GroupSpec& parent() const { return parent_; }
  double det() const { return det_; }

 private:
  Eigen::MatrixXd m_;
  GroupSpec parent_;
  double det_;
};

/// Skew-symmetric by construction (never measured).
struct SkewGenerator {
  Eigen::MatrixXd omega;
};

/// The n(n-1)/2 elementary generators E_pq - E_qp, p < q, in lexicographic
/// (p, q) order.
std::vector<SkewGenerator> so_generators(int n);

/// Matrix exponential of a skew matrix: scaling-and-squaring with a 13-term
/// Taylor core evaluated at norm <= 0.5.
Eigen::MatrixXd expm_skew(const Eigen::MatrixXd& omega);

/// Haar-distributed sample: QR of a standard-Gaussian matrix with the
/// R-diagonal sign correction; for SO a det of -1 is repaired by negating
/// the first column.
OrthogonalMatrix haar_sample(const GroupSpec& spec, Rng& rng);

/// (g.t)_{j1..jm} = sum g_{j1 i1} ... g_{jm im} t_{i1..im}. Accepts any
/// square matrix; symmetry of the output is restored by construction.
SymTensor act(const Eigen::MatrixXd& g, const SymTensor& t);
SymTensor act(const OrthogonalMatrix& g, const SymTensor& t);

/// Derivative of the action at the identity along omega (Leibniz rule over
/// the m slots): (w.t)_{j1..jm} = sum_s sum_p w_{j_s p} t_{j1..p..jm}.
SymTensor infinitesimal_act(const Eigen::MatrixXd& omega, const SymTensor& t);
SymTensor infinitesimal_act(const SkewGenerator& omega, const SymTensor& t);

namespace detail {

/// Apply g along every mode of a dense row-major array in place
/// (no symmetrization). Used by the hot alignment loop.
void dense_act(const Eigen::MatrixXd& g, int order, int dim, std::vector<double>& data,
               std::vector<double>& scratch);

}  // namespace detail

}  // namespace tensorinv
