#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensorinv/einsum.hpp"
#include "tensorinv/group.hpp"
#include "tensorinv/rng.hpp"
#include "tensorinv/spaces.hpp"

namespace tensorinv {

struct FamilyMember {
  std::string name;
  int declared_degree = 0;
  ContractionExpr expr;
};

/// A named family of scalar invariants over one tensor space: optional
/// let-bound intermediates plus an ordered member list. Every member must be
/// a scalar expression whose declared degree matches the computed degree in
/// the input symbol. The input symbol is the unique symbol that is neither a
/// let name nor a builtin.
struct InvariantFamily {
  std::string name;
  TensorSpaceSpec space;
  GroupSpec group;
  std::string input_symbol = "A";
  std::vector<LetBinding> lets;
  std::vector<FamilyMember> members;

  int size() const { return static_cast<int>(members.size()); }
  std::vector<int> degrees() const;
  std::vector<std::string> member_names() const;

  /// Structural checks (scalar members, degree agreement, symbol inference).
  void validate() const;
};

/// Builtin ids: ST33_DEFAULT (candidate family on St(3,3) under O(3), degree
/// profile 2,4,6,8) and S23_CLASSICAL (trace powers on S(2,3), degrees
/// 1,2,3). ST33_DEFAULT is a candidate: it must pass the Jacobian rank gate
/// before any certificate treats it as a function basis.
InvariantFamily builtin_family(const std::string& id);
bool is_builtin_family_id(const std::string& id);

/// Ordered gate-fallback chain for a family. For ST33_DEFAULT the chain is
/// the primary member set, then the fourth member replaced by
/// E_ij B_jk B_ki (degree 8), then by w_i B_ij B_jk w_k with
/// w_i = A_ipq B_pq (degree 10). Everything else certifies as-is.
std::vector<InvariantFamily> family_candidates(const InvariantFamily& f);

/// Text format, '#' starts a comment:
///   space St 3 3
///   group O 3
///   let B_ij = A_ipq A_jpq
///   inv J2 2 = A_ijk A_ijk
InvariantFamily parse_family(const std::string& text, const std::string& name_hint = "family");
InvariantFamily load_family(const std::filesystem::path& path);
std::string family_to_text(const InvariantFamily& f);
void save_family(const InvariantFamily& f, const std::filesystem::path& path);

/// Member values at `a`. Membership in the family's space is checked at
/// 1e-9 * max(1, ||a||) unless `check_membership` is false.
Eigen::VectorXd eval_family(const InvariantFamily& f, const SymTensor& a,
                            bool check_membership = true, bool cache_lets = true);

/// eval_family(f, lambda * a); each component must scale as
/// lambda^degree (asserted by tests, not here).
Eigen::VectorXd scale_behavior(const InvariantFamily& f, const SymTensor& a, double lambda);

/// Central-difference Jacobian, rows = members, columns = basis directions.
/// h <= 0 selects the default 1e-6 * max(1, ||a||).
Eigen::MatrixXd jacobian_fd(const InvariantFamily& f, const SymTensor& a,
                            const SubspaceBasis& basis, double h = 0.0);

struct InvarianceReport {
  double max_deviation = 0.0;
  Eigen::MatrixXd worst_g;
  int samples = 0;
  double tol = 0.0;
  bool passed = false;
};

/// Max over Haar samples of the per-member relative deviation
/// |p(g.a) - p(a)| / max(1, |p(a)|).
InvarianceReport check_invariance(const InvariantFamily& f, const SymTensor& a, int num_samples,
                                  double tol, Rng& rng);

}  // namespace tensorinv
