#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensorinv/family.hpp"
#include "tensorinv/group.hpp"
#include "tensorinv/rng.hpp"
#include "tensorinv/spaces.hpp"

#include <nlohmann/json_fwd.hpp>

namespace tensorinv {

/// Numerical rank: number of singular values above tol * sigma_max, with
/// sigma_max == 0 giving rank 0.
int numerical_rank(const Eigen::VectorXd& singular_values, double tol);

struct OrbitReport {
  Eigen::VectorXd input_coords;
  Eigen::MatrixXd tangent;  // dim(V) x dim(G), columns are tangent directions
  Eigen::VectorXd singular_values;
  int orbit_dim = 0;
  double tol = 0.0;
};

/// Orbit dimension at `a`: rank of the matrix whose columns are the
/// coordinates of the infinitesimal action along each so(n) generator.
OrbitReport orbit_dim(const SymTensor& a, const SubspaceBasis& basis, const GroupSpec& group,
                      double tol = 1e-8);
OrbitReport orbit_dim(const SymTensor& a, const TensorSpaceSpec& space, const GroupSpec& group,
                      double tol = 1e-8);

struct QuotientDimEstimate {
  TensorSpaceSpec space;
  GroupSpec group;
  int num_samples = 0;
  int max_orbit_dim = 0;
  std::int64_t estimate = 0;  // dim(space) - max_orbit_dim
  std::vector<int> per_sample_orbit_dims;
  double tol = 0.0;
  std::uint64_t seed = 0;
};

QuotientDimEstimate quotient_dim_estimate(const TensorSpaceSpec& space, const GroupSpec& group,
                                          int num_samples, Rng& rng, double tol = 1e-8);

/// dim(space) - dim(group). Rejects spaces that violate the n > d
/// hypothesis.
std::int64_t lower_bound(const TensorSpaceSpec& space, const GroupSpec& group);

struct JacobianReport {
  Eigen::VectorXd sample_coords;
  Eigen::MatrixXd jacobian;  // r x dim(V)
  Eigen::VectorXd singular_values;
  int rank = 0;
  double tol = 0.0;
};

JacobianReport jacobian_rank(const InvariantFamily& f, const SymTensor& a,
                             const SubspaceBasis& basis, double tol = 1e-8, double h = 0.0);

struct GenericRankReport {
  int rank = 0;                // max over samples
  double fraction_attaining = 0.0;
  int num_samples = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::vector<JacobianReport> reports;
};

/// Generic Jacobian rank: max over Gaussian samples, with the fraction of
/// samples attaining the max reported.
GenericRankReport generic_rank(const InvariantFamily& f, int num_samples, Rng& rng,
                               double tol = 1e-8);

enum class Verdict { BOUND_ONLY, FUNCTION_BASIS_CANDIDATE_GATED, IRREDUCIBLE_BY_COUNT, GATE_FAILED };

std::string to_string(Verdict v);

struct CertifyConfig {
  std::uint64_t seed = kDefaultSeed;
  int rank_samples = 100;
  double rank_tol = 1e-8;
  double gate_fraction = 0.95;  // required attainment fraction for the gate
  int inv_inputs = 5;
  int inv_samples = 1000;  // Haar samples per input
  double inv_tol = 1e-9;
  int quotient_samples = 100;
};

struct GateAttempt {
  std::string family_name;
  std::vector<std::string> member_names;
  std::vector<int> degrees;
  int generic_rank = 0;
  double fraction = 0.0;
  bool passed = false;
};

/// Machine-checkable record of the bound computation and the gate outcome.
/// IRREDUCIBLE_BY_COUNT requires r == lower_bound, generic rank == r, and a
/// passed invariance check. Reruns with the same config reproduce the
/// certificate bit-for-bit.
struct BoundCertificate {
  TensorSpaceSpec space;
  GroupSpec group;
  std::int64_t n = 0;            // dim(space)
  std::int64_t d = 0;            // dim(group)
  std::int64_t lower_bound = 0;  // n - d
  std::string family;            // name of the certified member set
  int r = 0;
  std::vector<std::string> member_names;
  std::vector<int> degrees;
  int generic_rank = 0;
  double rank_fraction = 0.0;
  int quotient_estimate = 0;
  int max_orbit_dim = 0;
  double invariance_max_deviation = 0.0;
  bool invariance_passed = false;
  Verdict verdict = Verdict::BOUND_ONLY;
  CertifyConfig config;
  std::vector<GateAttempt> attempts;
  std::string note;
};

/// Runs the full pipeline on an ordered candidate list: the first candidate
/// whose generic rank equals its member count (at the required fraction) is
/// certified; the others are recorded as failed attempts.
BoundCertificate certify(const std::vector<InvariantFamily>& candidates, const CertifyConfig& cfg);
BoundCertificate certify(const InvariantFamily& f, const CertifyConfig& cfg);

nlohmann::json to_json(const BoundCertificate& cert);
nlohmann::json to_json(const QuotientDimEstimate& est);
nlohmann::json to_json(const GenericRankReport& rep);

}  // namespace tensorinv
