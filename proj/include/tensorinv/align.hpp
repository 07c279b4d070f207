#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

#include "tensorinv/family.hpp"
#include "tensorinv/group.hpp"
#include "tensorinv/rng.hpp"
#include "tensorinv/sym_tensor.hpp"

namespace tensorinv {

struct AlignConfig {
  int num_starts = 32;     // per coset: identity, spectral alignments, then Haar fill
  int max_iters = 200;
  double step_tol = 1e-10;
  double fd_h = 1e-6;      // step for the directional central differences
  double armijo = 1e-4;
  std::uint64_t seed = kDefaultSeed;
};

struct AlignmentResult {
  Eigen::MatrixXd best_g;  // group element achieving `distance` (det -1 possible for O)
  double distance = 0.0;   // Frobenius norm of g.A - B at the optimum
  int starts_used = 0;
  int refine_iterations = 0;  // summed over all starts
  bool converged = false;     // best start terminated before max_iters
  std::vector<double> objective_trace;  // accepted values of the best start, non-increasing
};

/// Multi-start minimization of ||act(R, a) - b||^2 over SO(n); for O(n) the
/// second coset is handled exactly through the reflector diag(-1,1,...,1)
/// applied to `a`. Starts are the identity, the eigenframe alignments of the
/// order-2 covariant contraction(a,a), and Haar samples.
AlignmentResult orbit_distance(const SymTensor& a, const SymTensor& b, const GroupSpec& group,
                               const AlignConfig& config = {});

/// True iff orbit_distance <= eps; eps <= 0 selects 1e-6 * max(1, ||a||).
bool same_orbit(const SymTensor& a, const SymTensor& b, const GroupSpec& group, double eps = 0.0,
                const AlignConfig& config = {});

/// Relative gap max_i |p_i(a) - p_i(b)| / max(1, |p_i(a)|, |p_i(b)|).
double invariant_gap(const InvariantFamily& f, const SymTensor& a, const SymTensor& b);

struct PairRecord {
  SymTensor a, b;
  double gap = 0.0;
  double distance = 0.0;
  bool violation = false;  // gap <= eps_inv AND distance >= eps_orb
  std::string population;  // same_orbit | independent | near | injected
};

/// Classify one pair against the separability thresholds.
PairRecord probe_pair(const InvariantFamily& f, const SymTensor& a, const SymTensor& b,
                      double eps_inv, double eps_orb, const AlignConfig& config,
                      const std::string& population);

struct SeparabilityProbeReport {
  std::string family;
  int pairs_tested = 0;
  std::vector<PairRecord> violations;
  double max_gap_same_orbit = 0.0;  // population (i) is an invariance re-check
  bool invariance_ok = true;
  double eps_inv = 0.0;
  double eps_orb = 0.0;
  std::uint64_t seed = 0;
  std::string verdict;  // NO_VIOLATIONS | CANDIDATE_VIOLATIONS_FOUND | INVARIANCE_FAILURE
  std::string caveat;
};

/// Three populations of num_pairs each: same-orbit pairs (gap must stay at
/// invariance level), independent random pairs, and near pairs
/// (a, a + 1e-3 * random). A violation records a candidate counterexample to
/// the family separating orbits; the optimizer may have missed the global
/// minimum, which the caveat states. Extra pairs are classified like the
/// independent population.
SeparabilityProbeReport separability_probe(
    const InvariantFamily& f, int num_pairs, Rng& rng, double eps_inv = 1e-8,
    double eps_orb = 1e-2, const AlignConfig& config = {},
    const std::vector<std::pair<SymTensor, SymTensor>>& injected = {});

nlohmann::json to_json(const SeparabilityProbeReport& rep);
nlohmann::json to_json(const AlignmentResult& res);

}  // namespace tensorinv
