#include "tensorinv/rank.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tensorinv/io.hpp"

namespace tensorinv {

int numerical_rank(const Eigen::VectorXd& singular_values, double tol) {
  if (singular_values.size() == 0) return 0;
  const double smax = singular_values.maxCoeff();
  if (smax == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < singular_values.size(); ++i)
    if (singular_values[i] > tol * smax) ++rank;
  return rank;
}

OrbitReport orbit_dim(const SymTensor& a, const SubspaceBasis& basis, const GroupSpec& group,
                      double tol) {
  group.validate();
  if (group.dim != a.dim())
    throw std::invalid_argument("orbit_dim: group and tensor dimensions differ");
  const std::vector<SkewGenerator> gens = so_generators(group.dim);
  OrbitReport rep;
  rep.tol = tol;
  rep.input_coords = coords(a, basis);
  rep.tangent.resize(basis.size(), static_cast<int>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k)
    rep.tangent.col(static_cast<int>(k)) = coords(infinitesimal_act(gens[k], a), basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.tangent);
  rep.singular_values = svd.singularValues();
  rep.orbit_dim = numerical_rank(rep.singular_values, tol);
  return rep;
}

OrbitReport orbit_dim(const SymTensor& a, const TensorSpaceSpec& space, const GroupSpec& group,
                      double tol) {
  return orbit_dim(a, orthonormal_basis(space), group, tol);
}

QuotientDimEstimate quotient_dim_estimate(const TensorSpaceSpec& space, const GroupSpec& group,
                                          int num_samples, Rng& rng, double tol) {
  if (num_samples < 1) throw std::invalid_argument("quotient_dim_estimate: num_samples must be >= 1");
  const SubspaceBasis basis = orthonormal_basis(space);
  QuotientDimEstimate est;
  est.space = space;
  est.group = group;
  est.num_samples = num_samples;
  est.tol = tol;
  est.seed = rng.seed();
  for (int s = 0; s < num_samples; ++s) {
    Rng sub = rng.split(s);
    const SymTensor a = random_tensor(basis, sub);
    const OrbitReport rep = orbit_dim(a, basis, group, tol);
    est.per_sample_orbit_dims.push_back(rep.orbit_dim);
    est.max_orbit_dim = std::max(est.max_orbit_dim, rep.orbit_dim);
  }
  est.estimate = dim_space(space) - est.max_orbit_dim;
  return est;
}

std::int64_t lower_bound(const TensorSpaceSpec& space, const GroupSpec& group) {
  const std::int64_t n = dim_space(space);
  const std::int64_t d = group_dim(group);
  if (n <= d)
    throw std::invalid_argument(
        "lower_bound: requires dim(space) > dim(group), got n = " + std::to_string(n) +
        " <= d = " + std::to_string(d));
  return n - d;
}

JacobianReport jacobian_rank(const InvariantFamily& f, const SymTensor& a,
                             const SubspaceBasis& basis, double tol, double h) {
  JacobianReport rep;
  rep.tol = tol;
  rep.sample_coords = coords(a, basis);
  rep.jacobian = jacobian_fd(f, a, basis, h);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.jacobian);
  rep.singular_values = svd.singularValues();
  rep.rank = numerical_rank(rep.singular_values, tol);
  return rep;
}

GenericRankReport generic_rank(const InvariantFamily& f, int num_samples, Rng& rng, double tol) {
  if (num_samples < 1) throw std::invalid_argument("generic_rank: num_samples must be >= 1");
  const SubspaceBasis basis = orthonormal_basis(f.space);
  GenericRankReport out;
  out.num_samples = num_samples;
  out.tol = tol;
  out.seed = rng.seed();
  out.reports.reserve(num_samples);
  for (int s = 0; s < num_samples; ++s) {
    Rng sub = rng.split(s);
    const SymTensor a = random_tensor(basis, sub);
    out.reports.push_back(jacobian_rank(f, a, basis, tol));
    out.rank = std::max(out.rank, out.reports.back().rank);
  }
  int attain = 0;
  for (const JacobianReport& r : out.reports)
    if (r.rank == out.rank) ++attain;
  out.fraction_attaining = static_cast<double>(attain) / num_samples;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::BOUND_ONLY: return "BOUND_ONLY";
    case Verdict::FUNCTION_BASIS_CANDIDATE_GATED: return "FUNCTION_BASIS_CANDIDATE_GATED";
    case Verdict::IRREDUCIBLE_BY_COUNT: return "IRREDUCIBLE_BY_COUNT";
    case Verdict::GATE_FAILED: return "GATE_FAILED";
  }
  throw std::logic_error("unreachable");
}

BoundCertificate certify(const std::vector<InvariantFamily>& candidates, const CertifyConfig& cfg) {
  if (candidates.empty()) throw std::invalid_argument("certify: no candidate families");
  for (const InvariantFamily& f : candidates) f.validate();
  const InvariantFamily& primary = candidates.front();

  BoundCertificate cert;
  cert.space = primary.space;
  cert.group = primary.group;
  cert.n = dim_space(primary.space);
  cert.d = group_dim(primary.group);
  cert.lower_bound = lower_bound(primary.space, primary.group);
  cert.config = cfg;

  Rng root(cfg.seed);

  // Rank gate over the candidate chain: a candidate passes when its generic
  // Jacobian rank equals its member count on at least gate_fraction of the
  // samples.
  const InvariantFamily* selected = nullptr;
  GenericRankReport selected_rank;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const InvariantFamily& f = candidates[c];
    Rng gate_rng = root.split(1000 + c);
    const GenericRankReport rep = generic_rank(f, cfg.rank_samples, gate_rng, cfg.rank_tol);
    GateAttempt attempt;
    attempt.family_name = f.name;
    attempt.member_names = f.member_names();
    attempt.degrees = f.degrees();
    attempt.generic_rank = rep.rank;
    attempt.fraction = rep.fraction_attaining;
    attempt.passed = rep.rank == f.size() && rep.fraction_attaining >= cfg.gate_fraction;
    cert.attempts.push_back(attempt);
    if (attempt.passed && !selected) {
      selected = &f;
      selected_rank = rep;
    }
  }

  const InvariantFamily& chosen = selected ? *selected : primary;
  if (!selected) {
    Rng gate_rng = root.split(1000);
    selected_rank = generic_rank(primary, cfg.rank_samples, gate_rng, cfg.rank_tol);
  }

  cert.family = chosen.name;
  cert.r = chosen.size();
  cert.member_names = chosen.member_names();
  cert.degrees = chosen.degrees();
  cert.generic_rank = selected_rank.rank;
  cert.rank_fraction = selected_rank.fraction_attaining;

  // Invariance over Haar samples on several random inputs.
  const SubspaceBasis basis = orthonormal_basis(chosen.space);
  cert.invariance_passed = true;
  for (int i = 0; i < cfg.inv_inputs; ++i) {
    Rng in_rng = root.split(2000 + i);
    const SymTensor a = random_tensor(basis, in_rng);
    Rng haar_rng = root.split(3000 + i);
    const InvarianceReport rep = check_invariance(chosen, a, cfg.inv_samples, cfg.inv_tol, haar_rng);
    cert.invariance_max_deviation = std::max(cert.invariance_max_deviation, rep.max_deviation);
    cert.invariance_passed = cert.invariance_passed && rep.passed;
  }

  Rng quot_rng = root.split(4000);
  const QuotientDimEstimate est =
      quotient_dim_estimate(chosen.space, chosen.group, cfg.quotient_samples, quot_rng, cfg.rank_tol);
  cert.quotient_estimate = static_cast<int>(est.estimate);
  cert.max_orbit_dim = est.max_orbit_dim;

  if (!selected || !cert.invariance_passed || cert.generic_rank < cert.r) {
    cert.verdict = Verdict::GATE_FAILED;
    cert.note = !cert.invariance_passed
                    ? "invariance check failed"
                    : "no candidate member set attained full generic rank";
  } else if (cert.r == cert.lower_bound && cert.generic_rank == cert.r) {
    cert.verdict = Verdict::IRREDUCIBLE_BY_COUNT;
    cert.note = "member count equals the dimension lower bound and the family is "
                "functionally independent at generic points";
  } else if (cert.r > cert.lower_bound && cert.generic_rank == cert.quotient_estimate) {
    cert.verdict = Verdict::FUNCTION_BASIS_CANDIDATE_GATED;
    cert.note = "member count exceeds the lower bound; generic rank matches the "
                "quotient dimension estimate (separability can only be falsified by sampling)";
  } else {
    cert.verdict = Verdict::BOUND_ONLY;
    cert.note = cert.r < cert.lower_bound
                    ? "member count is below the lower bound: the family cannot be a function basis"
                    : "bound computed; gate evidence inconclusive for a stronger verdict";
  }
  if (selected && chosen.name != primary.name) {
    cert.note += "; certified member set '" + chosen.name + "' replaces the primary candidate '" +
                 primary.name + "' (degree profile changed)";
  }
  return cert;
}

BoundCertificate certify(const InvariantFamily& f, const CertifyConfig& cfg) {
  return certify(family_candidates(f), cfg);
}

nlohmann::json to_json(const QuotientDimEstimate& est) {
  return nlohmann::json{{"space", spec_to_json(est.space)},
                        {"group", spec_to_json(est.group)},
                        {"num_samples", est.num_samples},
                        {"max_orbit_dim", est.max_orbit_dim},
                        {"estimate", est.estimate},
                        {"per_sample_orbit_dims", est.per_sample_orbit_dims},
                        {"rank_tol", est.tol},
                        {"seed", est.seed}};
}

nlohmann::json to_json(const GenericRankReport& rep) {
  nlohmann::json sv = nlohmann::json::array();
  for (const JacobianReport& r : rep.reports) {
    nlohmann::json one;
    one["rank"] = r.rank;
    one["singular_values"] = std::vector<double>(r.singular_values.data(),
                                                 r.singular_values.data() + r.singular_values.size());
    sv.push_back(one);
  }
  return nlohmann::json{{"rank", rep.rank},
                        {"fraction_attaining", rep.fraction_attaining},
                        {"num_samples", rep.num_samples},
                        {"rank_tol", rep.tol},
                        {"seed", rep.seed},
                        {"samples", sv}};
}

nlohmann::json to_json(const BoundCertificate& cert) {
  nlohmann::json attempts = nlohmann::json::array();
  for (const GateAttempt& a : cert.attempts) {
    attempts.push_back(nlohmann::json{{"family", a.family_name},
                                      {"members", a.member_names},
                                      {"degrees", a.degrees},
                                      {"generic_rank", a.generic_rank},
                                      {"fraction_attaining", a.fraction},
                                      {"passed", a.passed}});
  }
  return nlohmann::json{
      {"tool", std::string(kToolName)},
      {"version", std::string(kToolVersion)},
      {"space", spec_to_json(cert.space)},
      {"group", spec_to_json(cert.group)},
      {"n", cert.n},
      {"d", cert.d},
      {"lower_bound", cert.lower_bound},
      {"family", cert.family},
      {"r", cert.r},
      {"members", cert.member_names},
      {"degrees", cert.degrees},
      {"generic_rank", cert.generic_rank},
      {"rank_fraction", cert.rank_fraction},
      {"quotient_estimate", cert.quotient_estimate},
      {"max_orbit_dim", cert.max_orbit_dim},
      {"invariance_max_deviation", cert.invariance_max_deviation},
      {"invariance_passed", cert.invariance_passed},
      {"verdict", to_string(cert.verdict)},
      {"note", cert.note},
      {"config",
       nlohmann::json{{"seed", cert.config.seed},
                      {"rank_samples", cert.config.rank_samples},
                      {"rank_tol", cert.config.rank_tol},
                      {"gate_fraction", cert.config.gate_fraction},
                      {"inv_inputs", cert.config.inv_inputs},
                      {"inv_samples", cert.config.inv_samples},
                      {"inv_tol", cert.config.inv_tol},
                      {"quotient_samples", cert.config.quotient_samples}}},
      {"attempts", attempts}};
}

}  // namespace tensorinv
