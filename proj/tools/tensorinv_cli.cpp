// Command-line surface over the toolkit: dimension tables, bound
// computation, certificates, invariant evaluation, sampling, and the orbit
// oracle. Every subcommand is deterministic given (argv, seed).
//
// Exit codes: 0 success; 1 a check failed (certificate verdict below
// IRREDUCIBLE_BY_COUNT, probe violations, invariance failure); 2 usage,
// parse, or precondition errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tensorinv/align.hpp"
#include "tensorinv/family.hpp"
#include "tensorinv/group.hpp"
#include "tensorinv/io.hpp"
#include "tensorinv/rank.hpp"
#include "tensorinv/rng.hpp"
#include "tensorinv/spaces.hpp"

namespace ti = tensorinv;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ti::InvariantFamily resolve_family(const std::string& spec) {
  if (ti::is_builtin_family_id(spec)) return ti::builtin_family(spec);
  return ti::load_family(spec);
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file '" + out_path + "'");
    out << j.dump(2) << '\n';
  }
}

void emit_tensor(const ti::SymTensor& t, const std::string& out_path) {
  if (out_path.empty())
    std::cout << ti::tensor_to_json(t).dump(2) << '\n';
  else
    ti::write_tensor_file(t, out_path);
}

nlohmann::json config_json(std::uint64_t seed, int samples, double rank_tol, double inv_tol,
                           double orbit_eps) {
  return nlohmann::json{{"seed", seed},
                        {"samples", samples},
                        {"rank_tol", rank_tol},
                        {"inv_tol", inv_tol},
                        {"orbit_eps", orbit_eps}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial invariants of tensor spaces under O(n)/SO(n): dimensions, bound "
               "certificates, and orbit analysis"};
  app.require_subcommand(1);

  std::string space_kind = "St", group_kind = "O", family_spec, tensor_path, tensor_path_b, out_path;
  int order = 3, dim = 3;
  std::uint64_t seed = ti::kDefaultSeed;
  int samples = 0;
  double rank_tol = 1e-8, inv_tol = 1e-9, orbit_eps = 1e-2;

  // dims
  auto* dims = app.add_subcommand("dims", "print the linear-space dimension");
  std::string dims_space;
  dims->add_option("--space", dims_space, "T, S, or St (all three when omitted)");
  dims->add_option("--order", order, "tensor order m")->required();
  dims->add_option("--dim", dim, "tensor dimension n")->required();

  // bound
  auto* bound = app.add_subcommand("bound", "print dim(V), dim(G), and the lower bound dim(V)-dim(G)");
  bound->add_option("--space", space_kind, "T, S, or St");
  bound->add_option("--order", order)->required();
  bound->add_option("--dim", dim)->required();
  bound->add_option("--group", group_kind, "O or SO");

  // certify
  auto* certify = app.add_subcommand("certify", "run the bound certificate pipeline on a family");
  certify->add_option("--family", family_spec, "builtin id or family file path")->required();
  certify->add_option("--seed", seed);
  certify->add_option("--samples", samples, "rank-gate sample count (default 100)");
  certify->add_option("--rank-tol", rank_tol);
  certify->add_option("--inv-tol", inv_tol);
  certify->add_option("--out", out_path, "write the certificate here instead of stdout");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a family's members on a tensor");
  eval->add_option("--family", family_spec)->required();
  eval->add_option("--tensor", tensor_path)->required();

  // act
  auto* act_cmd = app.add_subcommand("act", "apply a Haar-sampled group element to a tensor");
  act_cmd->add_option("--tensor", tensor_path)->required();
  act_cmd->add_option("--group", group_kind);
  act_cmd->add_option("--seed", seed);
  act_cmd->add_option("--out", out_path);

  // project
  auto* project = app.add_subcommand("project", "orthogonal projection onto the traceless subspace");
  project->add_option("--tensor", tensor_path)->required();
  project->add_option("--out", out_path);

  // random
  auto* random_cmd = app.add_subcommand("random", "sample a tensor with unit-Gaussian coordinates");
  random_cmd->add_option("--space", space_kind);
  random_cmd->add_option("--order", order)->required();
  random_cmd->add_option("--dim", dim)->required();
  random_cmd->add_option("--seed", seed);
  random_cmd->add_option("--out", out_path);

  // orbit-distance
  auto* odist = app.add_subcommand("orbit-distance", "minimized Frobenius distance between orbits");
  odist->add_option("a", tensor_path, "first tensor file")->required();
  odist->add_option("b", tensor_path_b, "second tensor file")->required();
  odist->add_option("--group", group_kind);
  odist->add_option("--seed", seed);
  odist->add_option("--samples", samples, "number of refinement starts (default 32)");
  odist->add_option("--out", out_path, "write the full alignment report here");

  // probe
  auto* probe = app.add_subcommand("probe", "separability probe on a gated family");
  probe->add_option("--family", family_spec)->required();
  probe->add_option("--samples", samples, "pairs per population (default 200)");
  probe->add_option("--seed", seed);
  probe->add_option("--inv-tol", inv_tol, "invariant-gap threshold eps_inv (default 1e-8)");
  probe->add_option("--orbit-eps", orbit_eps, "orbit-distance threshold eps_orb (default 1e-2)");
  probe->add_option("--out", out_path);

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "generic Jacobian rank of a family");
  rank_cmd->add_option("--family", family_spec)->required();
  rank_cmd->add_option("--samples", samples, "sample count (default 100)");
  rank_cmd->add_option("--seed", seed);
  rank_cmd->add_option("--rank-tol", rank_tol);
  rank_cmd->add_option("--out", out_path);

  // quotient-dim
  auto* qdim = app.add_subcommand("quotient-dim", "sampled estimate of the orbit-space dimension");
  qdim->add_option("--space", space_kind);
  qdim->add_option("--order", order)->required();
  qdim->add_option("--dim", dim)->required();
  qdim->add_option("--group", group_kind);
  qdim->add_option("--samples", samples, "sample count (default 100)");
  qdim->add_option("--seed", seed);
  qdim->add_option("--rank-tol", rank_tol);
  qdim->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dims->parsed()) {
      if (dims_space.empty()) {
        for (const std::string& k : {"T", "S", "St"}) {
          ti::TensorSpaceSpec s{ti::space_kind_from_string(k), order, dim};
          if (k == "St" && order < 2) continue;
          std::cout << k << ' ' << ti::dim_space(s) << '\n';
        }
      } else {
        ti::TensorSpaceSpec s{ti::space_kind_from_string(dims_space), order, dim};
        std::cout << ti::dim_space(s) << '\n';
      }
      return 0;
    }

    if (bound->parsed()) {
      ti::TensorSpaceSpec s{ti::space_kind_from_string(space_kind), order, dim};
      ti::GroupSpec g{ti::group_kind_from_string(group_kind), dim};
      const auto n = ti::dim_space(s);
      const auto d = ti::group_dim(g);
      std::cout << n << ' ' << d << ' ' << ti::lower_bound(s, g) << '\n';
      return 0;
    }

    if (certify->parsed()) {
      const ti::InvariantFamily fam = resolve_family(family_spec);
      ti::CertifyConfig cfg;
      cfg.seed = seed;
      cfg.rank_tol = rank_tol;
      cfg.inv_tol = inv_tol;
      if (samples > 0) cfg.rank_samples = samples;
      const ti::BoundCertificate cert = ti::certify(fam, cfg);
      emit(ti::to_json(cert), out_path);
      return cert.verdict == ti::Verdict::IRREDUCIBLE_BY_COUNT ? 0 : 1;
    }

    if (eval->parsed()) {
      const ti::InvariantFamily fam = resolve_family(family_spec);
      const ti::SymTensor t = ti::read_tensor_file(tensor_path);
      const Eigen::VectorXd v = ti::eval_family(fam, t);
      for (int i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << fmt(v[i]);
      std::cout << '\n';
      return 0;
    }

    if (act_cmd->parsed()) {
      const ti::SymTensor t = ti::read_tensor_file(tensor_path);
      ti::GroupSpec g{ti::group_kind_from_string(group_kind), t.dim()};
      ti::Rng rng(seed);
      emit_tensor(ti::act(ti::haar_sample(g, rng), t), out_path);
      return 0;
    }

    if (project->parsed()) {
      emit_tensor(ti::traceless_project(ti::read_tensor_file(tensor_path)), out_path);
      return 0;
    }

    if (random_cmd->parsed()) {
      ti::TensorSpaceSpec s{ti::space_kind_from_string(space_kind), order, dim};
      ti::Rng rng(seed);
      emit_tensor(ti::random_tensor(s, rng), out_path);
      return 0;
    }

    if (odist->parsed()) {
      const ti::SymTensor a = ti::read_tensor_file(tensor_path);
      const ti::SymTensor b = ti::read_tensor_file(tensor_path_b);
      ti::GroupSpec g{ti::group_kind_from_string(group_kind), a.dim()};
      ti::AlignConfig cfg;
      cfg.seed = seed;
      if (samples > 0) cfg.num_starts = samples;
      const ti::AlignmentResult res = ti::orbit_distance(a, b, g, cfg);
      std::cout << fmt(res.distance) << '\n';
      if (!out_path.empty()) {
        nlohmann::json j = ti::to_json(res);
        j["config"] = config_json(seed, cfg.num_starts, rank_tol, inv_tol, orbit_eps);
        emit(j, out_path);
      }
      return 0;
    }

    if (probe->parsed()) {
      const ti::InvariantFamily fam = resolve_family(family_spec);
      const int pairs = samples > 0 ? samples : 200;
      ti::Rng rng(seed);
      ti::AlignConfig acfg;
      acfg.seed = seed;
      const double eps_inv = probe->count("--inv-tol") ? inv_tol : 1e-8;
      const ti::SeparabilityProbeReport rep =
          ti::separability_probe(fam, pairs, rng, eps_inv, orbit_eps, acfg);
      nlohmann::json j = ti::to_json(rep);
      j["config"] = config_json(seed, pairs, rank_tol, eps_inv, orbit_eps);
      emit(j, out_path);
      return rep.verdict == "NO_VIOLATIONS" ? 0 : 1;
    }

    if (rank_cmd->parsed()) {
      const ti::InvariantFamily fam = resolve_family(family_spec);
      const int ns = samples > 0 ? samples : 100;
      ti::Rng rng(seed);
      const ti::GenericRankReport rep = ti::generic_rank(fam, ns, rng, rank_tol);
      std::cout << rep.rank << ' ' << fmt(rep.fraction_attaining) << '\n';
      if (!out_path.empty()) {
        nlohmann::json j = ti::to_json(rep);
        j["config"] = config_json(seed, ns, rank_tol, inv_tol, orbit_eps);
        emit(j, out_path);
      }
      return 0;
    }

    if (qdim->parsed()) {
      ti::TensorSpaceSpec s{ti::space_kind_from_string(space_kind), order, dim};
      ti::GroupSpec g{ti::group_kind_from_string(group_kind), dim};
      const int ns = samples > 0 ? samples : 100;
      ti::Rng rng(seed);
      const ti::QuotientDimEstimate est = ti::quotient_dim_estimate(s, g, ns, rng, rank_tol);
      std::cout << est.estimate << '\n';
      if (!out_path.empty()) {
        nlohmann::json j = ti::to_json(est);
        j["config"] = config_json(seed, ns, rank_tol, inv_tol, orbit_eps);
        emit(j, out_path);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
