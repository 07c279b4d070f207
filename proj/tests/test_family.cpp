#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tensorinv/family.hpp"
#include "test_support.hpp"

using namespace tensorinv;

namespace {

InvariantFamily broken_family() {
  // "A_111" is a perfectly well-formed scalar of degree 1 in A, but it is a
  // coordinate, not an invariant.
  InvariantFamily f;
  f.name = "BROKEN";
  f.space = {SpaceKind::St, 3, 3};
  f.group = {GroupKind::O, 3};
  f.input_symbol = "A";
  f.members.push_back({"J2", 2, parse_expr("A_ijk A_ijk")});
  f.members.push_back({"X", 1, parse_expr("A_111")});
  f.validate();
  return f;
}

}  // namespace

TEST_CASE("builtin families") {
  const InvariantFamily st = builtin_family("ST33_DEFAULT");
  CHECK(st.size() == 4);
  CHECK(st.degrees() == std::vector<int>{2, 4, 6, 8});
  CHECK(st.input_symbol == "A");
  CHECK(st.space.kind == SpaceKind::St);

  const InvariantFamily s23 = builtin_family("S23_CLASSICAL");
  CHECK(s23.size() == 3);
  CHECK(s23.degrees() == std::vector<int>{1, 2, 3});
  CHECK(s23.input_symbol == "T");

  CHECK_THROWS_AS(builtin_family("NOPE"), std::invalid_argument);

  const auto chain = family_candidates(st);
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].degrees() == std::vector<int>{2, 4, 6, 8});
  CHECK(chain[1].degrees() == std::vector<int>{2, 4, 6, 8});
  CHECK(chain[2].degrees() == std::vector<int>{2, 4, 6, 10});
  // non-builtin families certify as-is
  CHECK(family_candidates(s23).size() == 1);
}

TEST_CASE("eval_family basics") {
  const InvariantFamily f = builtin_family("ST33_DEFAULT");
  const SubspaceBasis basis = orthonormal_basis(f.space);

  CHECK(eval_family(f, SymTensor(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  // J2 of a unit basis element is its squared norm, 1
  CHECK(eval_family(f, basis.elements[3])[0] == doctest::Approx(1.0).epsilon(1e-12));

  // membership is enforced: a tensor with a trace is rejected
  Rng rng(31);
  const SymTensor off = testsupport::random_sym(3, 3, rng);
  CHECK_THROWS_AS(eval_family(f, off), std::invalid_argument);
  CHECK_NOTHROW(eval_family(f, traceless_project(off)));
}

TEST_CASE("invariance of the builtin families, 1000 Haar samples on 20 inputs") {
  for (const char* id : {"ST33_DEFAULT", "S23_CLASSICAL"}) {
    const InvariantFamily f = builtin_family(id);
    const SubspaceBasis basis = orthonormal_basis(f.space);
    Rng rng(32);
    double worst = 0.0;
    for (int input = 0; input < 20; ++input) {
      Rng sub = rng.split(input);
      const SymTensor a = random_tensor(basis, sub);
      const InvarianceReport rep = check_invariance(f, a, 1000, 1e-9, sub);
      worst = std::max(worst, rep.max_deviation);
      CHECK(rep.passed);
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("check_invariance negative control and zero input") {
  Rng rng(33);
  const SubspaceBasis basis = orthonormal_basis({SpaceKind::St, 3, 3});
  const SymTensor a = random_tensor(basis, rng);

  const InvarianceReport bad = check_invariance(broken_family(), a, 200, 1e-9, rng);
  CHECK_FALSE(bad.passed);
  CHECK(bad.max_deviation > 0.1);

  const InvarianceReport zero =
      check_invariance(builtin_family("ST33_DEFAULT"), SymTensor(3, 3), 10, 1e-9, rng);
  CHECK(zero.passed);
  CHECK(zero.max_deviation == 0.0);
}

TEST_CASE("scale_behavior homogeneity") {
  const InvariantFamily f = builtin_family("ST33_DEFAULT");
  const SubspaceBasis basis = orthonormal_basis(f.space);
  Rng rng(34);

  for (int rep = 0; rep < 100; ++rep) {
    Rng sub = rng.split(rep);
    const SymTensor a = random_tensor(basis, sub);
    const Eigen::VectorXd base = eval_family(f, a);
    for (double lambda : {-2.0, -1.0, 0.5, 3.0}) {
      const Eigen::VectorXd scaled = scale_behavior(f, a, lambda);
      for (int i = 0; i < f.size(); ++i) {
        const double want = std::pow(lambda, f.members[i].declared_degree) * base[i];
        CHECK(std::abs(scaled[i] - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      }
    }
  }

  // even degrees: lambda = -1 leaves every member unchanged
  const SymTensor a = random_tensor(basis, rng);
  const Eigen::VectorXd flip = scale_behavior(f, a, -1.0);
  const Eigen::VectorXd base = eval_family(f, a);
  CHECK((flip - base).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, base.cwiseAbs().maxCoeff()));

  CHECK_THROWS_AS(scale_behavior(f, a, 0.0), std::invalid_argument);
}

TEST_CASE("jacobian_fd against the analytic J2 gradient") {
  const InvariantFamily f = builtin_family("ST33_DEFAULT");
  const SubspaceBasis basis = orthonormal_basis(f.space);
  Rng rng(35);
  for (int rep = 0; rep < 100; ++rep) {
    Rng sub = rng.split(rep);
    const SymTensor a = random_tensor(basis, sub);
    const Eigen::MatrixXd jac = jacobian_fd(f, a, basis);
    const Eigen::VectorXd grad_j2 = 2.0 * coords(a, basis);
    CHECK((jac.row(0).transpose() - grad_j2).cwiseAbs().maxCoeff() <= 1e-6);
  }
  // all gradients vanish at the origin
  const Eigen::MatrixXd at_zero = jacobian_fd(f, SymTensor(3, 3), basis);
  CHECK(at_zero.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gradients annihilate orbit tangents") {
  const InvariantFamily f = builtin_family("ST33_DEFAULT");
  const SubspaceBasis basis = orthonormal_basis(f.space);
  const auto gens = so_generators(3);
  Rng rng(36);
  for (int rep = 0; rep < 100; ++rep) {
    Rng sub = rng.split(rep);
    const SymTensor a = random_unit_tensor(basis, sub);
    const Eigen::MatrixXd jac = jacobian_fd(f, a, basis);
    Eigen::MatrixXd tangent(basis.size(), static_cast<int>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k)
      tangent.col(static_cast<int>(k)) = coords(infinitesimal_act(gens[k], a), basis);
    CHECK((jac * tangent).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("family file round-trip") {
  const InvariantFamily f = builtin_family("ST33_DEFAULT");
  const auto path = std::filesystem::temp_directory_path() / "st33_roundtrip.fam";
  save_family(f, path);
  const InvariantFamily back = load_family(path);
  CHECK(family_to_text(back) == family_to_text(f));
  CHECK(back.degrees() == f.degrees());
  CHECK(back.input_symbol == "A");
  std::filesystem::remove(path);
}

TEST_CASE("family parser diagnostics") {
  const char* good = R"(# trace powers
space S 2 3
group O 3
inv I1 1 = T_ii
inv I2 2 = T_ij T_ij   # comment after the expression
inv I3 3 = T_ij T_jk T_ki
)";
  const InvariantFamily f = parse_family(good, "trace_powers");
  CHECK(f.size() == 3);
  CHECK(f.input_symbol == "T");

  // declared degree disagrees with the expression
  try {
    parse_family("space S 2 3\ngroup O 3\ninv I2 4 = T_ij T_ij\n");
    FAIL("expected a degree mismatch error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("degree") != std::string::npos);
  }
  // triple label inside a member
  try {
    parse_family("space S 2 3\ngroup O 3\ninv X 2 = T_iji T_ikl\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  // missing headers and empty families
  CHECK_THROWS_AS(parse_family("group O 3\ninv I1 1 = T_ii\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("space S 2 3\ninv I1 1 = T_ii\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("space S 2 3\ngroup O 3\n"), std::invalid_argument);
  // two distinct input symbols
  CHECK_THROWS_AS(parse_family("space S 2 3\ngroup O 3\ninv I1 1 = T_ii\ninv I2 1 = U_ii\n"),
                  std::invalid_argument);
  // unknown directive names its line
  try {
    parse_family("space S 2 3\nbogus line here\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("eval with cached lets matches uncached bit for bit") {
  const InvariantFamily f = family_candidates(builtin_family("ST33_DEFAULT"))[2];
  const SubspaceBasis basis = orthonormal_basis(f.space);
  Rng rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    Rng sub = rng.split(rep);
    const SymTensor a = random_tensor(basis, sub);
    const Eigen::VectorXd cached = eval_family(f, a, true, true);
    const Eigen::VectorXd fresh = eval_family(f, a, true, false);
    for (int i = 0; i < f.size(); ++i) CHECK(cached[i] == fresh[i]);
  }
}
