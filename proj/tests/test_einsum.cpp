#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tensorinv/einsum.hpp"
#include "tensorinv/sym_tensor.hpp"
#include "test_support.hpp"

using namespace tensorinv;
using testsupport::naive_einsum;
using testsupport::random_sym;

TEST_CASE("parse shapes and label classification") {
  const ContractionExpr scalar = parse_expr("A_ijk A_ijk");
  CHECK(scalar.factors.size() == 2);
  CHECK(scalar.free_labels().empty());
  CHECK(scalar.bound_labels() == "ijk");

  const ContractionExpr matrix = parse_expr("A_ipq A_jpq");
  CHECK(matrix.free_labels() == "ij");
  CHECK(matrix.bound_labels() == "pq");
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_expr(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("   "), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("A_iji A_ikl"), std::invalid_argument);  // i three times
  CHECK_THROWS_AS(parse_expr("Aijk"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("A_"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("_ijk"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("A_iJk"), std::invalid_argument);  // uppercase label
  CHECK_THROWS_AS(parse_expr("d_ijk"), std::invalid_argument);  // builtin arity
  CHECK_THROWS_AS(parse_expr("e_ij"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("A_abcd B_efgh C_ijkl D_mabc"), std::invalid_argument);  // 13 letters
}

TEST_CASE("within-factor repeats are legal self-contractions") {
  const ContractionExpr e = parse_expr("A_iij A_jkk");
  CHECK(e.free_labels().empty());
  Rng rng(21);
  EvalContext ctx;
  ctx.dim = 3;
  ctx.tensors["A"] = random_sym(3, 3, rng);
  const double got = evaluate(e, ctx).scalar;
  const auto want = naive_einsum(e, ctx);
  CHECK(got == doctest::Approx(want.data[0]).epsilon(1e-13));
}

TEST_CASE("builtin evaluations") {
  EvalContext ctx;
  ctx.dim = 3;
  CHECK(evaluate(parse_expr("d_ii"), ctx).scalar == doctest::Approx(3.0));
  CHECK(evaluate(parse_expr("e_ijk e_ijk"), ctx).scalar == doctest::Approx(6.0));
  CHECK(evaluate(parse_expr("d_12"), ctx).scalar == doctest::Approx(0.0));
  CHECK(evaluate(parse_expr("d_11"), ctx).scalar == doctest::Approx(1.0));

  EvalContext ctx2;
  ctx2.dim = 2;
  CHECK_THROWS_AS(evaluate(parse_expr("e_ijk e_ijk"), ctx2), std::invalid_argument);
}

TEST_CASE("pinned digit labels read single entries") {
  Rng rng(22);
  EvalContext ctx;
  ctx.dim = 3;
  const SymTensor a = random_sym(3, 3, rng);
  ctx.tensors["A"] = a;
  const int i111[3] = {0, 0, 0};
  CHECK(evaluate(parse_expr("A_111"), ctx).scalar == doctest::Approx(a.value(i111)));
  const int i123[3] = {0, 1, 2};
  CHECK(evaluate(parse_expr("A_123"), ctx).scalar == doctest::Approx(a.value(i123)));
}

TEST_CASE("full contraction equals the Frobenius inner product") {
  Rng rng(23);
  EvalContext ctx;
  ctx.dim = 3;
  const SymTensor a = random_sym(3, 3, rng);
  ctx.tensors["A"] = a;
  const double got = evaluate(parse_expr("A_ijk A_ijk"), ctx).scalar;
  CHECK(std::abs(got - frobenius_inner(a, a)) <= 1e-12 * std::max(1.0, std::abs(got)));
}

TEST_CASE("evaluate matches the naive loop oracle on 200 random expressions") {
  Rng rng(24);
  int checked = 0;
  for (int rep = 0; checked < 200; ++rep) {
    EvalContext ctx;
    ContractionExpr expr;
    try {
      expr = testsupport::random_expression(rng, ctx);
      expr = parse_expr(to_string(expr));  // exercise the parser too
    } catch (const std::invalid_argument&) {
      continue;  // generator occasionally exceeds the label budget
    }
    const DenseResult got = evaluate_dense(expr, ctx);
    const auto want = naive_einsum(expr, ctx);
    REQUIRE(got.labels == want.labels);
    REQUIRE(got.data.size() == want.data.size());
    for (std::size_t i = 0; i < got.data.size(); ++i)
      CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-12 * std::max(1.0, std::abs(want.data[i])));
    ++checked;
  }
}

TEST_CASE("parse and print round-trip") {
  for (const char* text : {"A_ijk A_ijk", "B_ij B_jk B_ki", "d_ij w_i w_j", "e_ijk T3a_ijk",
                           "A_111", "A_iij A_jkk"}) {
    CHECK(to_string(parse_expr(text)) == text);
  }
}

TEST_CASE("lets bind in order and cache equals recompute bit for bit") {
  Rng rng(25);
  EvalContext ctx;
  ctx.dim = 3;
  ctx.tensors["A"] = random_sym(3, 3, rng);
  const std::vector<LetBinding> lets = {{"B", "ij", parse_expr("A_ipq A_jpq")},
                                        {"w", "i", parse_expr("A_ipq B_pq")}};
  const ContractionExpr expr = parse_expr("w_i B_ij B_jk w_k");

  const EvalContext bound = bind_lets(ctx, lets);
  const double cached = evaluate(expr, bound).scalar;
  const double fresh = evaluate(expr, ctx, lets).scalar;
  CHECK(cached == fresh);  // exact: mandated summation order
}

TEST_CASE("let validation") {
  EvalContext ctx;
  ctx.dim = 3;
  Rng rng(26);
  ctx.tensors["A"] = random_sym(3, 3, rng);
  // declared indices must match free labels
  CHECK_THROWS_AS(bind_lets(ctx, {{"B", "ik", parse_expr("A_ipq A_jpq")}}), std::invalid_argument);
  CHECK_THROWS_AS(bind_lets(ctx, {{"B", "ii", parse_expr("A_ipq A_jpq")}}), std::invalid_argument);
  // name collisions
  CHECK_THROWS_AS(bind_lets(ctx, {{"d", "ij", parse_expr("A_ipq A_jpq")}}), std::invalid_argument);
  CHECK_THROWS_AS(bind_lets(ctx, {{"A", "ij", parse_expr("A_ipq A_jpq")}}), std::invalid_argument);
  // unresolved symbol inside a let
  CHECK_THROWS_AS(bind_lets(ctx, {{"B", "ij", parse_expr("X_ipq A_jpq")}}), std::invalid_argument);
}

TEST_CASE("tensor arity and dimension checks at evaluation") {
  EvalContext ctx;
  ctx.dim = 3;
  Rng rng(27);
  ctx.tensors["A"] = random_sym(3, 3, rng);
  ctx.tensors["M"] = random_sym(2, 2, rng);
  CHECK_THROWS_AS(evaluate(parse_expr("A_ij A_ij"), ctx), std::invalid_argument);  // arity
  CHECK_THROWS_AS(evaluate(parse_expr("M_ij M_ij"), ctx), std::invalid_argument);  // dimension
  CHECK_THROWS_AS(evaluate(parse_expr("Z_ij Z_ij"), ctx), std::invalid_argument);  // unresolved
}

TEST_CASE("polynomial_degree") {
  const std::vector<LetBinding> lets = {{"B", "ij", parse_expr("A_ipq A_jpq")},
                                        {"E", "ij", parse_expr("A_ipq A_jrs A_kpr A_kqs")},
                                        {"w", "i", parse_expr("A_ipq B_pq")}};
  CHECK(polynomial_degree(parse_expr("A_ijk A_ijk"), {}, "A") == 2);
  CHECK(polynomial_degree(parse_expr("B_ij B_jk B_ki"), lets, "A") == 6);
  CHECK(polynomial_degree(parse_expr("E_ij E_ij"), lets, "A") == 8);
  CHECK(polynomial_degree(parse_expr("w_i B_ij B_jk w_k"), lets, "A") == 10);
  CHECK(polynomial_degree(parse_expr("d_ij d_ij"), {}, "A") == 0);
}
