#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>

#include "tensorinv/spaces.hpp"
#include "tensorinv/sym_tensor.hpp"
#include "test_support.hpp"

using namespace tensorinv;
using testsupport::random_sym;

TEST_CASE("dim_space closed forms") {
  CHECK(dim_space({SpaceKind::S, 3, 3}) == 10);
  CHECK(dim_space({SpaceKind::St, 3, 3}) == 7);
  CHECK(dim_space({SpaceKind::St, 2, 3}) == 5);
  CHECK(dim_space({SpaceKind::T, 3, 3}) == 27);
  for (int n = 1; n <= 6; ++n) CHECK(dim_space({SpaceKind::S, 1, n}) == n);
}

TEST_CASE("dim_space St identity over the (m, n) grid") {
  for (int m = 2; m <= 6; ++m)
    for (int n = 2; n <= 5; ++n) {
      const std::int64_t st = dim_space({SpaceKind::St, m, n});
      const std::int64_t s_m = dim_space({SpaceKind::S, m, n});
      const std::int64_t s_m2 = m - 2 >= 1 ? dim_space({SpaceKind::S, m - 2, n}) : 1;
      CHECK(st == s_m - s_m2);
    }
}

TEST_CASE("dim_space rejects invalid specs") {
  CHECK_THROWS_AS(dim_space({SpaceKind::St, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(dim_space({SpaceKind::S, 0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(dim_space({SpaceKind::S, 2, 0}), std::invalid_argument);
}

TEST_CASE("symmetrize basic cases") {
  // (a + a^T) / 2 on a 2x2 strictly upper matrix
  const std::vector<double> m2 = {0, 1, 0, 0};
  const SymTensor s = symmetrize(2, 2, m2);
  const int idx[2] = {0, 1};
  CHECK(s.value(idx) == doctest::Approx(0.5));

  // already-symmetric input is a fixed point
  Rng rng(1);
  const SymTensor a = random_sym(3, 3, rng);
  const SymTensor again = symmetrize(3, 3, a.to_dense());
  for (int k = 0; k < a.num_classes(); ++k)
    CHECK(again.class_value(k) == doctest::Approx(a.class_value(k)).epsilon(1e-15));

  CHECK_THROWS_AS(symmetrize(2, 2, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("symmetrize equals the brute-force permutation average") {
  Rng rng(2);
  const std::vector<double> dense = testsupport::random_dense(3, 3, rng);
  const SymTensor s = symmetrize(3, 3, dense);
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int t[3] = {i, j, k};
        double avg = 0.0;
        for (const auto& p : perms) avg += dense[t[p[0]] * 9 + t[p[1]] * 3 + t[p[2]]];
        avg /= 6.0;
        CHECK(s.value(t) == doctest::Approx(avg).epsilon(1e-14));
      }
}

TEST_CASE("trace_vector") {
  SymTensor eye(2, 3);
  for (int i = 0; i < 3; ++i) {
    const int idx[2] = {i, i};
    eye.set(idx, 1.0);
  }
  CHECK(trace_vector(eye).class_value(0) == doctest::Approx(3.0));

  // any traced pair agrees with the brute force on a symmetric tensor
  Rng rng(3);
  const SymTensor a = random_sym(3, 3, rng);
  const std::vector<double> d = a.to_dense();
  const SymTensor tv = trace_vector(a);
  for (int k = 0; k < 3; ++k) {
    double t12 = 0.0, t23 = 0.0;
    for (int i = 0; i < 3; ++i) {
      t12 += d[i * 9 + i * 3 + k];
      t23 += d[k * 9 + i * 3 + i];
    }
    const int idx[1] = {k};
    CHECK(tv.value(idx) == doctest::Approx(t12).epsilon(1e-14));
    CHECK(t12 == doctest::Approx(t23).epsilon(1e-14));
  }

  CHECK_THROWS_AS(trace_vector(SymTensor(1, 3)), std::invalid_argument);
}

TEST_CASE("is_traceless") {
  CHECK(is_traceless(SymTensor(2, 3), 0.0));
  SymTensor eye(2, 3);
  for (int i = 0; i < 3; ++i) {
    const int idx[2] = {i, i};
    eye.set(idx, 1.0);
  }
  CHECK_FALSE(is_traceless(eye, 1e-10));

  Rng rng(4);
  CHECK(is_traceless(traceless_project(random_sym(3, 3, rng)), 1e-10));
}

TEST_CASE("traceless_project closed forms") {
  SymTensor eye(2, 3);
  for (int i = 0; i < 3; ++i) {
    const int idx[2] = {i, i};
    eye.set(idx, 1.0);
  }
  CHECK(max_abs(traceless_project(eye)) == doctest::Approx(0.0));

  Rng rng(5);
  const SymTensor a = random_sym(3, 3, rng);
  const SymTensor p = traceless_project(a);
  CHECK(is_traceless(p, 1e-12));
  // fixed point on the subspace
  const SymTensor pp = traceless_project(p);
  CHECK(max_abs(pp - p) <= 1e-12);
  // the residual is orthogonal to every traceless symmetric tensor
  for (int rep = 0; rep < 10; ++rep) {
    const SymTensor s = traceless_project(random_sym(3, 3, rng));
    CHECK(std::abs(frobenius_inner(a - p, s)) <= 1e-12 * frobenius_norm(a - p) * frobenius_norm(s) + 1e-13);
  }

  CHECK_THROWS_AS(traceless_project(SymTensor(4, 3)), std::invalid_argument);
}

TEST_CASE("traceless_project idempotence and membership, 1000 random inputs") {
  Rng rng(6);
  for (int rep = 0; rep < 1000; ++rep) {
    const int order = rep % 2 == 0 ? 3 : 2;
    const SymTensor a = random_sym(order, 3, rng);
    const SymTensor p = traceless_project(a);
    CHECK(is_traceless(p, 1e-12));
    CHECK(max_abs(traceless_project(p) - p) <= 1e-12);
  }
}

TEST_CASE("orthonormal_basis sizes and Gram identity") {
  CHECK(orthonormal_basis({SpaceKind::St, 3, 3}).size() == 7);
  CHECK(orthonormal_basis({SpaceKind::S, 2, 3}).size() == 6);

  for (SpaceKind kind : {SpaceKind::S, SpaceKind::St}) {
    for (int m = 2; m <= 3; ++m) {
      for (int n = 2; n <= 4; ++n) {
        const TensorSpaceSpec spec{kind, m, n};
        const SubspaceBasis b = orthonormal_basis(spec);
        CHECK(b.size() == dim_space(spec));
        for (int i = 0; i < b.size(); ++i) {
          for (int j = 0; j <= i; ++j) {
            const double g = frobenius_inner(b.elements[i], b.elements[j]);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-12);
          }
          if (kind == SpaceKind::St) CHECK(is_traceless(b.elements[i], 1e-12));
        }
      }
    }
  }
  // m = 3 for S as well, from the invariant's m in {2,3} grid
  for (int n = 2; n <= 4; ++n)
    CHECK(orthonormal_basis({SpaceKind::S, 3, n}).size() == dim_space({SpaceKind::S, 3, n}));

  CHECK_THROWS_AS(orthonormal_basis({SpaceKind::T, 2, 3}), std::invalid_argument);
}

TEST_CASE("coords and from_coords") {
  const SubspaceBasis b = orthonormal_basis({SpaceKind::St, 3, 3});

  // from_coords(e_i) is the i-th basis tensor
  for (int i = 0; i < b.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(b.size());
    e[i] = 1.0;
    CHECK(max_abs(from_coords(e, b) - b.elements[i]) <= 1e-15);
  }

  CHECK(coords(SymTensor(3, 3), b).norm() == doctest::Approx(0.0));

  Rng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    Eigen::VectorXd x(b.size());
    for (int i = 0; i < x.size(); ++i) x[i] = rng.gaussian();
    const SymTensor a = from_coords(x, b);
    const Eigen::VectorXd back = coords(a, b);
    CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(max_abs(from_coords(back, b) - a) <= 1e-10);
  }

  // a tensor with a trace is outside St(3,3)'s span
  SymTensor eye(2, 3);
  for (int i = 0; i < 3; ++i) {
    const int idx[2] = {i, i};
    eye.set(idx, 1.0);
  }
  const SubspaceBasis bst2 = orthonormal_basis({SpaceKind::St, 2, 3});
  CHECK_THROWS_AS(coords(eye, bst2), std::invalid_argument);
}

TEST_CASE("frobenius_inner") {
  const SubspaceBasis b = orthonormal_basis({SpaceKind::St, 3, 3});
  CHECK(frobenius_inner(b.elements[0], b.elements[0]) == doctest::Approx(1.0));

  SymTensor eye(2, 3);
  for (int i = 0; i < 3; ++i) {
    const int idx[2] = {i, i};
    eye.set(idx, 1.0);
  }
  CHECK(frobenius_inner(eye, eye) == doctest::Approx(3.0));

  Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const SymTensor x = random_sym(3, 3, rng), y = random_sym(3, 3, rng);
    CHECK(std::abs(frobenius_inner(x, y) - testsupport::naive_frobenius(x, y)) <= 1e-12 * (1.0 + std::abs(frobenius_inner(x, y))));
  }

  CHECK_THROWS_AS(frobenius_inner(SymTensor(2, 3), SymTensor(3, 3)), std::invalid_argument);
}

TEST_CASE("symmetric value access is permutation independent") {
  Rng rng(9);
  const SymTensor a = random_sym(3, 3, rng);
  const int base[3] = {0, 2, 1};
  const int perm[3] = {1, 2, 0};
  const int perm2[3] = {2, 1, 0};
  CHECK(a.value(base) == a.value(perm));
  CHECK(a.value(base) == a.value(perm2));
  // stored class count matches the dimension formula
  CHECK(a.num_classes() == dim_space({SpaceKind::S, 3, 3}));
}
