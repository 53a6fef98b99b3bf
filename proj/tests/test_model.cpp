#include <doctest.h>

#include <cmath>

#include "modpcp/datagen.hpp"
#include "modpcp/errors.hpp"
#include "modpcp/model.hpp"
#include "support.hpp"

using namespace modpcp;

namespace {

void check_decomposition_invariants(const SubspaceDecomposition& dec, const OrthoBasis& u,
                                    const OrthoBasis& g) {
  CHECK(g.rank() == dec.r0 + dec.r_extra);
  CHECK(u.rank() == dec.r0 + dec.r_new);
  CHECK(dec.u0.rank() == dec.r0);
  CHECK(dec.g_extra.rank() == dec.r_extra);
  CHECK(dec.u_new.rank() == dec.r_new);
  auto cross = [](const OrthoBasis& a, const OrthoBasis& b) {
    if (a.rank() == 0 || b.rank() == 0) return 0.0;
    return (a.columns().transpose() * b.columns()).cwiseAbs().maxCoeff();
  };
  CHECK(cross(dec.u0, dec.g_extra) <= 1e-8);
  CHECK(cross(dec.u0, dec.u_new) <= 1e-8);
  CHECK(cross(dec.g_extra, dec.u_new) <= 1e-8);
  if (dec.r0 > 0) {
    CHECK(g.project_complement(dec.u0.columns()).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(u.project_complement(dec.u0.columns()).cwiseAbs().maxCoeff() <= 1e-8);
  }
  const OrthoBasis joined = OrthoBasis::concat(dec.u0, dec.u_new);
  CHECK(projector_distance(joined, u) <= 1e-8 * std::sqrt(static_cast<double>(u.rank())));
  CHECK(reconstruct_identity_check(dec, u, g) <= 1e-8);
}

}  // namespace

TEST_CASE("compute_l_new") {
  const Matrix x = testing::random_matrix(30, 4, 1);
  const Matrix l = x * testing::random_matrix(4, 20, 2);
  const OrthoBasis col = svd(l).u;

  const LNewFactors full = compute_l_new(l, col);
  CHECK(full.u_new.rank() == 0);

  const LNewFactors none = compute_l_new(l, OrthoBasis::empty(30));
  CHECK(projector_distance(none.u_new, col) < 1e-10);

  // L = [U0 U_new] C with G = [U0 G_extra]
  const OrthoBasis all = testing::random_basis(30, 6, 3);
  const Matrix u0 = all.columns().leftCols(3);
  const Matrix g_extra = all.columns().middleCols(3, 1);
  const Matrix u_new = all.columns().rightCols(2);
  Matrix u(30, 5);
  u << u0, u_new;
  const Matrix l2 = u * testing::random_matrix(5, 25, 4);
  Matrix gm(30, 4);
  gm << u0, g_extra;
  const OrthoBasis g(gm);
  const LNewFactors f = compute_l_new(l2, g);
  CHECK(projector_distance(f.u_new, OrthoBasis::trusted(u_new)) <= 1e-6);
  CHECK((g.columns().transpose() * f.u_new.columns()).cwiseAbs().maxCoeff() <= 1e-8);
  const Matrix rebuilt = f.u_new.columns() * f.sigma_new.asDiagonal() * f.v_new.columns().transpose();
  const Matrix target = g.project_complement(l2);
  CHECK((rebuilt - target).norm() <= 1e-8 * target.norm());
  CHECK_THROWS_AS(compute_l_new(l2, OrthoBasis::empty(29)), DimensionError);
}

TEST_CASE("decompose_subspace: G equals U") {
  const OrthoBasis u = testing::random_basis(40, 5, 5);
  const SubspaceDecomposition dec = decompose_subspace(u, u);
  CHECK(dec.r0 == 5);
  CHECK(dec.r_extra == 0);
  CHECK(dec.r_new == 0);
  CHECK(reconstruct_identity_check(dec, u, u) <= 1e-10);
  check_decomposition_invariants(dec, u, u);
}

TEST_CASE("decompose_subspace: orthogonal prior") {
  const OrthoBasis all = testing::random_basis(40, 7, 6);
  const OrthoBasis u = all.slice(0, 4);
  const OrthoBasis g = all.slice(4, 3);
  const SubspaceDecomposition dec = decompose_subspace(u, g);
  CHECK(dec.r0 == 0);
  CHECK(dec.r_extra == 3);
  CHECK(dec.r_new == 4);
  CHECK(reconstruct_identity_check(dec, u, g) <= 1e-10);
  check_decomposition_invariants(dec, u, g);
}

TEST_CASE("decompose_subspace: generator construction (18, 5, 2)") {
  StaticGenParams p;
  p.r0 = 18;
  p.r_extra = 5;
  p.r_new = 2;
  p.r = 20;
  p.seed = 77;
  const StaticInstance inst = gen_static_instance(p);
  const OrthoBasis u = svd(*inst.problem.truth_l).u;
  const SubspaceDecomposition dec = decompose_subspace(u, inst.problem.prior);
  CHECK(dec.r0 == 18);
  CHECK(dec.r_extra == 5);
  CHECK(dec.r_new == 2);
  check_decomposition_invariants(dec, u, inst.problem.prior);
}

TEST_CASE("decompose_subspace: random overlap") {
  // G = [U0 G_extra] and U = [U0 U_new] with G_extra, U_new random and orthogonal to each other
  const OrthoBasis all = testing::random_basis(50, 9, 8);
  const OrthoBasis u = OrthoBasis::concat(all.slice(0, 4), all.slice(4, 2));
  const OrthoBasis g = OrthoBasis::concat(all.slice(0, 4), all.slice(6, 3));
  const Matrix rot = testing::random_basis(6, 6, 9).columns();
  const OrthoBasis u_rot = OrthoBasis::trusted(u.columns() * rot);
  const SubspaceDecomposition dec = decompose_subspace(u_rot, g);
  CHECK(dec.r0 == 4);
  CHECK(dec.r_extra == 3);
  CHECK(dec.r_new == 2);
  check_decomposition_invariants(dec, u_rot, g);
  CHECK_THROWS_AS(decompose_subspace(u, g, 0.0), ParameterError);
  CHECK_THROWS_AS(decompose_subspace(u, g, 1.0), ParameterError);
}

TEST_CASE("decompose_subspace: tilted overlap keeps the counts") {
  // U = span(a1..a4, (a5 + a6) / sqrt 2), G = span(a1..a4, a7, a5): one direction at 45 degrees
  const OrthoBasis all = testing::random_basis(50, 9, 8);
  Matrix um(50, 5);
  um << all.columns().leftCols(4), (all.columns().col(4) + all.columns().col(5)) / std::sqrt(2.0);
  Matrix gm(50, 6);
  gm << all.columns().leftCols(4), all.columns().col(6), all.columns().col(4);
  const OrthoBasis u(um);
  const OrthoBasis g(gm);
  const SubspaceDecomposition dec = decompose_subspace(u, g);
  CHECK(dec.r0 == 4);
  CHECK(dec.r_extra == 2);
  CHECK(dec.r_new == 1);
  // u_new is the part of U outside span(G), so [u0 u_new] no longer spans U here
  CHECK(std::abs(dec.u_new.columns().col(0).dot(all.columns().col(5))) == doctest::Approx(1.0));
}

TEST_CASE("ProblemInstance invariants") {
  ProblemInstance p;
  p.m = testing::random_matrix(5, 4, 9);
  p.prior = OrthoBasis::empty(5);
  p.validate();
  p.truth_l = p.m;
  p.truth_s = Matrix::Zero(5, 4);
  p.validate();
  Matrix off = p.m;
  off(0, 0) += 1e-3;
  p.truth_l = off;
  CHECK_THROWS(p.validate());
  p.noise_sigma = 2e-3;
  p.validate();
  p.noise_sigma = 5e-4;
  CHECK_THROWS(p.validate());
  p.noise_sigma.reset();
  p.truth_l = p.m;
  p.prior = OrthoBasis::empty(4);
  CHECK_THROWS_AS(p.validate(), DimensionError);
}
