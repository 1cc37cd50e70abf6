#include "agks/spa.hpp"

#include "agks/dense_oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace agks;
using testutil::Problem;

namespace {

struct SpaFixture {
  Problem p;
  NeumannDecomposition nd;

  explicit SpaFixture(ElementKind kind, int level)
      : p(testutil::make_problem(kind, level)),
        nd(neumann_extract(kind, p.mesh, p.layout, p.part, 0.3)) {}

  Blocks blocks_at(double m) const {
    return extract_blocks(testutil::assemble_contrast(p, m).K, p.part);
  }
  SpaLimits limits_at(double m) const {
    return compute_limits(blocks_at(m), nd, p.part);
  }
};

}  // namespace

TEST_CASE("eta is SPD and matches its interface form") {
  for (ElementKind kind : {ElementKind::Morley, ElementKind::HCT}) {
    const SpaFixture f(kind, 1);
    const SpaLimits lim = f.limits_at(1e4);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(lim.eta);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK((lim.eta - lim.eta_interface).cwiseAbs().maxCoeff()
          <= 1e-10 * lim.eta.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("limiting inverse of K_HH converges at the O(1/m) rate") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1e4);
  const Eigen::MatrixXd dagger = lim.e_H * lim.eta_inv * lim.e_H.transpose();
  auto err = [&](double m) {
    const Eigen::MatrixXd inv = invert_spd(to_dense(f.blocks_at(m).K_HH));
    return spectral_norm(inv - dagger);
  };
  const double e4 = err(1e4), e6 = err(1e6), e8 = err(1e8);
  CHECK(e4 / e6 >= 100.0 / 3.0);
  CHECK(e4 / e6 <= 300.0);
  CHECK(e6 / e8 >= 100.0 / 3.0);
  CHECK(e6 / e8 <= 300.0);
}

TEST_CASE("K_LL minus the limiting Schur complement has rank 3") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1e4);
  const Eigen::MatrixXd diff = to_dense(lim.K_LL) - lim.dense_s_inf();
  const Eigen::VectorXd sv = diff.jacobiSvd().singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  CHECK(rank == 3);
}

TEST_CASE("dense Schur complement: symmetry, definiteness, O(1/m) limit") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1e4);
  const Eigen::MatrixXd s_inf = lim.dense_s_inf();

  const Eigen::MatrixXd s1 = schur_dense(f.blocks_at(1.0));
  CHECK((s1 - s1.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * s1.cwiseAbs().maxCoeff());
  Eigen::LLT<Eigen::MatrixXd> llt(s1);
  CHECK(llt.info() == Eigen::Success);

  const double e4 = spectral_norm(schur_dense(f.blocks_at(1e4)) - s_inf);
  const double e6 = spectral_norm(schur_dense(f.blocks_at(1e6)) - s_inf);
  CHECK(e4 / e6 >= 100.0 / 3.0);
  CHECK(e4 / e6 <= 300.0);
}

TEST_CASE("limiting coupling P_inf converges at the O(1/m) rate") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1e4);
  const Eigen::MatrixXd p_inf = lim.v * lim.eta_inv * lim.e_H.transpose();
  auto err = [&](double m) {
    const Blocks b = f.blocks_at(m);
    const Eigen::MatrixXd coupling =
        to_dense(b.K_LH) * invert_spd(to_dense(b.K_HH));
    return spectral_norm(coupling - p_inf);
  };
  const double e4 = err(1e4), e6 = err(1e6);
  CHECK(e4 / e6 >= 100.0 / 3.0);
  CHECK(e4 / e6 <= 300.0);
}

TEST_CASE("eta is independent of the contrast") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1.0);
  const double scale = lim.eta.cwiseAbs().maxCoeff();
  for (double m : {1.0, 1e4, 1e10}) {
    const Blocks b = f.blocks_at(m);
    const Eigen::Matrix3d eta_m = lim.e_H.transpose() * (b.K_HH * lim.e_H);
    // the m-scaled Neumann part contributes m*eps of rounding noise, which
    // dominates the 1e-10 target once m reaches ~1e6
    const double tol = std::max(1e-10, m * 1e-16);
    CHECK((eta_m - lim.eta).cwiseAbs().maxCoeff() <= tol * scale);
  }
}

TEST_CASE("island solution flattens to a linear polynomial") {
  const SpaFixture f(ElementKind::Morley, 2);
  auto flatness_at = [&](double m) {
    const System sys = testutil::assemble_contrast(f.p, m);
    const Eigen::VectorXd x = solve_refined(to_dense(sys.K), sys.b);
    return solution_flatness(gather(x, f.p.part.H), f.nd.e_H);
  };
  CHECK(flatness_at(1.0) > 1e-2);  // no flattening at unit contrast
  const double f6 = flatness_at(1e6), f8 = flatness_at(1e8);
  CHECK(f8 / f6 >= 1e-2 / 5.0);
  CHECK(f8 / f6 <= 1e-2 * 5.0);
  CHECK(flatness_at(1e10) <= 1e-6);

  CHECK_THROWS_AS(solution_flatness(Eigen::VectorXd::Zero(f.nd.e_H.rows()), f.nd.e_H),
                  std::domain_error);
}

TEST_CASE("factored operators match their dense forms") {
  const SpaFixture f(ElementKind::Morley, 1);
  const SpaLimits lim = f.limits_at(1e4);
  Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(lim.e_H.rows(), -1.0, 1.0);
  const Eigen::MatrixXd dagger = lim.e_H * lim.eta_inv * lim.e_H.transpose();
  CHECK((lim.apply_khh_dagger(r) - dagger * r).norm() <= 1e-13 * r.norm());

  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(lim.K_LL.rows(), 0.0, 2.0);
  CHECK((lim.apply_s_inf(x) - lim.dense_s_inf() * x).norm()
        <= 1e-12 * (lim.dense_s_inf() * x).norm());
}

TEST_CASE("dense oracle refuses above the cap") {
  const Problem p = testutil::make_problem(ElementKind::Morley, 4);
  const System sys = testutil::assemble_contrast(p, 1e2);
  const Blocks blocks = extract_blocks(sys.K, p.part);
  CHECK_THROWS_AS(schur_dense(blocks), std::length_error);
}
