#include "agks/elements.hpp"
#include "agks/mesh.hpp"

#include <doctest.h>

#include <random>

using namespace agks;

namespace {

ElementGeometry reference_triangle() {
  ElementGeometry g;
  g.verts = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  // lower->higher local index = lower->higher "global" index here
  auto normal = [](Eigen::Vector2d a, Eigen::Vector2d b) {
    const Eigen::Vector2d t = (b - a).normalized();
    return Eigen::Vector2d(-t.y(), t.x());
  };
  g.edge_normals = {normal(g.verts[0], g.verts[1]), normal(g.verts[1], g.verts[2]),
                    normal(g.verts[0], g.verts[2])};
  return g;
}

ElementGeometry skewed_triangle() {
  ElementGeometry g;
  g.verts = {Eigen::Vector2d(0.13, -0.02), Eigen::Vector2d(0.91, 0.21),
             Eigen::Vector2d(0.34, 0.77)};
  auto normal = [](Eigen::Vector2d a, Eigen::Vector2d b) {
    const Eigen::Vector2d t = (b - a).normalized();
    return Eigen::Vector2d(-t.y(), t.x());
  };
  g.edge_normals = {normal(g.verts[0], g.verts[1]), normal(g.verts[1], g.verts[2]),
                    normal(g.verts[0], g.verts[2])};
  return g;
}

}  // namespace

TEST_CASE("rigid modes lie in the element kernel") {
  for (ElementKind kind : {ElementKind::Morley, ElementKind::HCT}) {
    for (const ElementGeometry& g : {reference_triangle(), skewed_triangle()}) {
      const LocalMatrix local = local_stiffness(kind, g, 1.0, 0.3);
      const Eigen::MatrixXd modes = local_linear_interpolants(kind, g);
      const double scale = local.stiffness.cwiseAbs().maxCoeff();
      CHECK((local.stiffness * modes).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("Morley reference stiffness matches the symbolic oracle") {
  // Frozen from an exact rational/radical evaluation of the bilinear form on
  // the reference triangle with constant Hessians (alpha = 1, sigma = 3/10).
  const double expected[6][6] = {
      {2.7999999999999998, -1.3999999999999999, -1.3999999999999999, 0,
       -1.9798989873223332, 0},
      {-1.3999999999999999, 1.3999999999999999, 0, 0.69999999999999996,
       0.98994949366116658, 0.69999999999999996},
      {-1.3999999999999999, 0, 1.3999999999999999, -0.69999999999999996,
       0.98994949366116658, -0.69999999999999996},
      {0, 0.69999999999999996, -0.69999999999999996, 2, 1.8384776310850235,
       -0.59999999999999998},
      {-1.9798989873223332, 0.98994949366116658, 0.98994949366116658,
       1.8384776310850235, 4, -1.8384776310850235},
      {0, 0.69999999999999996, -0.69999999999999996, -0.59999999999999998,
       -1.8384776310850235, 2}};
  const LocalMatrix local = local_stiffness(ElementKind::Morley, reference_triangle(), 1.0, 0.3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(local.stiffness(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-12));
}

TEST_CASE("stiffness scales exactly with alpha") {
  for (ElementKind kind : {ElementKind::Morley, ElementKind::HCT}) {
    const ElementGeometry g = skewed_triangle();
    const LocalMatrix unit = local_stiffness(kind, g, 1.0, 0.3);
    const LocalMatrix scaled = local_stiffness(kind, g, 1e6, 0.3);
    CHECK((scaled.stiffness - 1e6 * unit.stiffness).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coercivity against the H2-seminorm Gram matrix") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (ElementKind kind : {ElementKind::Morley, ElementKind::HCT}) {
    const ElementGeometry g = skewed_triangle();
    const double sigma = 0.3, alpha = 2.5;
    const LocalMatrix local = local_stiffness(kind, g, alpha, sigma);
    const Eigen::MatrixXd modes = local_linear_interpolants(kind, g);
    const int n = static_cast<int>(local.stiffness.rows());
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = dist(gen);
      // project out the rigid modes
      v -= modes * (modes.colPivHouseholderQr().solve(v));
      const double energy = v.dot(local.stiffness * v);
      const double semi = v.dot(local.h2_gram * v);
      CHECK(energy >= alpha * (1.0 - sigma) * semi * (1.0 - 1e-10));
    }
  }
}

TEST_CASE("element matrices are symmetric PSD") {
  for (ElementKind kind : {ElementKind::Morley, ElementKind::HCT}) {
    const LocalMatrix local = local_stiffness(kind, skewed_triangle(), 1.0, 0.25);
    CHECK((local.stiffness - local.stiffness.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(local.stiffness);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  }
}

TEST_CASE("degenerate triangle is rejected") {
  ElementGeometry g = reference_triangle();
  g.verts[2] = 0.5 * (g.verts[0] + g.verts[1]);
  CHECK_THROWS_AS(local_stiffness(ElementKind::Morley, g, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("HCT composite cubic is C1 across internal edges") {
  const ElementGeometry g = skewed_triangle();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd dof(12);
  for (int i = 0; i < 12; ++i) dof[i] = dist(gen);
  const HctFunction fn(g, dof);

  const Eigen::Vector2d centroid = (g.verts[0] + g.verts[1] + g.verts[2]) / 3.0;
  for (int j = 0; j < 3; ++j) {
    // internal edge centroid -> vertex j separates subtriangles j and (j+2)%3
    const Eigen::Vector2d dir = (g.verts[j] - centroid).normalized();
    const Eigen::Vector2d n(-dir.y(), dir.x());
    for (double s : {0.3, 0.7}) {
      const Eigen::Vector2d p = centroid + s * (g.verts[j] - centroid);
      CHECK(fn.value(p, j) == doctest::Approx(fn.value(p, (j + 2) % 3)).epsilon(1e-10));
      const double dn_a = n.dot(fn.gradient(p, j));
      const double dn_b = n.dot(fn.gradient(p, (j + 2) % 3));
      CHECK(dn_a == doctest::Approx(dn_b).epsilon(1e-10));
    }
  }
}

TEST_CASE("HCT interpolates value and gradient data") {
  const ElementGeometry g = skewed_triangle();
  // DOF of the cubic-free quadratic u = x^2 + 2xy - y^2 (lies in the HCT space)
  auto u = [](const Eigen::Vector2d& p) { return p.x() * p.x() + 2 * p.x() * p.y() - p.y() * p.y(); };
  auto grad = [](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(2 * p.x() + 2 * p.y(), 2 * p.x() - 2 * p.y());
  };
  Eigen::VectorXd dof(12);
  for (int k = 0; k < 3; ++k) {
    dof[3 * k] = u(g.verts[k]);
    dof[3 * k + 1] = grad(g.verts[k]).x();
    dof[3 * k + 2] = grad(g.verts[k]).y();
  }
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d mid = 0.5 * (g.verts[k] + g.verts[(k + 1) % 3]);
    dof[9 + k] = g.edge_normals[k].dot(grad(mid));
  }
  const HctFunction fn(g, dof);
  const Eigen::Vector2d centroid = (g.verts[0] + g.verts[1] + g.verts[2]) / 3.0;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d p = 0.5 * (centroid + g.verts[j]);
    CHECK(fn.value(p, j) == doctest::Approx(u(p)).epsilon(1e-10));
    CHECK((fn.gradient(p, j) - grad(p)).norm() <= 1e-9);
  }
}

TEST_CASE("DOF counts match the level sequence") {
  const auto chain = build_hierarchy(4);
  const int hct_expected[4] = {131, 451, 1667, 6403};
  const int morley_expected[4] = {81, 289, 1089, 4225};
  for (int l = 0; l < 4; ++l) {
    CHECK(dof_layout(ElementKind::HCT, chain[l]).size == hct_expected[l]);
    CHECK(dof_layout(ElementKind::Morley, chain[l]).size == morley_expected[l]);
  }
}

TEST_CASE("Morley level-1 boundary elimination bookkeeping") {
  const MeshLevel mesh = build_coarse();
  const DofLayout layout = dof_layout(ElementKind::Morley, mesh);
  CHECK(layout.size == 81);  // 25 vertices + 56 edges
  int constrained = 0;
  for (char c : layout.constrained) constrained += c;
  CHECK(constrained == 32);  // 16 boundary vertices + 16 boundary edges
}

TEST_CASE("material parameter validation") {
  const MaterialParams bad_contrast{0.5, 0.3};
  const MaterialParams bad_sigma{10.0, 0.5};
  const MaterialParams good{1.0, 0.3};
  CHECK_THROWS_AS(bad_contrast.validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad_sigma.validate(), std::invalid_argument);
  CHECK_NOTHROW(good.validate());
}
