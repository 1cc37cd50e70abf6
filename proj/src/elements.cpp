#include "agks/elements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agks {

void MaterialParams::validate() const {
  if (!(contrast >= 1.0)) throw std::invalid_argument("contrast must be >= 1");
  if (!(sigma > 0.0 && sigma < 0.5))
    throw std::invalid_argument("sigma must lie in (0, 1/2)");
}

ElementGeometry ElementGeometry::from_mesh(const MeshLevel& mesh, int tri) {
  ElementGeometry g;
  const auto& t = mesh.triangles[tri];
  for (int k = 0; k < 3; ++k) {
    g.verts[k] = mesh.vertices[t.v[k]];
    g.edge_normals[k] = mesh.edge_normal(t.edge[k]);
  }
  return g;
}

namespace {

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

struct QuadPoint {
  Eigen::Vector2d p;
  double w;
};

// Degree-2 rule (edge midpoints), exact for quadratics.
std::array<QuadPoint, 3> quad_deg2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, double area) {
  const double w = area / 3.0;
  return {QuadPoint{0.5 * (a + b), w}, QuadPoint{0.5 * (b + c), w},
          QuadPoint{0.5 * (c + a), w}};
}

// Degree-3 rule.
std::array<QuadPoint, 4> quad_deg3(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, double area) {
  const Eigen::Vector2d bc = (a + b + c) / 3.0;
  const double w0 = -27.0 / 48.0 * area, w1 = 25.0 / 48.0 * area;
  auto pt = [&](double la, double lb, double lc) {
    return Eigen::Vector2d(la * a + lb * b + lc * c);
  };
  return {QuadPoint{bc, w0}, QuadPoint{pt(0.6, 0.2, 0.2), w1},
          QuadPoint{pt(0.2, 0.6, 0.2), w1}, QuadPoint{pt(0.2, 0.2, 0.6), w1}};
}

// ---------------------------------------------------------------------------
// Morley: quadratics with vertex values and edge-midpoint normal derivatives.
// Monomial basis {1,x,y,x^2,xy,y^2} in centroid-shifted, h-scaled coordinates.

constexpr int kMorleyDofs = 6;

struct Frame {
  Eigen::Vector2d c;
  double h = 1.0;
  Eigen::Vector2d local(const Eigen::Vector2d& x) const { return (x - c) / h; }
};

Eigen::Matrix<double, 6, 1> quad_value_row(const Eigen::Vector2d& q) {
  Eigen::Matrix<double, 6, 1> r;
  r << 1.0, q.x(), q.y(), q.x() * q.x(), q.x() * q.y(), q.y() * q.y();
  return r;
}

// physical gradient rows (scaled by 1/h)
void quad_grad_rows(const Eigen::Vector2d& q, double h,
                    Eigen::Matrix<double, 6, 1>& dx, Eigen::Matrix<double, 6, 1>& dy) {
  dx << 0.0, 1.0, 0.0, 2.0 * q.x(), q.y(), 0.0;
  dy << 0.0, 0.0, 1.0, 0.0, q.x(), 2.0 * q.y();
  dx /= h;
  dy /= h;
}

LocalMatrix morley_local(const ElementGeometry& g, double alpha, double sigma) {
  const double area = triangle_area(g.verts[0], g.verts[1], g.verts[2]);
  Frame f;
  f.c = (g.verts[0] + g.verts[1] + g.verts[2]) / 3.0;
  f.h = ((g.verts[1] - g.verts[0]).norm() + (g.verts[2] - g.verts[1]).norm() +
         (g.verts[0] - g.verts[2]).norm()) / 3.0;

  Eigen::Matrix<double, 6, 6> nodal;
  for (int k = 0; k < 3; ++k)
    nodal.row(k) = quad_value_row(f.local(g.verts[k])).transpose();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d mid = 0.5 * (g.verts[k] + g.verts[(k + 1) % 3]);
    Eigen::Matrix<double, 6, 1> dx, dy;
    quad_grad_rows(f.local(mid), f.h, dx, dy);
    nodal.row(3 + k) = (g.edge_normals[k].x() * dx + g.edge_normals[k].y() * dy).transpose();
  }
  const Eigen::Matrix<double, 6, 6> basis =
      nodal.fullPivLu().solve(Eigen::Matrix<double, 6, 6>::Identity());

  // constant physical Hessians per basis function: (uxx, uyy, uxy)
  Eigen::Matrix<double, 3, 6> hess;
  const double s = 1.0 / (f.h * f.h);
  for (int j = 0; j < kMorleyDofs; ++j) {
    hess(0, j) = 2.0 * basis(3, j) * s;
    hess(1, j) = 2.0 * basis(5, j) * s;
    hess(2, j) = basis(4, j) * s;
  }

  LocalMatrix out;
  out.stiffness.setZero(kMorleyDofs, kMorleyDofs);
  out.h2_gram.setZero(kMorleyDofs, kMorleyDofs);
  for (int i = 0; i < kMorleyDofs; ++i) {
    for (int j = i; j < kMorleyDofs; ++j) {
      const double uxx = hess(0, i), uyy = hess(1, i), uxy = hess(2, i);
      const double vxx = hess(0, j), vyy = hess(1, j), vxy = hess(2, j);
      const double semi = uxx * vxx + uyy * vyy + 2.0 * uxy * vxy;
      const double lap = (uxx + uyy) * (vxx + vyy);
      const double a = alpha * (area * (sigma * lap + (1.0 - sigma) * semi));
      out.stiffness(i, j) = a;
      out.stiffness(j, i) = a;
      const double gm = area * semi;
      out.h2_gram(i, j) = gm;
      out.h2_gram(j, i) = gm;
    }
  }

  out.load.setZero(kMorleyDofs);
  for (const auto& qp : quad_deg2(g.verts[0], g.verts[1], g.verts[2], area)) {
    const Eigen::Matrix<double, 6, 1> row = quad_value_row(f.local(qp.p));
    for (int j = 0; j < kMorleyDofs; ++j)
      out.load[j] += qp.w * row.dot(basis.col(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// HCT: composite cubic on the three subtriangles meeting at the centroid,
// C^1 across the internal edges.  12 DOF: value and gradient at the vertices,
// normal derivative at the outer edge midpoints.  The 30 cubic coefficients
// (10 per subtriangle) are pinned by 21 nodal and 9 continuity conditions.

constexpr int kHctDofs = 12;
constexpr int kCubic = 10;  // 1,x,y,x2,xy,y2,x3,x2y,xy2,y3

using Row10 = Eigen::Matrix<double, kCubic, 1>;

Row10 cubic_value_row(const Eigen::Vector2d& q) {
  const double x = q.x(), y = q.y();
  Row10 r;
  r << 1, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
  return r;
}

void cubic_grad_rows(const Eigen::Vector2d& q, Row10& dx, Row10& dy) {
  const double x = q.x(), y = q.y();
  dx << 0, 1, 0, 2 * x, y, 0, 3 * x * x, 2 * x * y, y * y, 0;
  dy << 0, 0, 1, 0, x, 2 * y, 0, x * x, 2 * x * y, 3 * y * y;
}

// local-frame Hessian rows (scale by 1/h^2 for physical)
void cubic_hess_rows(const Eigen::Vector2d& q, Row10& dxx, Row10& dyy, Row10& dxy) {
  const double x = q.x(), y = q.y();
  dxx << 0, 0, 0, 2, 0, 0, 6 * x, 2 * y, 0, 0;
  dyy << 0, 0, 0, 0, 0, 2, 0, 0, 2 * x, 6 * y;
  dxy << 0, 0, 0, 0, 1, 0, 0, 2 * x, 2 * y, 0;
}

struct HctBasis {
  Frame frame;
  Eigen::Matrix<double, 30, kHctDofs> C;  // column = composite-cubic coefficients
};

HctBasis hct_basis(const ElementGeometry& g) {
  Frame f;
  f.c = (g.verts[0] + g.verts[1] + g.verts[2]) / 3.0;
  f.h = ((g.verts[1] - g.verts[0]).norm() + (g.verts[2] - g.verts[1]).norm() +
         (g.verts[0] - g.verts[2]).norm()) / 3.0;

  std::array<Eigen::Vector2d, 3> q;  // outer vertices, local frame
  for (int k = 0; k < 3; ++k) q[k] = f.local(g.verts[k]);
  const Eigen::Vector2d qc(0.0, 0.0);  // centroid

  Eigen::Matrix<double, 30, 30> A = Eigen::Matrix<double, 30, 30>::Zero();
  Eigen::Matrix<double, 30, kHctDofs> B = Eigen::Matrix<double, 30, kHctDofs>::Zero();
  int row = 0;
  auto coeff = [](int subtri, int c) { return 10 * subtri + c; };

  // nodal conditions, 7 per subtriangle
  for (int j = 0; j < 3; ++j) {
    const int va = j, vb = (j + 1) % 3;
    for (int v : {va, vb}) {
      const Row10 val = cubic_value_row(q[v]);
      Row10 dx, dy;
      cubic_grad_rows(q[v], dx, dy);
      A.row(row).segment<kCubic>(coeff(j, 0)) = val.transpose();
      B(row++, 3 * v) = 1.0;
      A.row(row).segment<kCubic>(coeff(j, 0)) = dx.transpose() / f.h;
      B(row++, 3 * v + 1) = 1.0;
      A.row(row).segment<kCubic>(coeff(j, 0)) = dy.transpose() / f.h;
      B(row++, 3 * v + 2) = 1.0;
    }
    const Eigen::Vector2d mid = f.local(0.5 * (g.verts[va] + g.verts[vb]));
    Row10 dx, dy;
    cubic_grad_rows(mid, dx, dy);
    A.row(row).segment<kCubic>(coeff(j, 0)) =
        (g.edge_normals[j].x() * dx + g.edge_normals[j].y() * dy).transpose() / f.h;
    B(row++, 9 + j) = 1.0;
  }

  // value and gradient agreement at the centroid, pairs (0,1) and (1,2)
  for (int pair = 0; pair < 2; ++pair) {
    const int j0 = pair, j1 = pair + 1;
    const Row10 val = cubic_value_row(qc);
    Row10 dx, dy;
    cubic_grad_rows(qc, dx, dy);
    A.row(row).segment<kCubic>(coeff(j0, 0)) = val.transpose();
    A.row(row).segment<kCubic>(coeff(j1, 0)) -= val.transpose();
    ++row;
    A.row(row).segment<kCubic>(coeff(j0, 0)) = dx.transpose();
    A.row(row).segment<kCubic>(coeff(j1, 0)) -= dx.transpose();
    ++row;
    A.row(row).segment<kCubic>(coeff(j0, 0)) = dy.transpose();
    A.row(row).segment<kCubic>(coeff(j1, 0)) -= dy.transpose();
    ++row;
  }

  // normal-derivative agreement at the internal edge midpoints;
  // internal edge centroid->v[j] separates subtriangles j and (j+2)%3
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d dir = q[j].normalized();
    const Eigen::Vector2d n(-dir.y(), dir.x());
    const Eigen::Vector2d mid = 0.5 * q[j];
    Row10 dx, dy;
    cubic_grad_rows(mid, dx, dy);
    const Row10 nrow = n.x() * dx + n.y() * dy;
    A.row(row).segment<kCubic>(coeff(j, 0)) = nrow.transpose();
    A.row(row).segment<kCubic>(coeff((j + 2) % 3, 0)) -= nrow.transpose();
    ++row;
  }

  HctBasis basis;
  basis.frame = f;
  basis.C = A.fullPivLu().solve(B);
  return basis;
}

LocalMatrix hct_local(const ElementGeometry& g, double alpha, double sigma) {
  const HctBasis basis = hct_basis(g);
  const Frame& f = basis.frame;
  const Eigen::Matrix<double, 30, kHctDofs>& C = basis.C;
  auto coeff = [](int subtri, int c) { return 10 * subtri + c; };

  LocalMatrix out;
  out.stiffness.setZero(kHctDofs, kHctDofs);
  out.h2_gram.setZero(kHctDofs, kHctDofs);
  out.load.setZero(kHctDofs);

  const double hess_scale = 1.0 / (f.h * f.h);
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d pa = g.verts[j], pb = g.verts[(j + 1) % 3];
    const Eigen::Vector2d pc = f.c;
    const double area = triangle_area(pc, pa, pb);
    if (area <= 0.0) throw std::invalid_argument("degenerate triangle");

    for (const auto& qp : quad_deg2(pc, pa, pb, area)) {
      Row10 dxx, dyy, dxy;
      cubic_hess_rows(f.local(qp.p), dxx, dyy, dxy);
      Eigen::Matrix<double, 3, kHctDofs> h;
      for (int b = 0; b < kHctDofs; ++b) {
        const auto cb = C.col(b).segment<kCubic>(coeff(j, 0));
        h(0, b) = dxx.dot(cb) * hess_scale;
        h(1, b) = dyy.dot(cb) * hess_scale;
        h(2, b) = dxy.dot(cb) * hess_scale;
      }
      for (int a = 0; a < kHctDofs; ++a) {
        for (int b = a; b < kHctDofs; ++b) {
          const double semi = h(0, a) * h(0, b) + h(1, a) * h(1, b) + 2.0 * h(2, a) * h(2, b);
          const double lap = (h(0, a) + h(1, a)) * (h(0, b) + h(1, b));
          out.stiffness(a, b) += qp.w * (sigma * lap + (1.0 - sigma) * semi);
          out.h2_gram(a, b) += qp.w * semi;
        }
      }
    }
    for (const auto& qp : quad_deg3(pc, pa, pb, area)) {
      const Row10 val = cubic_value_row(f.local(qp.p));
      for (int b = 0; b < kHctDofs; ++b)
        out.load[b] += qp.w * val.dot(C.col(b).segment<kCubic>(coeff(j, 0)));
    }
  }
  out.stiffness = out.stiffness.selfadjointView<Eigen::Upper>();
  out.h2_gram = out.h2_gram.selfadjointView<Eigen::Upper>();
  out.stiffness *= alpha;  // single multiply keeps alpha-scaling exact
  return out;
}

}  // namespace

LocalMatrix local_stiffness(ElementKind kind, const ElementGeometry& g,
                            double alpha, double sigma) {
  if (triangle_area(g.verts[0], g.verts[1], g.verts[2]) <= 0.0)
    throw std::invalid_argument("degenerate triangle");
  return kind == ElementKind::Morley ? morley_local(g, alpha, sigma)
                                     : hct_local(g, alpha, sigma);
}

Eigen::MatrixXd local_linear_interpolants(ElementKind kind, const ElementGeometry& g) {
  const int n = kind == ElementKind::HCT ? kHctDofs : kMorleyDofs;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, 3);
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d& p = g.verts[k];
    if (kind == ElementKind::HCT) {
      e(3 * k, 0) = 1.0;
      e(3 * k, 1) = p.x();
      e(3 * k, 2) = p.y();
      e(3 * k + 1, 1) = 1.0;  // d/dx of x
      e(3 * k + 2, 2) = 1.0;  // d/dy of y
    } else {
      e(k, 0) = 1.0;
      e(k, 1) = p.x();
      e(k, 2) = p.y();
    }
  }
  const int off = kind == ElementKind::HCT ? 9 : 3;
  for (int k = 0; k < 3; ++k) {
    e(off + k, 1) = g.edge_normals[k].x();
    e(off + k, 2) = g.edge_normals[k].y();
  }
  return e;
}

ElementBasis::ElementBasis(ElementKind kind, const ElementGeometry& geom)
    : kind_(kind), verts_(geom.verts) {
  centroid_ = (geom.verts[0] + geom.verts[1] + geom.verts[2]) / 3.0;
  scale_ = ((geom.verts[1] - geom.verts[0]).norm() + (geom.verts[2] - geom.verts[1]).norm() +
            (geom.verts[0] - geom.verts[2]).norm()) / 3.0;
  if (kind == ElementKind::HCT) {
    coeffs_ = hct_basis(geom).C;
  } else {
    Frame f{centroid_, scale_};
    Eigen::Matrix<double, 6, 6> nodal;
    for (int k = 0; k < 3; ++k)
      nodal.row(k) = quad_value_row(f.local(geom.verts[k])).transpose();
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d mid = 0.5 * (geom.verts[k] + geom.verts[(k + 1) % 3]);
      Eigen::Matrix<double, 6, 1> dx, dy;
      quad_grad_rows(f.local(mid), f.h, dx, dy);
      nodal.row(3 + k) =
          (geom.edge_normals[k].x() * dx + geom.edge_normals[k].y() * dy).transpose();
    }
    coeffs_ = nodal.fullPivLu().solve(Eigen::Matrix<double, 6, 6>::Identity());
  }
}

int ElementBasis::locate_subtri(const Eigen::Vector2d& p) const {
  int best = 0;
  double best_min = -std::numeric_limits<double>::max();
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d a = centroid_, b = verts_[j], c = verts_[(j + 1) % 3];
    const double area = triangle_area(a, b, c);
    const double l0 = triangle_area(p, b, c) / area;
    const double l1 = triangle_area(a, p, c) / area;
    const double l2 = triangle_area(a, b, p) / area;
    const double lo = std::min({l0, l1, l2});
    if (lo > best_min) {
      best_min = lo;
      best = j;
    }
  }
  return best;
}

Eigen::VectorXd ElementBasis::values(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d q = (p - centroid_) / scale_;
  if (kind_ == ElementKind::Morley)
    return coeffs_.transpose() * quad_value_row(q);
  const int sub = locate_subtri(p);
  const Row10 row = cubic_value_row(q);
  Eigen::VectorXd out(12);
  for (int b = 0; b < 12; ++b) out[b] = row.dot(coeffs_.col(b).segment<kCubic>(10 * sub));
  return out;
}

Eigen::MatrixXd ElementBasis::gradients(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d q = (p - centroid_) / scale_;
  if (kind_ == ElementKind::Morley) {
    Eigen::Matrix<double, 6, 1> dx, dy;
    quad_grad_rows(q, scale_, dx, dy);
    Eigen::MatrixXd out(6, 2);
    out.col(0) = coeffs_.transpose() * dx;
    out.col(1) = coeffs_.transpose() * dy;
    return out;
  }
  const int sub = locate_subtri(p);
  Row10 dx, dy;
  cubic_grad_rows(q, dx, dy);
  Eigen::MatrixXd out(12, 2);
  for (int b = 0; b < 12; ++b) {
    const auto c = coeffs_.col(b).segment<kCubic>(10 * sub);
    out(b, 0) = dx.dot(c) / scale_;
    out(b, 1) = dy.dot(c) / scale_;
  }
  return out;
}

HctFunction::HctFunction(const ElementGeometry& geom, Eigen::VectorXd dof) {
  const HctBasis basis = hct_basis(geom);
  centroid_ = basis.frame.c;
  scale_ = basis.frame.h;
  coeffs_ = basis.C * dof;
}

double HctFunction::value(const Eigen::Vector2d& p, int subtri) const {
  const Eigen::Vector2d q = (p - centroid_) / scale_;
  return cubic_value_row(q).dot(coeffs_.segment<kCubic>(10 * subtri));
}

Eigen::Vector2d HctFunction::gradient(const Eigen::Vector2d& p, int subtri) const {
  const Eigen::Vector2d q = (p - centroid_) / scale_;
  Row10 dx, dy;
  cubic_grad_rows(q, dx, dy);
  const auto c = coeffs_.segment<kCubic>(10 * subtri);
  return Eigen::Vector2d(dx.dot(c), dy.dot(c)) / scale_;
}

void DofLayout::element_dofs(const MeshLevel& mesh, int tri, std::vector<int>& out) const {
  const auto& t = mesh.triangles[tri];
  out.clear();
  if (kind == ElementKind::HCT) {
    for (int k = 0; k < 3; ++k) {
      out.push_back(vertex_value(t.v[k]));
      out.push_back(vertex_dx(t.v[k]));
      out.push_back(vertex_dy(t.v[k]));
    }
  } else {
    for (int k = 0; k < 3; ++k) out.push_back(vertex_value(t.v[k]));
  }
  for (int k = 0; k < 3; ++k) out.push_back(edge_dof(t.edge[k]));
}

DofLayout dof_layout(ElementKind kind, const MeshLevel& mesh) {
  DofLayout layout;
  layout.kind = kind;
  layout.n_vertices = mesh.num_vertices();
  layout.n_edges = mesh.num_edges();
  const int per_vertex = kind == ElementKind::HCT ? 3 : 1;
  layout.size = per_vertex * layout.n_vertices + layout.n_edges;
  layout.constrained.assign(layout.size, 0);
  layout.info.resize(layout.size);

  for (int v = 0; v < layout.n_vertices; ++v) {
    layout.info[layout.vertex_value(v)] = {DofKind::VertexValue, v};
    if (kind == ElementKind::HCT) {
      layout.info[layout.vertex_dx(v)] = {DofKind::VertexDx, v};
      layout.info[layout.vertex_dy(v)] = {DofKind::VertexDy, v};
    }
    if (mesh.vertex_boundary[v]) {
      layout.constrained[layout.vertex_value(v)] = 1;
      if (kind == ElementKind::HCT) {
        layout.constrained[layout.vertex_dx(v)] = 1;
        layout.constrained[layout.vertex_dy(v)] = 1;
      }
    }
  }
  for (int e = 0; e < layout.n_edges; ++e) {
    layout.info[layout.edge_dof(e)] = {DofKind::EdgeNormal, e};
    if (mesh.edge_boundary[e]) layout.constrained[layout.edge_dof(e)] = 1;
  }
  return layout;
}

}  // namespace agks
