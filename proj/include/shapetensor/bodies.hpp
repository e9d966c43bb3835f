// Copyright 2026 The shapetensor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPETENSOR_BODIES_HPP
#define SHAPETENSOR_BODIES_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapetensor/hull.hpp"
#include "shapetensor/lp.hpp"
#include "shapetensor/measures.hpp"
#include "shapetensor/tensors.hpp"

namespace shapetensor {

// ---------------------------------------------------------------------------
// Convex polytope in R^2 or R^3, kept as an H-representation together with
// the derived vertex/facet structure. Lower-dimensional bodies (used as the
// output of the rank-one reconstruction case) carry vertices only and are
// marked degenerate.
// ---------------------------------------------------------------------------
struct Polytope {
  int dim = 0;
  std::vector<Vec> normals;             // unit outer facet normals
  std::vector<double> supports;         // h(normal_i)
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> facets; // vertex indices, ordered per facet
  std::vector<double> areas;            // (n-1)-volume per facet
  Vec centroid;
  double volume = 0.0;
  bool degenerate = false;

  double support(const Vec& u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : vertices) best = std::max(best, v.dot(u));
    return best;
  }

  double surface_area() const {
    double s = 0.0;
    for (double a : areas) s += a;
    return s;
  }

  double diameter() const {
    double best = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i)
      for (size_t j = i + 1; j < vertices.size(); ++j)
        best = std::max(best, (vertices[i] - vertices[j]).norm());
    return best;
  }

  double circumradius_about_centroid() const {
    double best = 0.0;
    for (const Vec& v : vertices) best = std::max(best, (v - centroid).norm());
    return best;
  }

  Polytope translated(const Vec& x) const {
    Polytope p = *this;
    for (auto& v : p.vertices) v += x;
    for (size_t i = 0; i < p.normals.size(); ++i) p.supports[i] += p.normals[i].dot(x);
    if (p.centroid.size() == dim) p.centroid += x;
    return p;
  }
};

namespace detail {

// Orders the facet's vertices counterclockwise about the outward normal and
// returns the polygon area ((n-1)-volume).
inline double order_facet(const std::vector<Vec>& verts, std::vector<int>& idx,
                          const Vec& normal, int dim) {
  if (dim == 2) {
    if (idx.size() != 2) return 0.0;
    Vec tangent(2);
    tangent << -normal[1], normal[0];
    if (verts[idx[0]].dot(tangent) > verts[idx[1]].dot(tangent)) std::swap(idx[0], idx[1]);
    return (verts[idx[0]] - verts[idx[1]]).norm();
  }
  if (idx.size() < 3) return 0.0;
  Eigen::Vector3d nn(normal[0], normal[1], normal[2]);
  Eigen::Vector3d e = nn.unitOrthogonal();
  Eigen::Vector3d f = nn.cross(e);
  Vec center = Vec::Zero(3);
  for (int i : idx) center += verts[i];
  center /= double(idx.size());
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    Vec da = verts[a] - center, db = verts[b] - center;
    double aa = std::atan2(da.dot(Vec(f)), da.dot(Vec(e)));
    double ab = std::atan2(db.dot(Vec(f)), db.dot(Vec(e)));
    return aa < ab;
  });
  double area2 = 0.0;
  for (size_t i = 1; i + 1 < idx.size(); ++i) {
    Eigen::Vector3d u(verts[idx[i]] - verts[idx[0]]);
    Eigen::Vector3d v(verts[idx[i + 1]] - verts[idx[0]]);
    area2 += u.cross(v).dot(nn);
  }
  if (area2 < 0) {
    std::reverse(idx.begin(), idx.end());
    area2 = -area2;
  }
  return 0.5 * area2;
}

inline void finalize_metrics(Polytope* P) {
  const int n = P->dim;
  // volume via (1/n) sum h_i A_i (translation invariant because the facet
  // normals of a closed body satisfy sum A_i u_i = 0)
  P->volume = 0.0;
  for (size_t i = 0; i < P->normals.size(); ++i)
    P->volume += P->supports[i] * P->areas[i];
  P->volume /= double(n);

  // solid centroid by fanning from the vertex mean
  Vec x0 = Vec::Zero(n);
  for (const Vec& v : P->vertices) x0 += v;
  if (!P->vertices.empty()) x0 /= double(P->vertices.size());
  Vec acc = Vec::Zero(n);
  double vol = 0.0;
  if (n == 2) {
    for (size_t fi = 0; fi < P->facets.size(); ++fi) {
      const auto& e = P->facets[fi];
      if (e.size() != 2) continue;
      const Vec &a = P->vertices[e[0]], &b = P->vertices[e[1]];
      double cross = (a[0] - x0[0]) * (b[1] - x0[1]) - (a[1] - x0[1]) * (b[0] - x0[0]);
      double v = 0.5 * cross;
      acc += v * (x0 + a + b) / 3.0;
      vol += v;
    }
  } else {
    for (size_t fi = 0; fi < P->facets.size(); ++fi) {
      const auto& poly = P->facets[fi];
      for (size_t i = 1; i + 1 < poly.size(); ++i) {
        Eigen::Vector3d u(P->vertices[poly[0]] - x0);
        Eigen::Vector3d v(P->vertices[poly[i]] - x0);
        Eigen::Vector3d w(P->vertices[poly[i + 1]] - x0);
        double vt = u.cross(v).dot(w) / 6.0;
        acc += vt * (x0 + P->vertices[poly[0]] + P->vertices[poly[i]] +
                     P->vertices[poly[i + 1]]) / 4.0;
        vol += vt;
      }
    }
  }
  P->centroid = (std::abs(vol) > 1e-300) ? Vec(acc / vol) : x0;
}

}  // namespace detail

/// Interior Chebyshev point of { x : <u_i, x> <= h_i }: the center of the
/// largest inscribed ball, found by a small LP. Throws if the intersection
/// is unbounded or has empty interior.
inline std::pair<Vec, double> chebyshev_center(const std::vector<Vec>& normals,
                                               const std::vector<double>& h) {
  const int n = int(normals[0].size());
  const int m = int(normals.size());
  Mat A(m, n + 1);
  Vec b(m), c = Vec::Zero(n + 1);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(n) = -normals[i].transpose();
    A(i, n) = -1.0;
    b[i] = -h[i];
  }
  c[n] = -1.0;  // maximize the inscribed radius
  LpResult res = lp_min_free(A, b, c);
  if (res.status == LpStatus::Unbounded)
    throw std::invalid_argument("halfspace_intersection: unbounded intersection");
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("halfspace_intersection: interior point LP failed");
  Vec x = res.x.head(n);
  double r = res.x[n];
  if (r <= 1e-12) throw std::invalid_argument("halfspace_intersection: empty interior");
  return {x, r};
}

/// Vertex/facet structure of { x : <u_i, x> <= h_i } by polar duality:
/// after shifting an interior point to the origin, the convex hull of the
/// dual points u_i / h_i is computed and each dual hull facet yields a
/// primal vertex.
inline Polytope halfspace_intersection(const std::vector<Vec>& normals,
                                       const std::vector<double>& supports) {
  if (normals.empty() || normals.size() != supports.size())
    throw std::invalid_argument("halfspace_intersection: bad input");
  const int n = int(normals[0].size());
  if (n != 2 && n != 3)
    throw std::invalid_argument("halfspace_intersection: only n=2 and n=3");
  for (const Vec& u : normals)
    if (std::abs(u.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("halfspace_intersection: normals must be unit vectors");

  auto [x0, inradius] = chebyshev_center(normals, supports);
  const int m = int(normals.size());
  std::vector<double> hs(m);
  for (int i = 0; i < m; ++i) hs[i] = supports[i] - normals[i].dot(x0);

  std::vector<Vec> dual(m);
  for (int i = 0; i < m; ++i) dual[i] = normals[i] / hs[i];

  // candidate vertices from dual hull facets
  std::vector<Vec> verts;
  double geom_scale = 1e-300;
  auto push_vertex = [&](const Vec& v) {
    for (const Vec& w : verts)
      if ((w - v).norm() < 1e-9 * std::max(1.0, geom_scale)) return;
    verts.push_back(v);
    geom_scale = std::max(geom_scale, v.cwiseAbs().maxCoeff());
  };

  if (n == 3) {
    auto tris = hull3d(dual);
    for (const auto& t : tris) {
      Mat M(3, 3);
      Vec rhs(3);
      for (int r = 0; r < 3; ++r) {
        M.row(r) = normals[t[r]].transpose();
        rhs[r] = hs[t[r]];
      }
      Eigen::FullPivLU<Mat> lu(M);
      if (lu.rank() < 3) continue;
      push_vertex(lu.solve(rhs));
    }
  } else {
    auto ring = hull2d(dual);
    int k = int(ring.size());
    for (int e = 0; e < k; ++e) {
      int i = ring[e], j = ring[(e + 1) % k];
      Mat M(2, 2);
      Vec rhs(2);
      M.row(0) = normals[i].transpose();
      M.row(1) = normals[j].transpose();
      rhs << hs[i], hs[j];
      Eigen::FullPivLU<Mat> lu(M);
      if (lu.rank() < 2) continue;
      push_vertex(lu.solve(rhs));
    }
  }

  // drop candidates violating any halfspace (guards against slivers)
  double vtol = 1e-8 * std::max(1.0, geom_scale);
  std::vector<Vec> clean;
  for (const Vec& v : verts) {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      if (normals[i].dot(v) > hs[i] + vtol) ok = false;
    if (ok) clean.push_back(v);
  }

  Polytope P;
  P.dim = n;
  P.vertices = clean;
  for (auto& v : P.vertices) v += x0;

  double ftol = 1e-8 * std::max(1.0, geom_scale);
  for (int i = 0; i < m; ++i) {
    std::vector<int> on;
    for (size_t vi = 0; vi < clean.size(); ++vi)
      if (normals[i].dot(clean[vi]) > hs[i] - ftol) on.push_back(int(vi));
    double area = detail::order_facet(P.vertices, on, normals[i], n);
    if (area > 1e-12 * std::max(1.0, geom_scale)) {
      P.normals.push_back(normals[i]);
      P.supports.push_back(supports[i]);
      P.facets.push_back(on);
      P.areas.push_back(area);
    }
  }
  if (P.vertices.size() < size_t(n + 1) || P.facets.size() < size_t(n + 1))
    throw std::runtime_error("halfspace_intersection: degenerate intersection");
  detail::finalize_metrics(&P);
  return P;
}

/// Convex hull of points as a Polytope, with coplanar hull triangles merged
/// into single facets.
inline Polytope polytope_from_vertices(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("polytope_from_vertices: no points");
  const int n = int(points[0].size());
  Polytope P;
  P.dim = n;
  double scale = 1e-300;
  for (const Vec& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());

  if (n == 2) {
    auto ring = hull2d(points);
    for (int i : ring) P.vertices.push_back(points[i]);
    int k = int(P.vertices.size());
    for (int e = 0; e < k; ++e) {
      const Vec &a = P.vertices[e], &b = P.vertices[(e + 1) % k];
      Vec d = b - a;
      double len = d.norm();
      if (len < 1e-14 * scale) continue;
      Vec nrm(2);
      nrm << d[1] / len, -d[0] / len;  // outward for a CCW ring
      P.normals.push_back(nrm);
      P.supports.push_back(nrm.dot(a));
      P.facets.push_back({e, (e + 1) % k});
      P.areas.push_back(len);
    }
  } else {
    auto tris = hull3d(points);
    // collect used vertices
    std::vector<int> remap(points.size(), -1);
    for (const auto& t : tris)
      for (int v : t)
        if (remap[v] < 0) {
          remap[v] = int(P.vertices.size());
          P.vertices.push_back(points[v]);
        }
    // group triangles by supporting plane
    struct Group {
      Vec normal;
      double offset;
      std::vector<int> verts;
    };
    std::vector<Group> groups;
    for (const auto& t : tris) {
      Eigen::Vector3d a(points[t[0]]), b(points[t[1]]), c(points[t[2]]);
      Eigen::Vector3d nn = (b - a).cross(c - a);
      double len = nn.norm();
      if (len < 1e-14 * scale * scale) continue;
      nn /= len;
      double off = nn.dot(a);
      int gi = -1;
      for (size_t g = 0; g < groups.size(); ++g) {
        if ((groups[g].normal - Vec(nn)).norm() < 1e-7 &&
            std::abs(groups[g].offset - off) < 1e-7 * std::max(1.0, scale)) {
          gi = int(g);
          break;
        }
      }
      if (gi < 0) {
        groups.push_back({Vec(nn), off, {}});
        gi = int(groups.size()) - 1;
      }
      for (int v : t) {
        int rv = remap[v];
        if (std::find(groups[gi].verts.begin(), groups[gi].verts.end(), rv) ==
            groups[gi].verts.end())
          groups[gi].verts.push_back(rv);
      }
    }
    for (auto& g : groups) {
      std::vector<int> idx = g.verts;
      double area = detail::order_facet(P.vertices, idx, g.normal, 3);
      if (area <= 1e-14 * scale * scale) continue;
      P.normals.push_back(g.normal);
      P.supports.push_back(g.offset);
      P.facets.push_back(idx);
      P.areas.push_back(area);
    }
  }
  detail::finalize_metrics(&P);
  return P;
}

// ---------------------------------------------------------------------------
// Reference bodies.
// ---------------------------------------------------------------------------
struct BodySpec {
  enum class Kind { Ball, Ellipsoid, PolytopeH, PolytopeV, RegularPolygon, Pyramid };
  Kind kind = Kind::Ball;
  int dim = 3;
  double radius = 1.0;                 // Ball
  Vec semi_axes;                       // Ellipsoid
  std::vector<Vec> normals;            // PolytopeH
  std::vector<double> supports;        // PolytopeH
  std::vector<Vec> vertices;           // PolytopeV
  int polygon_sides = 5;               // RegularPolygon
  double base_side = 1.0, height = 1.0;  // Pyramid

  static BodySpec ball(double r, int n = 3) {
    BodySpec s;
    s.kind = Kind::Ball;
    s.radius = r;
    s.dim = n;
    return s;
  }
  static BodySpec ellipsoid(double a, double b, double c) {
    BodySpec s;
    s.kind = Kind::Ellipsoid;
    s.dim = 3;
    s.semi_axes = Vec(3);
    s.semi_axes << a, b, c;
    return s;
  }
  static BodySpec regular_polygon(int m) {
    BodySpec s;
    s.kind = Kind::RegularPolygon;
    s.dim = 2;
    s.polygon_sides = m;
    return s;
  }
  static BodySpec pyramid(double base = 1.0, double height = 1.0) {
    BodySpec s;
    s.kind = Kind::Pyramid;
    s.dim = 3;
    s.base_side = base;
    s.height = height;
    return s;
  }
  static BodySpec polytope_h(std::vector<Vec> normals, std::vector<double> supports) {
    BodySpec s;
    s.kind = Kind::PolytopeH;
    s.dim = int(normals.at(0).size());
    s.normals = std::move(normals);
    s.supports = std::move(supports);
    return s;
  }
  static BodySpec polytope_v(std::vector<Vec> vertices) {
    BodySpec s;
    s.kind = Kind::PolytopeV;
    s.dim = int(vertices.at(0).size());
    s.vertices = std::move(vertices);
    return s;
  }
  static BodySpec cube(double half_side = 1.0) {
    std::vector<Vec> nrm;
    std::vector<double> h;
    for (int i = 0; i < 3; ++i) {
      nrm.push_back(Vec::Unit(3, i));
      h.push_back(half_side);
      nrm.push_back(-Vec::Unit(3, i));
      h.push_back(half_side);
    }
    return polytope_h(nrm, h);
  }
};

/// Deterministic, nearly uniform sphere sample (Fibonacci spiral).
inline std::vector<Vec> fibonacci_sphere(int count) {
  std::vector<Vec> out;
  out.reserve(count);
  double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    Vec u(3);
    u << r * std::cos(phi), r * std::sin(phi), z;
    out.push_back(u);
  }
  return out;
}

/// Polytope realization of a body spec. Smooth bodies enter as fine inscribed
/// polytopes; `resolution` is the boundary sample count for them.
inline Polytope reference_body(const BodySpec& spec, int resolution = 1500) {
  switch (spec.kind) {
    case BodySpec::Kind::Ball: {
      if (spec.dim == 2) {
        std::vector<Vec> pts;
        int m = std::max(16, resolution);
        for (int i = 0; i < m; ++i) {
          double t = 2 * kPi * i / m;
          Vec p(2);
          p << spec.radius * std::cos(t), spec.radius * std::sin(t);
          pts.push_back(p);
        }
        return polytope_from_vertices(pts);
      }
      std::vector<Vec> pts = fibonacci_sphere(std::max(64, resolution));
      for (auto& p : pts) p *= spec.radius;
      return polytope_from_vertices(pts);
    }
    case BodySpec::Kind::Ellipsoid: {
      std::vector<Vec> pts = fibonacci_sphere(std::max(64, resolution));
      for (auto& p : pts)
        for (int i = 0; i < 3; ++i) p[i] *= spec.semi_axes[i];
      return polytope_from_vertices(pts);
    }
    case BodySpec::Kind::PolytopeH:
      return halfspace_intersection(spec.normals, spec.supports);
    case BodySpec::Kind::PolytopeV:
      return polytope_from_vertices(spec.vertices);
    case BodySpec::Kind::RegularPolygon: {
      int m = spec.polygon_sides;
      if (m < 3) throw std::invalid_argument("reference_body: polygon needs m >= 3");
      // facet lengths 2 pi / m, so the apothem is (pi/m) / tan(pi/m)
      double apothem = (kPi / m) / std::tan(kPi / m);
      std::vector<Vec> nrm;
      std::vector<double> h(m, apothem);
      for (int j = 0; j < m; ++j) {
        double t = 2 * kPi * j / m;
        Vec u(2);
        u << std::cos(t), std::sin(t);
        nrm.push_back(u);
      }
      return halfspace_intersection(nrm, h);
    }
    case BodySpec::Kind::Pyramid: {
      double b = 0.5 * spec.base_side;
      std::vector<Vec> pts;
      for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
          Vec p(3);
          p << sx * b, sy * b, 0.0;
          pts.push_back(p);
        }
      Vec apex(3);
      apex << 0.0, 0.0, spec.height;
      pts.push_back(apex);
      return polytope_from_vertices(pts);
    }
  }
  throw std::invalid_argument("reference_body: unknown spec");
}

/// Surface area measure. Polytopes contribute exact facet atoms; balls are
/// discretized by quadrature (scaled spherical Lebesgue); ellipsoids go
/// through a fine inscribed polytope.
inline DiscreteMeasure surface_area_measure(const Polytope& P) {
  DiscreteMeasure mu(P.dim);
  for (size_t i = 0; i < P.normals.size(); ++i) mu.add(P.normals[i], P.areas[i]);
  return mu;
}

inline DiscreteMeasure surface_area_measure(const BodySpec& spec, int resolution = 1500) {
  if (spec.kind == BodySpec::Kind::Ball) {
    int degree = std::max(16, std::min(60, resolution / 12));
    double scale = std::pow(spec.radius, spec.dim - 1);
    return discretize_sphere(spec.dim, scale, degree);
  }
  return surface_area_measure(reference_body(spec, resolution));
}

/// Surface area measure of a lower-dimensional convex body with the given
/// (n-1)-volume S and unit normal u: S (delta_u + delta_{-u}).
inline DiscreteMeasure lower_dimensional_measure(const Vec& u, double S) {
  DiscreteMeasure mu(int(u.size()));
  mu.add(u, S);
  mu.add(-u, S);
  return mu;
}

// ---------------------------------------------------------------------------
// Hausdorff metrics via support functions on direction grids with local
// refinement; the translative variant additionally optimizes the shift by a
// small LP. Both are grid approximations from below, with two refinement
// rounds around the current maximizer.
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<Vec> base_direction_grid(int n) {
  if (n == 2) {
    std::vector<Vec> dirs;
    int m = 720;
    for (int i = 0; i < m; ++i) {
      double t = 2 * kPi * i / m;
      Vec u(2);
      u << std::cos(t), std::sin(t);
      dirs.push_back(u);
    }
    return dirs;
  }
  // subdivided icosahedron, ~0.07 rad spacing
  double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {
      {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
      {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int round = 0; round < 3; ++round) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d p = (v[a] + v[b]).normalized();
      v.push_back(p);
      int id = int(v.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> nf;
    for (auto& t : f) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      nf.push_back({t[0], ab, ca});
      nf.push_back({t[1], bc, ab});
      nf.push_back({t[2], ca, bc});
      nf.push_back({ab, bc, ca});
    }
    f.swap(nf);
  }
  std::vector<Vec> dirs;
  dirs.reserve(v.size());
  for (const auto& p : v) {
    Vec u(3);
    u << p[0], p[1], p[2];
    dirs.push_back(u);
  }
  return dirs;
}

inline std::vector<Vec> cap_samples(const Vec& center, double radius, int count, int n) {
  std::vector<Vec> out;
  if (n == 2) {
    double t0 = std::atan2(center[1], center[0]);
    for (int i = 0; i < count; ++i) {
      double t = t0 + radius * (2.0 * i / (count - 1) - 1.0);
      Vec u(2);
      u << std::cos(t), std::sin(t);
      out.push_back(u);
    }
    return out;
  }
  Eigen::Vector3d c(center[0], center[1], center[2]);
  Eigen::Vector3d e = c.unitOrthogonal(), f = c.cross(e);
  int rings = 4;
  out.push_back(center);
  for (int r = 1; r <= rings; ++r) {
    double rho = radius * r / rings;
    int per = std::max(6, count / rings);
    for (int i = 0; i < per; ++i) {
      double t = 2 * kPi * i / per;
      Eigen::Vector3d p =
          std::cos(rho) * c + std::sin(rho) * (std::cos(t) * e + std::sin(t) * f);
      Vec u(3);
      u << p[0], p[1], p[2];
      out.push_back(u);
    }
  }
  return out;
}

}  // namespace detail

/// sup |h_K - h_L| over a refined direction grid.
inline double hausdorff(const Polytope& K, const Polytope& L) {
  std::vector<Vec> dirs = detail::base_direction_grid(K.dim);
  double best = 0.0;
  Vec arg = dirs[0];
  auto scan = [&](const std::vector<Vec>& ds) {
    for (const Vec& u : ds) {
      double v = std::abs(K.support(u) - L.support(u));
      if (v > best) {
        best = v;
        arg = u;
      }
    }
  };
  scan(dirs);
  double radius = (K.dim == 2) ? 0.01 : 0.08;
  for (int round = 0; round < 2; ++round) {
    scan(detail::cap_samples(arg, radius, 48, K.dim));
    radius /= 6.0;
  }
  return best;
}

/// min over translations x of sup_d |h_K(u_d) - h_L(u_d) - <x, u_d>|,
/// solved as an LP over the grid and refined around the maximizer.
inline double translative_hausdorff(const Polytope& K, const Polytope& L) {
  const int n = K.dim;
  std::vector<Vec> dirs = detail::base_direction_grid(n);
  Vec x = Vec::Zero(n);
  double t = 0.0;
  for (int round = 0; round < 3; ++round) {
    const int m = int(dirs.size());
    Mat A(2 * m, n + 1);
    Vec b(2 * m), c = Vec::Zero(n + 1);
    for (int i = 0; i < m; ++i) {
      double g = K.support(dirs[i]) - L.support(dirs[i]);
      A.row(2 * i).head(n) = dirs[i].transpose();
      A(2 * i, n) = 1.0;
      b[2 * i] = g;
      A.row(2 * i + 1).head(n) = -dirs[i].transpose();
      A(2 * i + 1, n) = 1.0;
      b[2 * i + 1] = -g;
    }
    c[n] = 1.0;
    LpResult res = lp_min_free(A, b, c);
    if (res.status != LpStatus::Optimal)
      throw std::runtime_error("translative_hausdorff: LP failed");
    x = res.x.head(n);
    t = res.x[n];
    if (round == 2) break;
    // refine around the residual maximizer
    Vec worst = dirs[0];
    double wbest = -1.0;
    for (const Vec& u : dirs) {
      double v = std::abs(K.support(u) - L.support(u) - x.dot(u));
      if (v > wbest) {
        wbest = v;
        worst = u;
      }
    }
    double radius = ((n == 2) ? 0.01 : 0.08) / std::pow(6.0, round);
    auto extra = detail::cap_samples(worst, radius, 48, n);
    dirs.insert(dirs.end(), extra.begin(), extra.end());
  }
  return t;
}

// ---------------------------------------------------------------------------
// Inclusion radii from the rank-2 surface tensor: with S the surface area and
// lambda_min the smallest eigenvalue of the coefficient matrix of Phi^2,
//     R = S / (4 pi lambda_min) (S / omega_n)^{1/(n-1)},
//     r = 2 pi lambda_min / ((n+1) (4R)^{n-2}),
// and r B^n (subset) K - centroid (subset) R B^n.
// ---------------------------------------------------------------------------
struct InclusionRadii {
  double r = 0.0;
  double R = 0.0;
};

inline InclusionRadii inclusion_radii(const SymTensor& phi2, double surface_area) {
  if (phi2.rank != 2) throw std::invalid_argument("inclusion_radii: need a rank-2 tensor");
  const int n = phi2.n;
  Eigen::SelfAdjointEigenSolver<Mat> es(phi2.as_matrix());
  double lmin = es.eigenvalues()[0];
  if (lmin <= 0.0)
    throw std::invalid_argument("inclusion_radii: tensor not positive definite");
  InclusionRadii out;
  out.R = surface_area / (4.0 * kPi * lmin) *
          std::pow(surface_area / sphere_area(n), 1.0 / (n - 1));
  out.r = 2.0 * kPi * lmin / ((n + 1) * std::pow(4.0 * out.R, n - 2));
  return out;
}

// ---------------------------------------------------------------------------
// OFF mesh I/O.
// ---------------------------------------------------------------------------
inline void write_off(const Polytope& P, std::ostream& os) {
  os << "OFF\n";
  if (P.dim == 2) {
    // planar polygon (or segment) embedded at z = 0, single face
    os << P.vertices.size() << " 1 0\n";
    std::vector<int> ring;
    if (P.vertices.size() >= 3) {
      ring = hull2d(P.vertices);
    } else {
      for (size_t i = 0; i < P.vertices.size(); ++i) ring.push_back(int(i));
    }
    for (const Vec& v : P.vertices) os << v[0] << " " << v[1] << " 0\n";
    os << ring.size();
    for (int i : ring) os << " " << i;
    os << "\n";
    return;
  }
  os << P.vertices.size() << " " << P.facets.size() << " 0\n";
  for (const Vec& v : P.vertices) os << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& f : P.facets) {
    os << f.size();
    for (int i : f) os << " " << i;
    os << "\n";
  }
}

inline void write_off(const Polytope& P, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_off: cannot open " + path);
  os.precision(17);
  write_off(P, os);
}

/// Reads an OFF mesh and rebuilds the polytope as the hull of its vertices.
inline Polytope read_off(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_off: cannot open " + path);
  std::string tok;
  is >> tok;
  if (tok != "OFF") throw std::runtime_error("read_off: missing OFF header");
  long nv = 0, nf = 0, ne = 0;
  is >> nv >> nf >> ne;
  if (!is || nv < 3) throw std::runtime_error("read_off: bad vertex count");
  std::vector<Vec> pts;
  pts.reserve(nv);
  bool planar = true;
  for (long i = 0; i < nv; ++i) {
    Vec p(3);
    is >> p[0] >> p[1] >> p[2];
    if (std::abs(p[2]) > 1e-12) planar = false;
    pts.push_back(p);
  }
  if (!is) throw std::runtime_error("read_off: truncated vertex list");
  if (planar) {
    for (auto& p : pts) p.conservativeResize(2);
    return polytope_from_vertices(pts);
  }
  return polytope_from_vertices(pts);
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_BODIES_HPP
