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

#ifndef SHAPETENSOR_HULL_HPP
#define SHAPETENSOR_HULL_HPP

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"

namespace shapetensor {

/// Indices of the convex hull of 2D points in counterclockwise order
/// (Andrew monotone chain).
inline std::vector<int> hull2d(const std::vector<Vec>& pts) {
  int n = int(pts.size());
  if (n < 3) throw std::invalid_argument("hull2d: need at least 3 points");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  double eps = 1e-12 * scale * scale;
  std::vector<int> h(2 * n);
  int k = 0;
  for (int ii = 0; ii < n; ++ii) {
    int i = order[ii];
    while (k >= 2 && cross(h[k - 2], h[k - 1], i) <= eps) --k;
    h[k++] = i;
  }
  int lower = k + 1;
  for (int ii = n - 2; ii >= 0; --ii) {
    int i = order[ii];
    while (k >= lower && cross(h[k - 2], h[k - 1], i) <= eps) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  if (int(h.size()) < 3) throw std::runtime_error("hull2d: degenerate point set");
  return h;
}

namespace detail {
struct HullFace {
  int a, b, c;
  Eigen::Vector3d normal;  // unit outward normal
  double offset;           // <normal, x> = offset on the face plane
  bool alive = true;
};
}  // namespace detail

/// Outward-oriented triangles of the convex hull of 3D points. Incremental
/// insertion with epsilon visibility tests; suited to the desk-scale inputs
/// here (point clouds up to a few thousand).
inline std::vector<std::array<int, 3>> hull3d(const std::vector<Vec>& pts_in) {
  using Eigen::Vector3d;
  const int n = int(pts_in.size());
  if (n < 4) throw std::invalid_argument("hull3d: need at least 4 points");
  std::vector<Vector3d> pts(n);
  double scale = 1e-300;
  for (int i = 0; i < n; ++i) {
    pts[i] = Vector3d(pts_in[i][0], pts_in[i][1], pts_in[i][2]);
    scale = std::max(scale, pts[i].cwiseAbs().maxCoeff());
  }
  const double eps = 1e-12 * scale;

  // initial simplex from extreme points
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i][0] < pts[i0][0]) i0 = i;
  int i1 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).norm();
    if (d > best) { best = d; i1 = i; }
  }
  if (i1 < 0) throw std::runtime_error("hull3d: all points coincide");
  int i2 = -1;
  best = eps * (pts[i1] - pts[i0]).norm();
  for (int i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).cross(pts[i1] - pts[i0]).norm();
    if (d > best) { best = d; i2 = i; }
  }
  if (i2 < 0) throw std::runtime_error("hull3d: points are collinear");
  Vector3d nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  int i3 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    double d = std::abs(nrm.dot(pts[i] - pts[i0]));
    if (d > best) { best = d; i3 = i; }
  }
  if (i3 < 0) throw std::runtime_error("hull3d: points are coplanar");

  std::vector<detail::HullFace> faces;
  Vector3d inside = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  auto add_face = [&](int a, int b, int c) {
    detail::HullFace f;
    f.a = a;
    f.b = b;
    f.c = c;
    Vector3d nn = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    double len = nn.norm();
    if (len < 1e-300) len = 1e-300;
    nn /= len;
    double off = nn.dot(pts[a]);
    if (nn.dot(inside) > off) {  // flip to point away from the interior
      std::swap(f.b, f.c);
      nn = -nn;
      off = nn.dot(pts[f.a]);
    }
    f.normal = nn;
    f.offset = off;
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    // visible faces
    bool any = false;
    for (const auto& f : faces)
      if (f.alive && f.normal.dot(pts[p]) - f.offset > eps) { any = true; break; }
    if (!any) continue;

    // horizon: directed edges of visible faces whose twin is invisible
    std::map<std::pair<int, int>, int> edge_count;
    auto visible = [&](const detail::HullFace& f) {
      return f.normal.dot(pts[p]) - f.offset > eps;
    };
    for (auto& f : faces) {
      if (!f.alive || !visible(f)) continue;
      int vs[3] = {f.a, f.b, f.c};
      for (int e = 0; e < 3; ++e) {
        int u = vs[e], v = vs[(e + 1) % 3];
        edge_count[{std::min(u, v), std::max(u, v)}]++;
      }
    }
    std::vector<std::pair<int, int>> horizon;
    for (auto& f : faces) {
      if (!f.alive || !visible(f)) continue;
      int vs[3] = {f.a, f.b, f.c};
      for (int e = 0; e < 3; ++e) {
        int u = vs[e], v = vs[(e + 1) % 3];
        if (edge_count[{std::min(u, v), std::max(u, v)}] == 1)
          horizon.push_back({u, v});  // keep orientation of the visible face
      }
    }
    for (auto& f : faces)
      if (f.alive && visible(f)) f.alive = false;
    for (auto& [u, v] : horizon) add_face(u, v, p);
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& f : faces)
    if (f.alive) out.push_back({f.a, f.b, f.c});
  return out;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_HULL_HPP
