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

#include <catch2/catch_amalgamated.hpp>

#include "shapetensor/minkowski.hpp"

using namespace shapetensor;

namespace {

Polytope random_polytope(int facets, Rng& rng) {
  while (true) {
    std::vector<Vec> nrm;
    std::vector<double> h;
    for (int i = 0; i < facets; ++i) {
      nrm.push_back(rng.unit_vector(3));
      h.push_back(rng.uniform(0.5, 1.5));
    }
    try {
      Polytope P = halfspace_intersection(nrm, h);
      if (int(P.normals.size()) >= 5) return P;
    } catch (const std::exception&) {
    }
  }
}

}  // namespace

TEST_CASE("merge atoms") {
  Vec e1 = Vec::Unit(3, 0);
  DiscreteMeasure mu(3);
  mu.add(e1, 1.0);
  mu.add(e1, 2.0);
  DiscreteMeasure merged = merge_atoms(mu);
  REQUIRE(merged.size() == 1);
  CHECK(merged.weights[0] == Catch::Approx(3.0));

  DiscreteMeasure close(3);
  close.add(e1, 1.0);
  Vec tilt(3);
  tilt << 1.0, 1e-9, 0.0;
  close.add(tilt.normalized(), 1.0);
  CHECK(merge_atoms(close).size() == 1);

  DiscreteMeasure anti(3);
  anti.add(e1, 1.0);
  anti.add(-e1, 1.0);
  CHECK(merge_atoms(anti).size() == 2);

  DiscreteMeasure withzero(3);
  withzero.add(e1, 1.0);
  withzero.add(Vec::Unit(3, 1), 0.0);
  CHECK(merge_atoms(withzero).size() == 1);
}

TEST_CASE("volume gradient equals facet areas") {
  Rng rng(211);
  for (int t = 0; t < 4; ++t) {
    Polytope P = random_polytope(10, rng);
    const auto& normals = P.normals;
    Vec h(normals.size());
    for (size_t i = 0; i < normals.size(); ++i) h[int(i)] = P.supports[i];
    double eps = 1e-6;
    for (size_t i = 0; i < normals.size(); ++i) {
      Vec hp = h, hm = h;
      hp[int(i)] += eps;
      hm[int(i)] -= eps;
      std::vector<double> hpv(hp.data(), hp.data() + hp.size());
      std::vector<double> hmv(hm.data(), hm.data() + hm.size());
      double vp = halfspace_intersection(normals, hpv).volume;
      double vm = halfspace_intersection(normals, hmv).volume;
      CHECK((vp - vm) / (2 * eps) == Catch::Approx(P.areas[i]).margin(1e-6));
    }
  }
}

TEST_CASE("cube measure reconstructs the cube") {
  DiscreteMeasure mu(3);
  for (int i = 0; i < 3; ++i) {
    mu.add(Vec::Unit(3, i), 4.0);
    mu.add(-Vec::Unit(3, i), 4.0);
  }
  Polytope out = mink_reconstruct(MinkProblem(mu));
  Polytope cube = reference_body(BodySpec::cube(1.0));
  CHECK(translative_hausdorff(out, cube) < 1e-6);
  CHECK(out.volume == Catch::Approx(8.0).margin(1e-6));
}

TEST_CASE("tetrahedron round trip") {
  Vec a(3), b(3), c(3), d(3);
  a << 1, 1, 1;
  b << 1, -1, -1;
  c << -1, 1, -1;
  d << -1, -1, 1;
  Polytope tet = polytope_from_vertices({a, b, c, d});
  Polytope out = mink_reconstruct(MinkProblem(surface_area_measure(tet)));
  CHECK(translative_hausdorff(out, tet) < 1e-6 * tet.diameter());
}

TEST_CASE("random round trips") {
  Rng rng(223);
  for (int t = 0; t < 8; ++t) {
    int facets = 8 + int(rng.uniform() * 22);
    Polytope P = random_polytope(facets, rng);
    Polytope out = mink_reconstruct(MinkProblem(surface_area_measure(P)));
    CHECK(translative_hausdorff(out, P) < 1e-5 * P.diameter());
  }
}

TEST_CASE("scale equivariance") {
  Rng rng(227);
  Polytope P = random_polytope(12, rng);
  DiscreteMeasure mu = surface_area_measure(P);
  DiscreteMeasure scaled(3);
  for (int i = 0; i < mu.size(); ++i) scaled.add(mu.atoms[i], 4.0 * mu.weights[i]);
  Polytope out1 = mink_reconstruct(MinkProblem(mu));
  Polytope out2 = mink_reconstruct(MinkProblem(scaled));
  // doubling the body multiplies facet areas by 2^{n-1} = 4
  Polytope doubled = out1;
  for (auto& v : doubled.vertices) v *= 2.0;
  for (auto& s : doubled.supports) s *= 2.0;
  CHECK(translative_hausdorff(out2, doubled) < 1e-6 * doubled.diameter());
}

TEST_CASE("planar 2d reconstruction") {
  Polytope poly = reference_body(BodySpec::regular_polygon(7));
  Polytope out = mink_reconstruct(MinkProblem(surface_area_measure(poly)));
  CHECK(translative_hausdorff(out, poly) < 1e-7);
}

TEST_CASE("rank-one measure is rejected") {
  DiscreteMeasure seg = lower_dimensional_measure(Vec::Unit(3, 2), 2.0);
  CHECK_THROWS_AS(mink_reconstruct(MinkProblem(seg)), std::invalid_argument);
}

TEST_CASE("non-closed measure is rejected") {
  DiscreteMeasure mu(3);
  mu.add(Vec::Unit(3, 0), 1.0);
  mu.add(Vec::Unit(3, 1), 1.0);
  mu.add(Vec::Unit(3, 2), 1.0);
  mu.add(-Vec::Unit(3, 0), 0.5);
  mu.add(-Vec::Unit(3, 1), 0.5);
  mu.add(-Vec::Unit(3, 2), 0.5);
  CHECK_THROWS_AS(mink_reconstruct(MinkProblem(mu)), std::invalid_argument);
}
