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

#include "shapetensor/tensors.hpp"
#include "shapetensor/uniqueness.hpp"

using namespace shapetensor;

namespace {

std::vector<Vec> cube_normals() {
  std::vector<Vec> out;
  for (int i = 0; i < 3; ++i) {
    out.push_back(Vec::Unit(3, i));
    out.push_back(-Vec::Unit(3, i));
  }
  return out;
}

// maximum difference of per-degree harmonic blocks
double block_gap(const HarmonicVector& a, const HarmonicVector& b, int degree) {
  return (a.degree_block(degree) - b.degree_block(degree)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("cube certificate") {
  CertificatePolynomial p = build_certificate(cube_normals(), CertificateMode::FullDim);
  CHECK(p.degree == 6 - 3 + 2);
  for (const Vec& u : cube_normals()) CHECK(std::abs(p(u)) < 1e-10);
}

TEST_CASE("general-mode certificate for an antipodal pair") {
  Vec u(2);
  u << std::cos(0.4), std::sin(0.4);
  CertificatePolynomial p = build_certificate({u, Vec(-u)}, CertificateMode::General);
  CHECK(p.degree == 2);
  CHECK(std::abs(p(u)) < 1e-14);
  CHECK(std::abs(p(Vec(-u))) < 1e-14);
  for (int i = 0; i < 200; ++i) {
    double t = 0.4 + 2 * kPi * (i + 1) / 201.0;
    Vec w(2);
    w << std::cos(t), std::sin(t);
    if ((w - u).norm() > 1e-3 && (w + u).norm() > 1e-3) CHECK(p(w) > 0.0);
  }
}

TEST_CASE("pyramid certificate degree matches the uniqueness rank") {
  Polytope pyr = reference_body(BodySpec::pyramid());
  CertificatePolynomial p = build_certificate(pyr.normals, CertificateMode::FullDim);
  CHECK(p.degree == 4);  // m - n + 2 with m = 5 facets
  for (const Vec& u : pyr.normals) CHECK(std::abs(p(u)) < 1e-10);
}

TEST_CASE("certificate positivity away from the support") {
  Rng rng(307);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Vec> support;
    for (int i = 0; i < 7; ++i) support.push_back(rng.unit_vector(3));
    CertificatePolynomial p = build_certificate(support, CertificateMode::FullDim);
    double minval = std::numeric_limits<double>::infinity();
    auto far_from_support = [&](const Vec& w) {
      for (const Vec& s : support)
        if ((w - s).norm() < 1e-3) return false;
      return true;
    };
    std::vector<Vec> samples = fibonacci_sphere(100000);
    for (const Vec& w : samples)
      if (far_from_support(w)) minval = std::min(minval, p(w));
    CHECK(minval > 0.0);
    for (const Vec& s : support) CHECK(std::abs(p(s)) < 1e-10);
  }
}

TEST_CASE("affinely deficient support is rejected in full-dim mode") {
  std::vector<Vec> planar;
  for (int j = 0; j < 5; ++j) {
    double t = 2 * kPi * j / 5;
    Vec u(3);
    u << std::cos(t), std::sin(t), 0.0;
    planar.push_back(u);
  }
  CHECK_THROWS_AS(build_certificate(planar, CertificateMode::FullDim),
                  std::invalid_argument);
  CHECK_NOTHROW(build_certificate(planar, CertificateMode::General));
}

TEST_CASE("polygon and disc agree up to degree m-1") {
  for (int m : {3, 5, 8}) {
    CounterexamplePair pair = polygon_disc_pair(m);
    CHECK(pair.polytope_measure.mass() == Catch::Approx(2 * kPi));
    CHECK(pair.body_measure.mass() == Catch::Approx(2 * kPi));
    HarmonicBasis basis(2, m);
    HarmonicVector hp = harmonic_vector(pair.polytope_measure, basis, m);
    HarmonicVector hd = harmonic_vector(pair.body_measure, basis, m);
    for (int k = 0; k < m; ++k) CHECK(block_gap(hp, hd, k) < 1e-9);
    CHECK(block_gap(hp, hd, m) > 1e-2);
  }
}

TEST_CASE("polygon is not a translate of the disc") {
  Polytope poly = reference_body(BodySpec::regular_polygon(5));
  Polytope disc = reference_body(BodySpec::ball(1.0, 2), 1024);
  CHECK(translative_hausdorff(poly, disc) > 0.01);
}

TEST_CASE("cone lift of the square perimeter measure") {
  Polytope square = reference_body(BodySpec::regular_polygon(4));
  DiscreteMeasure per = surface_area_measure(square);
  double alpha = 0.5;
  DiscreteMeasure lifted = cone_lift(per, per.mass(), alpha);
  CHECK(lifted.size() == 5);
  CHECK(first_moment(lifted).norm() < 1e-12 * lifted.mass());
  CHECK(lifted.mass() == Catch::Approx((1 + alpha) * per.mass()));
  for (int i = 0; i < 4; ++i) CHECK(lifted.atoms[i][2] == Catch::Approx(alpha));
}

TEST_CASE("lift requires vanishing first moments") {
  DiscreteMeasure bad(2);
  bad.add(Vec::Unit(2, 0), 1.0);
  CHECK_THROWS_AS(cone_lift(bad, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("lifted counterexamples keep the agreement rank") {
  for (int m : {4, 6, 9}) {
    CounterexamplePair pair = counterexample_pair(3, m);
    CHECK(pair.polytope_measure.size() == m);
    CHECK(classify(pair.polytope_measure).tag == MeasureClassTag::FullDim);
    int top = m - 3 + 2;  // first rank where the pair must differ
    HarmonicBasis basis(3, top);
    HarmonicVector hp = harmonic_vector(pair.polytope_measure, basis, top);
    HarmonicVector hb = harmonic_vector(pair.body_measure, basis, top);
    for (int k = 0; k <= m - 3 + 1; ++k) CHECK(block_gap(hp, hb, k) < 1e-9);
    CHECK(block_gap(hp, hb, top) > 1e-4);
  }
}

TEST_CASE("two-dimensional counterexample ranks coincide with the polygon pair") {
  CounterexamplePair pair = counterexample_pair(2, 7);
  HarmonicBasis basis(2, 7);
  HarmonicVector hp = harmonic_vector(pair.polytope_measure, basis, 7);
  HarmonicVector hb = harmonic_vector(pair.body_measure, basis, 7);
  for (int k = 0; k <= 6; ++k) CHECK(block_gap(hp, hb, k) < 1e-9);
  CHECK(block_gap(hp, hb, 7) > 1e-3);
}
