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

#include "shapetensor/measures.hpp"

using namespace shapetensor;

namespace {

DiscreteMeasure cube_measure() {
  DiscreteMeasure mu(3);
  for (int i = 0; i < 3; ++i) {
    mu.add(Vec::Unit(3, i), 1.0);
    mu.add(-Vec::Unit(3, i), 1.0);
  }
  return mu;
}

DiscreteMeasure random_measure(int n, int count, Rng& rng) {
  DiscreteMeasure mu(n);
  for (int i = 0; i < count; ++i) mu.add(rng.unit_vector(n), rng.uniform(0.1, 1.5));
  return mu;
}

}  // namespace

TEST_CASE("first moment and moment matrix of an antipodal pair") {
  Rng rng(3);
  Vec u = rng.unit_vector(3);
  DiscreteMeasure mu(3);
  double a = 1.7;
  mu.add(u, a);
  mu.add(-u, a);
  CHECK(first_moment(mu).norm() < 1e-14);
  MomentMatrix mm = moment_matrix(mu);
  CHECK((mm.M - 2 * a * u * u.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(mm.eigenvalues[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(mm.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(mm.eigenvalues[2] == Catch::Approx(2 * a));
}

TEST_CASE("cube measure moments") {
  MomentMatrix mm = moment_matrix(cube_measure());
  CHECK((mm.M - 2 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("moment matrix is positive semidefinite") {
  Rng rng(7);
  DiscreteMeasure mu = random_measure(3, 9, rng);
  MomentMatrix mm = moment_matrix(mu);
  for (int t = 0; t < 100; ++t) {
    Vec z = rng.unit_vector(3);
    CHECK(z.dot(mm.M * z) >= -1e-14);
  }
}

TEST_CASE("classification cases") {
  CHECK(classify(cube_measure()).tag == MeasureClassTag::FullDim);

  DiscreteMeasure seg(3);
  seg.add(Vec::Unit(3, 2), 3.0);
  seg.add(-Vec::Unit(3, 2), 3.0);
  MeasureClass c = classify(seg);
  CHECK(c.tag == MeasureClassTag::RankOne);
  CHECK(std::abs(std::abs(c.axis[2]) - 1.0) < 1e-12);
  CHECK(c.surface_area == Catch::Approx(3.0));

  // two positive and one zero eigenvalue: not a surface area measure
  DiscreteMeasure planar(3);
  planar.add(Vec::Unit(3, 0), 1.0);
  planar.add(-Vec::Unit(3, 0), 1.0);
  planar.add(Vec::Unit(3, 1), 1.0);
  planar.add(-Vec::Unit(3, 1), 1.0);
  CHECK(classify(planar).tag == MeasureClassTag::NotSurfaceArea);

  // nonzero first moment
  DiscreteMeasure off(3);
  off.add(Vec::Unit(3, 0), 1.0);
  CHECK(classify(off).tag == MeasureClassTag::NotSurfaceArea);

  DiscreteMeasure zero(3);
  CHECK(classify(zero).tag == MeasureClassTag::Zero);
}

TEST_CASE("dudley of identical measures is zero") {
  Rng rng(11);
  DiscreteMeasure mu = random_measure(3, 6, rng);
  CHECK(dudley(mu, mu) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("dudley of antipodal diracs") {
  // hand-solved two-point LP: optimum at s = t = 1/2, value 1
  Vec e1 = Vec::Unit(3, 0);
  CHECK(dudley(DiscreteMeasure::dirac(e1), DiscreteMeasure::dirac(-e1)) ==
        Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("dudley respects nearby atoms") {
  // two diracs at angular distance d < 2/3: optimal f is the distance
  // function ramp, value |x - y| (Lipschitz part dominates)
  Vec a(2), b(2);
  double ang = 0.3;
  a << 1, 0;
  b << std::cos(ang), std::sin(ang);
  double d = (a - b).norm();
  CHECK(dudley(DiscreteMeasure::dirac(a), DiscreteMeasure::dirac(b)) ==
        Catch::Approx(d / (1 + d / 2)).margin(1e-9));
}

TEST_CASE("dudley homogeneity under mass scaling") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    DiscreteMeasure mu = random_measure(3, 4, rng), nu = random_measure(3, 4, rng);
    double base = dudley(mu, nu);
    double a = rng.uniform(0.2, 1.0);
    DiscreteMeasure am(3), an(3);
    for (int i = 0; i < mu.size(); ++i) am.add(mu.atoms[i], a * mu.weights[i]);
    for (int i = 0; i < nu.size(); ++i) an.add(nu.atoms[i], a * nu.weights[i]);
    CHECK(dudley(am, an) == Catch::Approx(a * base).margin(1e-8));
  }
}

TEST_CASE("dudley triangle inequality") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    int n = (t % 2 == 0) ? 2 : 3;
    DiscreteMeasure a = random_measure(n, 3, rng), b = random_measure(n, 3, rng),
                    c = random_measure(n, 3, rng);
    double ab = dudley(a, b), bc = dudley(b, c), ac = dudley(a, c);
    CHECK(ac <= ab + bc + 1e-8);
    CHECK(ab == Catch::Approx(dudley(b, a)).margin(1e-9));
  }
}

TEST_CASE("dudley bounded by total masses") {
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    DiscreteMeasure mu = random_measure(3, 4, rng), nu = random_measure(3, 5, rng);
    CHECK(dudley(mu, nu) <= mu.mass() + nu.mass() + 1e-9);
  }
}

TEST_CASE("sphere discretization moments") {
  DiscreteMeasure sigma = discretize_sphere(3, 1.0, 4);
  CHECK(sigma.mass() == Catch::Approx(4 * kPi).margin(1e-12));
  CHECK(first_moment(sigma).norm() < 1e-12);
  MomentMatrix mm = moment_matrix(sigma);
  CHECK((mm.M - (4 * kPi / 3) * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  DiscreteMeasure circ = discretize_sphere(2, 2.5, 4);
  CHECK(circ.mass() == Catch::Approx(2.5 * 2 * kPi).margin(1e-12));
}
