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

using namespace shapetensor;

namespace {

DiscreteMeasure random_measure(int n, int count, Rng& rng, bool centered = false) {
  DiscreteMeasure mu(n);
  for (int i = 0; i < count; ++i) mu.add(rng.unit_vector(n), rng.uniform(0.1, 2.0));
  if (centered) {
    // symmetrize so the first moments vanish exactly
    DiscreteMeasure sym(n);
    for (int i = 0; i < mu.size(); ++i) {
      sym.add(mu.atoms[i], 0.5 * mu.weights[i]);
      sym.add(-mu.atoms[i], 0.5 * mu.weights[i]);
    }
    return sym;
  }
  return mu;
}

}  // namespace

TEST_CASE("moment tensor of a dirac") {
  Vec e1 = Vec::Unit(3, 0);
  SymTensor T = moment_tensor(DiscreteMeasure::dirac(e1), 3);
  CHECK(T({0, 0, 0}) == Catch::Approx(1.0));
  for (int idx = 0; idx < T.layout().count(); ++idx)
    if (idx != T.layout().index_of({0, 0, 0})) CHECK(T.comps[idx] == 0.0);
}

TEST_CASE("odd moments of symmetric measures vanish") {
  Rng rng(5);
  for (int n : {2, 3}) {
    for (int t = 0; t < 5; ++t) {
      Vec u = rng.unit_vector(n);
      DiscreteMeasure mu(n);
      mu.add(u, 1.3);
      mu.add(-u, 1.3);
      for (int s : {1, 3, 5}) CHECK(moment_tensor(mu, s).max_abs() < 1e-14);
    }
  }
}

TEST_CASE("sphere second moments") {
  DiscreteMeasure sigma = discretize_sphere(3, 1.0, 6);
  SymTensor T = moment_tensor(sigma, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      CHECK(T({i, j}) == Catch::Approx(i == j ? 4 * kPi / 3 : 0.0).margin(1e-10));
}

TEST_CASE("surface tensors of the unit ball") {
  DiscreteMeasure sigma = discretize_sphere(3, 1.0, 8);
  SymTensor phi0 = surface_tensor(sigma, 0);
  CHECK(phi0.comps[0] == Catch::Approx(2 * kPi));
  SymTensor phi2 = surface_tensor(sigma, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      CHECK(phi2({i, j}) == Catch::Approx(i == j ? 1.0 / 6 : 0.0).margin(1e-12));
}

TEST_CASE("first-rank surface tensor vanishes for centered measures") {
  Rng rng(17);
  DiscreteMeasure mu = random_measure(3, 8, rng, true);
  CHECK(surface_tensor(mu, 1).max_abs() < 1e-14);
}

TEST_CASE("scaled surface tensor is the bare moment tensor") {
  Rng rng(23);
  DiscreteMeasure mu = random_measure(3, 6, rng);
  SymTensor m = moment_tensor(mu, 4);
  SymTensor s = scaled_surface_tensor(mu, 4);
  CHECK(s.scaled);
  CHECK((s.comps - m.comps).cwiseAbs().maxCoeff() == 0.0);
  SymTensor phi = surface_tensor(mu, 4);
  double factor = std::exp(log_factorial(4)) * sphere_area(5);
  CHECK((phi.comps * factor - m.comps).cwiseAbs().maxCoeff() < 1e-12 * m.max_abs());
}

TEST_CASE("trace of rank-2 moment tensor is total mass") {
  Rng rng(29);
  for (int n : {2, 3}) {
    DiscreteMeasure mu = random_measure(n, 7, rng);
    SymTensor T = moment_tensor(mu, 2);
    CHECK(T.trace().comps[0] == Catch::Approx(mu.mass()));
  }
}

TEST_CASE("trace chain constant on the ball") {
  // c(0,2) must map trace(Phi^2) = 1/2 back to Phi^0 = 2 pi for the unit ball.
  CHECK(trace_chain_constant(0, 2) == Catch::Approx(4 * kPi));
  DiscreteMeasure sigma = discretize_sphere(3, 1.0, 8);
  SymTensor phi2 = surface_tensor(sigma, 2);
  SymTensor phi0 = surface_tensor_from_chain(phi2, 0);
  CHECK(phi0.comps[0] == Catch::Approx(2 * kPi).margin(1e-10));
  // and the chain recovers the total-mass relation mass = omega_1 Phi^0
  CHECK(sphere_area(1) * phi0.comps[0] == Catch::Approx(sigma.mass()).margin(1e-9));
}

TEST_CASE("trace chain matches direct moments") {
  Rng rng(31);
  for (int n : {2, 3}) {
    DiscreteMeasure mu = random_measure(n, 12, rng);
    TensorSet ts = TensorSet::from_measure(mu, 6);
    for (int s : {0, 1, 2, 3, 4, 5, 6}) {
      SymTensor direct = surface_tensor(mu, s);
      SymTensor chained = ts.rank_tensor(s);
      double scale = std::max(1e-30, direct.max_abs());
      CHECK((direct.comps - chained.comps).cwiseAbs().maxCoeff() / scale < 1e-10);
    }
  }
}

TEST_CASE("moment tensor linearity") {
  Rng rng(37);
  DiscreteMeasure mu = random_measure(3, 5, rng), nu = random_measure(3, 4, rng);
  double a = 0.7, b = 1.9;
  DiscreteMeasure mix(3);
  for (int i = 0; i < mu.size(); ++i) mix.add(mu.atoms[i], a * mu.weights[i]);
  for (int i = 0; i < nu.size(); ++i) mix.add(nu.atoms[i], b * nu.weights[i]);
  SymTensor lhs = moment_tensor(mix, 3);
  SymTensor rhs = moment_tensor(mu, 3);
  rhs.comps = a * rhs.comps + b * moment_tensor(nu, 3).comps;
  CHECK((lhs.comps - rhs.comps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multilinear evaluation is symmetric") {
  Rng rng(41);
  DiscreteMeasure mu = random_measure(3, 5, rng);
  SymTensor T = moment_tensor(mu, 3);
  std::vector<Vec> args = {rng.unit_vector(3), rng.unit_vector(3), rng.unit_vector(3)};
  double ref = T.evaluate(args);
  std::swap(args[0], args[2]);
  CHECK(T.evaluate(args) == Catch::Approx(ref));
  std::swap(args[0], args[1]);
  CHECK(T.evaluate(args) == Catch::Approx(ref));
}

TEST_CASE("component counts") {
  for (int n : {2, 3})
    for (int s = 0; s <= 8; ++s)
      CHECK(MultiIndexLayout::get(n, s).count() == int(binomial(s + n - 1, n - 1)));
}

TEST_CASE("harmonic map on the ball") {
  MomentHarmonicMap map(3, 2);
  DiscreteMeasure sigma = discretize_sphere(3, 1.0, 8);
  HarmonicVector h = map.to_harmonic(TensorSet::from_measure(sigma, 2));
  CHECK(h.values[0] == Catch::Approx(2 * std::sqrt(kPi)).margin(1e-10));
  for (int i = 1; i < h.values.size(); ++i) CHECK(std::abs(h.values[i]) < 1e-10);
}

TEST_CASE("harmonic map round trip") {
  Rng rng(43);
  for (int n : {2, 3}) {
    for (int s_o : {2, 4}) {
      MomentHarmonicMap map(n, s_o);
      int m = total_dim(n, s_o);
      for (int t = 0; t < 25; ++t) {
        Vec phi(m);
        for (int i = 0; i < m; ++i) phi[i] = rng.normal();
        Vec back = map.to_phi(map.to_harmonic(phi));
        CHECK((back - phi).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("bijection on unit vectors up to degree 8") {
  MomentHarmonicMap map(3, 8);
  int m = total_dim(3, 8);
  for (int i = 0; i < m; ++i) {
    Vec e = Vec::Unit(m, i);
    HarmonicVector h(3, 8);
    h.values = e;
    Vec back = map.to_harmonic(map.to_phi(h)).values;
    CHECK((back - e).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("brute-force harmonic vector equals mapped moments") {
  Rng rng(47);
  for (int n : {2, 3}) {
    MomentHarmonicMap map(n, 4);
    HarmonicBasis basis(n, 4);
    for (int t = 0; t < 50; ++t) {
      DiscreteMeasure mu = random_measure(n, 6, rng);
      HarmonicVector direct = harmonic_vector(mu, basis, 4);
      HarmonicVector mapped = map.to_harmonic(TensorSet::from_measure(mu, 4));
      CHECK((direct.values - mapped.values).cwiseAbs().maxCoeff() <
            1e-9 * std::max(1.0, direct.values.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("degree-1 block vanishes for centered measures") {
  Rng rng(53);
  HarmonicBasis basis(3, 3);
  DiscreteMeasure mu = random_measure(3, 9, rng, true);
  HarmonicVector h = harmonic_vector(mu, basis, 3);
  CHECK(h.degree_block(1).cwiseAbs().maxCoeff() < 1e-10);
}
