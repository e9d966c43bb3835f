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

#ifndef SHAPETENSOR_STABILITY_HPP
#define SHAPETENSOR_STABILITY_HPP

#include <chrono>
#include <functional>
#include <ostream>
#include <vector>

#include "shapetensor/reconstruct.hpp"
#include "shapetensor/uniqueness.hpp"

namespace shapetensor {

// ---------------------------------------------------------------------------
// Explicit distance bound: for bodies inside an R-ball whose harmonic
// vectors up to degree s_o satisfy sqrt(omega_n m_{s_o}) |h_K - h_L| <= delta,
// the Dudley distance of their surface area measures is at most
//     2 R^{n-1} omega_n (s_o^{(eps-1)/2}
//                        + 2 omega_n E_{n s_o} exp(-s_o^eps / 4)) + delta.
// The non-constructive constant of the headline statement is replaced by
// this explicit right-hand side throughout.
// ---------------------------------------------------------------------------
struct StabilityBound {
  int n = 3;
  int s_o = 2;
  double eps = 0.5;
  double R = 1.0;
  double delta = 0.0;
  double value = 0.0;
};

inline double explicit_noise_bound(int n, double R, int s_o, double eps, double delta) {
  if (n < 2 || s_o < 1 || R <= 0.0 || eps <= 0.0 || eps >= 1.0 || delta < 0.0)
    throw std::invalid_argument("explicit_noise_bound: parameter out of domain");
  ProjectionConstants pc = projection_constants(n, s_o);
  double tail = std::exp(pc.logE - 0.25 * std::pow(double(s_o), eps));
  double core = std::pow(double(s_o), 0.5 * (eps - 1.0)) + 2.0 * sphere_area(n) * tail;
  return 2.0 * std::pow(R, n - 1) * sphere_area(n) * core + delta;
}

inline StabilityBound make_stability_bound(int n, double R, int s_o, double eps,
                                           double delta) {
  StabilityBound b;
  b.n = n;
  b.s_o = s_o;
  b.eps = eps;
  b.R = R;
  b.delta = delta;
  b.value = explicit_noise_bound(n, R, s_o, eps, delta);
  return b;
}

// ---------------------------------------------------------------------------
// Uniform projection bound: for f with Lipschitz constant L and sup norm S,
//     sup |P_k f - f| <= sqrt(k)^{eps-1} L + 2 omega_n E_{nk} e^{-k^eps/4} S.
// The measured error is evaluated on the quadrature grid.
// ---------------------------------------------------------------------------
struct ProjectionBoundReport {
  double measured = 0.0;
  double bound = 0.0;
};

inline ProjectionBoundReport projection_bound_check(
    int n, const std::function<double(const Vec&)>& f, double lipschitz, double sup_norm,
    int k, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("projection_bound_check: eps");
  QuadratureRule rule = sphere_quadrature(n, 2 * k + 2);
  std::vector<double> samples(rule.nodes.size());
  for (size_t q = 0; q < rule.nodes.size(); ++q) samples[q] = f(rule.nodes[q]);
  std::vector<double> projected = project_kernel(rule, samples, k, rule.nodes);
  ProjectionBoundReport rep;
  for (size_t q = 0; q < samples.size(); ++q)
    rep.measured = std::max(rep.measured, std::abs(projected[q] - samples[q]));
  ProjectionConstants pc = projection_constants(n, k);
  rep.bound = std::pow(std::sqrt(double(k)), eps - 1.0) * lipschitz +
              2.0 * sphere_area(n) * std::exp(pc.logE - 0.25 * std::pow(double(k), eps)) *
                  sup_norm;
  if (rep.measured > rep.bound)
    throw std::logic_error("projection_bound_check: measured error exceeds the bound");
  return rep;
}

// ---------------------------------------------------------------------------
// Dudley distance against the explicit bound for a pair of measures living
// inside a common R-ball.
// ---------------------------------------------------------------------------
struct DudleyBoundReport {
  double dudley = 0.0;
  double harmonic_gap = 0.0;  // |h(K) - h(L)|
  double delta = 0.0;         // sqrt(omega_n m_{s_o}) * harmonic_gap
  double bound = 0.0;
  bool holds = false;
};

inline DudleyBoundReport dudley_vs_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         double R, int s_o, double eps) {
  if (mu.dim != nu.dim) throw std::invalid_argument("dudley_vs_bound: dimension mismatch");
  const int n = mu.dim;
  DudleyBoundReport rep;
  rep.dudley = dudley(mu, nu);
  HarmonicBasis basis(n, s_o);
  HarmonicVector hk = harmonic_vector(mu, basis, s_o);
  HarmonicVector hl = harmonic_vector(nu, basis, s_o);
  rep.harmonic_gap = (hk.values - hl.values).norm();
  rep.delta = std::sqrt(sphere_area(n) * total_dim(n, s_o)) * rep.harmonic_gap;
  rep.bound = explicit_noise_bound(n, R, s_o, eps, rep.delta);
  rep.holds = rep.dudley <= rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Experiment harnesses.
// ---------------------------------------------------------------------------
struct ConvergenceRow {
  int s_o = 0;
  double residual = 0.0;
  double dt = 0.0;       // translative Hausdorff distance to the target body
  double seconds = 0.0;
};

inline std::vector<ConvergenceRow> convergence_experiment(const BodySpec& spec,
                                                          const std::vector<int>& s_o_list,
                                                          const SolverConfig& cfg = {},
                                                          int resolution = 1500) {
  Polytope truth = reference_body(spec, resolution);
  DiscreteMeasure mu = surface_area_measure(truth);
  std::vector<ConvergenceRow> rows;
  for (int s_o : s_o_list) {
    auto t0 = std::chrono::steady_clock::now();
    TensorSet ts = TensorSet::from_measure(mu, s_o);
    ReconstructionResult res = algorithm_surface_tensor(ts, cfg);
    ConvergenceRow row;
    row.s_o = s_o;
    row.residual = res.residual;
    row.dt = translative_hausdorff(*res.polytope, truth);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // the rank-2 tensor of the output must certify its own inclusion radii;
    // this is what keeps the whole family of outputs in one fixed annulus
    const Polytope& body = *res.polytope;  // centroid already at the origin
    DiscreteMeasure out_mu = surface_area_measure(body);
    InclusionRadii ir = inclusion_radii(surface_tensor(out_mu, 2), out_mu.mass());
    double inradius = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < body.normals.size(); ++i)
      inradius = std::min(inradius, body.supports[i]);
    double outradius = 0.0;
    for (const Vec& v : body.vertices) outradius = std::max(outradius, v.norm());
    if (inradius < ir.r - 1e-9 || outradius > ir.R + 1e-9)
      throw std::logic_error("convergence_experiment: inclusion radii violated");

    rows.push_back(row);
  }
  return rows;
}

inline void write_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  os << "s_o,residual,dt,seconds\n";
  for (const auto& r : rows)
    os << r.s_o << "," << r.residual << "," << r.dt << "," << r.seconds << "\n";
}

struct NoiseRow {
  double sigma2 = 0.0;
  int trial = 0;
  CaseTag tag = CaseTag::Case4_NoOutput;
  double dt = 0.0;  // valid for case-3 outcomes
};

inline std::vector<NoiseRow> noise_experiment(const BodySpec& spec, int s_o,
                                              const std::vector<double>& sigma2_list,
                                              int trials, const SolverConfig& cfg = {},
                                              int resolution = 1500) {
  if (trials < 1) throw std::invalid_argument("noise_experiment: trials must be >= 1");
  Polytope truth = reference_body(spec, resolution);
  DiscreteMeasure mu = surface_area_measure(truth);
  HarmonicBasis basis(spec.dim, s_o);
  HarmonicVector exact = harmonic_vector(mu, basis, s_o);
  std::vector<NoiseRow> rows;
  for (double sigma2 : sigma2_list) {
    for (int trial = 0; trial < trials; ++trial) {
      NoiseRow row;
      row.sigma2 = sigma2;
      row.trial = trial;
      HarmonicVector noisy = exact;
      noisy.values += noise_model(spec.dim, s_o, std::sqrt(sigma2),
                                  cfg.seed ^ (0x9e37ull * (trial + 1)) ^
                                      std::uint64_t(sigma2 * 1e6));
      SolverConfig trial_cfg = cfg;
      trial_cfg.seed = cfg.seed + 1000 * trial + 7;
      ReconstructionResult res = algorithm_hiv_lsq(noisy, trial_cfg);
      row.tag = res.tag;
      if (res.tag == CaseTag::Case3_Polytope)
        row.dt = translative_hausdorff(*res.polytope, truth);
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_csv(const std::vector<NoiseRow>& rows, std::ostream& os) {
  os << "sigma2,trial,case,dt\n";
  for (const auto& r : rows)
    os << r.sigma2 << "," << r.trial << "," << case_name(r.tag) << "," << r.dt << "\n";
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_STABILITY_HPP
