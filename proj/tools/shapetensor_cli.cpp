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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "shapetensor/shapetensor.hpp"

namespace st = shapetensor;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitOptimizer = 3;
constexpr int kExitNoOutput = 4;

// Built-in body names plus .json body-spec files.
st::BodySpec parse_body(const std::string& arg) {
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
    return st::body_spec_from_json(st::load_json(arg));
  if (arg == "ball") return st::BodySpec::ball(1.0);
  if (arg == "disc") return st::BodySpec::ball(1.0, 2);
  if (arg == "ellipsoid") return st::BodySpec::ellipsoid(1.0, 1.0, 2.0);
  if (arg == "pyramid") return st::BodySpec::pyramid();
  if (arg == "cube") return st::BodySpec::cube(1.0);
  if (arg.rfind("polygon", 0) == 0 && arg.size() > 7)
    return st::BodySpec::regular_polygon(std::stoi(arg.substr(7)));
  throw std::invalid_argument(
      "unknown body '" + arg +
      "' (use ball, disc, ellipsoid, pyramid, cube, polygon<m>, or a .json file)");
}

std::vector<int> parse_int_list(const std::string& arg) {
  std::vector<int> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + arg);
  return out;
}

std::vector<double> parse_double_list(const std::string& arg) {
  std::vector<double> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + arg);
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.precision(17);
  return os;
}

int cmd_tensors(const std::string& body, int s_o, const std::string& out_dir,
                int resolution) {
  st::BodySpec spec = parse_body(body);
  st::DiscreteMeasure mu = st::surface_area_measure(spec, resolution);
  st::TensorSet ts = st::TensorSet::from_measure(mu, s_o);
  st::MomentHarmonicMap map(spec.dim, s_o);
  st::HarmonicVector h = map.to_harmonic(ts);

  fs::create_directories(out_dir);
  st::json jt = st::tensor_set_to_json(ts);
  double surface = mu.mass();
  jt["surface_area"] = surface;
  jt["phi0"] = surface / st::sphere_area(1);
  st::save_json(jt, (fs::path(out_dir) / "tensors.json").string());
  st::save_json(st::harmonic_vector_to_json(h),
                (fs::path(out_dir) / "harmonics.json").string());
  std::cout << "m_so " << st::total_dim(spec.dim, s_o) << "\n"
            << "surface_area " << surface << "\n";
  return kExitOk;
}

int cmd_reconstruct(const std::string& input, bool noisy, const st::SolverConfig& cfg,
                    const std::string& out_dir) {
  st::json j = st::load_json(input);
  std::string kind = j.value("kind", "");
  int n = j.at("n").get<int>();
  int s_o = j.at("s_o").get<int>();
  if (s_o < 2) throw std::invalid_argument("input must have s_o >= 2");

  st::MomentHarmonicMap map(n, s_o);
  st::HarmonicVector h(n, s_o);
  if (kind == "tensors") {
    h = map.to_harmonic(st::tensor_set_from_json(j));
  } else if (kind == "harmonics") {
    h = st::harmonic_vector_from_json(j);
  } else {
    throw std::invalid_argument("input kind must be 'tensors' or 'harmonics'");
  }

  st::ReconstructionResult res;
  if (noisy) {
    res = st::algorithm_hiv_lsq(h, cfg);
  } else {
    res = st::algorithm_surface_tensor(map.to_tensors(h), cfg);
  }

  fs::create_directories(out_dir);
  st::save_json(st::result_to_json(res), (fs::path(out_dir) / "result.json").string());
  if (res.tag == st::CaseTag::Case4_NoOutput) {
    std::cout << "case " << st::case_name(res.tag) << "\n";
    return kExitNoOutput;
  }
  if (res.tag != st::CaseTag::Case1_Point)
    st::write_off(*res.polytope, (fs::path(out_dir) / "mesh.off").string());
  std::cout << "case " << st::case_name(res.tag) << "\nresidual " << res.residual << "\n";
  return kExitOk;
}

int cmd_counterexample(int n, int m, const std::string& out_dir) {
  st::CounterexamplePair pair = st::counterexample_pair(n, m);
  int top = m - n + 2;
  st::HarmonicBasis basis(n, top);
  st::HarmonicVector hp = st::harmonic_vector(pair.polytope_measure, basis, top);
  st::HarmonicVector hb = st::harmonic_vector(pair.body_measure, basis, top);

  fs::create_directories(out_dir);
  {
    std::ofstream os = open_out(fs::path(out_dir) / "counterexample_harmonics.csv");
    os << "degree,j,h_polytope,h_body\n";
    for (int k = 0; k <= top; ++k)
      for (int jj = 0; jj < st::basis_dim(n, k); ++jj)
        os << k << "," << (jj + 1) << "," << hp.degree_block(k)[jj] << ","
           << hb.degree_block(k)[jj] << "\n";
  }
  {
    std::ofstream os = open_out(fs::path(out_dir) / "counterexample_table.csv");
    os << "degree,gap,agrees\n";
    for (int k = 0; k <= top; ++k) {
      double gap = (hp.degree_block(k) - hb.degree_block(k)).cwiseAbs().maxCoeff();
      os << k << "," << gap << "," << (gap < 1e-6 ? 1 : 0) << "\n";
    }
  }
  std::cout << "wrote counterexample tables for n=" << n << " m=" << m << "\n";
  return kExitOk;
}

int cmd_converge(const std::string& body, const std::vector<int>& s_o_list,
                 const st::SolverConfig& cfg, int resolution, const std::string& out_dir) {
  st::BodySpec spec = parse_body(body);
  auto rows = st::convergence_experiment(spec, s_o_list, cfg, resolution);
  fs::create_directories(out_dir);
  std::ofstream os = open_out(fs::path(out_dir) / "converge.csv");
  st::write_csv(rows, os);
  for (const auto& r : rows)
    std::cout << "s_o " << r.s_o << " residual " << r.residual << " dt " << r.dt << "\n";
  return kExitOk;
}

int cmd_noise(const std::string& body, int s_o, const std::vector<double>& sigma2,
              int trials, const st::SolverConfig& cfg, int resolution,
              const std::string& out_dir) {
  st::BodySpec spec = parse_body(body);
  auto rows = st::noise_experiment(spec, s_o, sigma2, trials, cfg, resolution);
  fs::create_directories(out_dir);
  std::ofstream os = open_out(fs::path(out_dir) / "noise.csv");
  st::write_csv(rows, os);
  std::cout << "wrote " << rows.size() << " noise rows\n";
  return kExitOk;
}

int cmd_distance(const std::string& a, const std::string& b) {
  st::Polytope A = st::read_off(a);
  st::Polytope B = st::read_off(b);
  std::cout.precision(12);
  std::cout << "hausdorff " << st::hausdorff(A, B) << "\n"
            << "translative " << st::translative_hausdorff(A, B) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface tensors, harmonic intrinsic volumes, and shape reconstruction"};
  app.require_subcommand(1);

  std::string body, input, out_dir = ".", so_list = "2", sigma2_list = "0";
  std::string off_a, off_b;
  int s_o = 4, trials = 10, resolution = 1500, cx_n = 3, cx_m = 6;
  bool noisy = false;
  st::SolverConfig cfg;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--starts", cfg.starts, "multistart count");
    sub->add_option("--tol", cfg.exact_tol, "relative residual accepted as exact");
  };

  CLI::App* t = app.add_subcommand("tensors", "surface tensors and harmonic vector of a body");
  t->add_option("body", body, "built-in body name or body-spec .json")->required();
  t->add_option("--so", s_o, "maximum tensor rank (s_o >= 1)");
  t->add_option("--out", out_dir, "output directory");
  t->add_option("--resolution", resolution, "boundary samples for smooth bodies");

  CLI::App* r = app.add_subcommand("reconstruct", "shape from tensors.json or harmonics.json");
  r->add_option("input", input, "input file")->required();
  r->add_flag("--noisy", noisy, "treat the input as noisy measurements (least squares)");
  r->add_option("--out", out_dir, "output directory");
  add_solver_flags(r);

  CLI::App* c = app.add_subcommand("counterexample", "polytope vs non-polytope with shared tensors");
  c->add_option("n", cx_n, "dimension (2 or 3)")->required();
  c->add_option("m", cx_m, "facet count of the polytope")->required();
  c->add_option("--out", out_dir, "output directory");

  CLI::App* cv = app.add_subcommand("converge", "reconstruction quality across tensor ranks");
  cv->add_option("body", body, "built-in body name or body-spec .json")->required();
  cv->add_option("--so", so_list, "comma-separated ranks, e.g. 2,4,6");
  cv->add_option("--out", out_dir, "output directory");
  cv->add_option("--resolution", resolution, "boundary samples for smooth bodies");
  add_solver_flags(cv);

  CLI::App* nz = app.add_subcommand("noise", "noisy-measurement reconstruction trials");
  nz->add_option("body", body, "built-in body name or body-spec .json")->required();
  nz->add_option("--so", s_o, "harmonic degree");
  nz->add_option("--sigma2", sigma2_list, "comma-separated noise variances");
  nz->add_option("--trials", trials, "trials per variance");
  nz->add_option("--out", out_dir, "output directory");
  nz->add_option("--resolution", resolution, "boundary samples for smooth bodies");
  add_solver_flags(nz);

  CLI::App* d = app.add_subcommand("distance", "Hausdorff distances between OFF meshes");
  d->add_option("a", off_a, "first mesh")->required();
  d->add_option("b", off_b, "second mesh")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (t->parsed()) return cmd_tensors(body, s_o, out_dir, resolution);
    if (r->parsed()) return cmd_reconstruct(input, noisy, cfg, out_dir);
    if (c->parsed()) return cmd_counterexample(cx_n, cx_m, out_dir);
    if (cv->parsed()) return cmd_converge(body, parse_int_list(so_list), cfg, resolution, out_dir);
    if (nz->parsed())
      return cmd_noise(body, s_o, parse_double_list(sigma2_list), trials, cfg, resolution,
                       out_dir);
    if (d->parsed()) return cmd_distance(off_a, off_b);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOptimizer;
  }
  return kExitInput;
}
