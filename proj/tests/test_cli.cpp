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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shapetensor/json_io.hpp"
#include "shapetensor/shapetensor.hpp"

using namespace shapetensor;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("SHAPETENSOR_CLI");
  REQUIRE(env != nullptr);
  return env;
}

int run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("st_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("tensors subcommand on the ball") {
  fs::path dir = fresh_dir("ball");
  REQUIRE(run_cli("tensors ball --so 2 --out " + dir.string()) == 0);
  json jt = load_json((dir / "tensors.json").string());
  CHECK(jt.at("phi0").get<double>() == Catch::Approx(2 * kPi).margin(1e-6));
  CHECK(jt.at("surface_area").get<double>() == Catch::Approx(4 * kPi).margin(1e-6));
  TensorSet ts = tensor_set_from_json(jt);
  CHECK(ts.s_o == 2);
  json jh = load_json((dir / "harmonics.json").string());
  HarmonicVector h = harmonic_vector_from_json(jh);
  CHECK(h.values[0] == Catch::Approx(2 * std::sqrt(kPi)).margin(1e-6));
}

TEST_CASE("tensors subcommand on a polygon") {
  fs::path dir = fresh_dir("poly");
  REQUIRE(run_cli("tensors polygon5 --so 4 --out " + dir.string()) == 0);
  HarmonicVector h = harmonic_vector_from_json(load_json((dir / "harmonics.json").string()));
  for (int k = 1; k <= 4; ++k)
    CHECK(h.degree_block(k).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("malformed input exits with the input code") {
  fs::path dir = fresh_dir("bad");
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("reconstruct " + (dir / "broken.json").string() + " --out " + dir.string()) == 2);
  CHECK(run_cli("tensors no_such_body --out " + dir.string()) == 2);
}

TEST_CASE("reconstruct round trip through files") {
  fs::path dir = fresh_dir("roundtrip");
  REQUIRE(run_cli("tensors pyramid --so 4 --out " + dir.string()) == 0);
  REQUIRE(run_cli("reconstruct " + (dir / "tensors.json").string() + " --seed 5 --out " +
                  dir.string()) == 0);
  json res = load_json((dir / "result.json").string());
  CHECK(res.at("case").get<std::string>() == "case3_polytope");
  // mesh matches the pyramid up to translation
  Polytope out = read_off((dir / "mesh.off").string());
  Polytope pyr = reference_body(BodySpec::pyramid());
  CHECK(translative_hausdorff(out, pyr) <= 0.05 * pyr.diameter());

  // feeding the mesh back through `tensors` reproduces the inputs
  fs::path dir2 = fresh_dir("roundtrip2");
  std::vector<Vec> verts = out.vertices;
  json body;
  body["type"] = "polytope";
  json jv = json::array();
  for (const Vec& v : verts) {
    json p = json::array();
    for (int i = 0; i < 3; ++i) p.push_back(v[i]);
    jv.push_back(p);
  }
  body["vertices"] = jv;
  save_json(body, (dir2 / "body.json").string());
  REQUIRE(run_cli("tensors " + (dir2 / "body.json").string() + " --so 4 --out " +
                  dir2.string()) == 0);
  TensorSet a = tensor_set_from_json(load_json((dir / "tensors.json").string()));
  TensorSet b = tensor_set_from_json(load_json((dir2 / "tensors.json").string()));
  double scale = a.phi_vector().cwiseAbs().maxCoeff();
  CHECK((a.phi_vector() - b.phi_vector()).cwiseAbs().maxCoeff() <= 1e-6 * scale);
}

TEST_CASE("case 4 exits with the dedicated code and writes no mesh") {
  fs::path dir = fresh_dir("case4");
  DiscreteMeasure planar(3);
  planar.add(Vec::Unit(3, 0), 1.0);
  planar.add(-Vec::Unit(3, 0), 1.0);
  planar.add(Vec::Unit(3, 1), 1.0);
  planar.add(-Vec::Unit(3, 1), 1.0);
  HarmonicBasis basis(3, 2);
  HarmonicVector h = harmonic_vector(planar, basis, 2);
  save_json(harmonic_vector_to_json(h), (dir / "harmonics.json").string());
  CHECK(run_cli("reconstruct " + (dir / "harmonics.json").string() + " --noisy --out " +
                dir.string()) == 4);
  CHECK(fs::exists(dir / "result.json"));
  CHECK(!fs::exists(dir / "mesh.off"));
}

TEST_CASE("counterexample tables") {
  fs::path dir = fresh_dir("cx");
  REQUIRE(run_cli("counterexample 3 6 --out " + dir.string()) == 0);
  std::string table = slurp(dir / "counterexample_table.csv");
  std::stringstream ss(table);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "degree,gap,agrees");
  int degree = 0;
  while (std::getline(ss, line)) {
    auto last_comma = line.rfind(',');
    int agrees = std::stoi(line.substr(last_comma + 1));
    CHECK(agrees == (degree <= 4 ? 1 : 0));
    ++degree;
  }
  CHECK(degree == 6);  // degrees 0..5
  CHECK(fs::exists(dir / "counterexample_harmonics.csv"));
}

TEST_CASE("distance subcommand") {
  fs::path dir = fresh_dir("dist");
  Polytope cube = reference_body(BodySpec::cube(1.0));
  write_off(cube, (dir / "a.off").string());
  Vec shift(3);
  shift << 5, 0, 0;
  write_off(cube.translated(shift), (dir / "b.off").string());
  std::string cmd = cli_path() + " distance " + (dir / "a.off").string() + " " +
                    (dir / "b.off").string() + " > " + (dir / "out.txt").string();
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::string out = slurp(dir / "out.txt");
  std::stringstream ss(out);
  std::string word;
  double hd = -1, td = -1;
  ss >> word >> hd >> word >> td;
  CHECK(hd == Catch::Approx(5.0).margin(1e-6));
  CHECK(td <= 1e-6);
}

TEST_CASE("deterministic outputs under a fixed seed") {
  fs::path dir1 = fresh_dir("det1");
  fs::path dir2 = fresh_dir("det2");
  REQUIRE(run_cli("tensors pyramid --so 3 --out " + dir1.string()) == 0);
  REQUIRE(run_cli("tensors pyramid --so 3 --out " + dir2.string()) == 0);
  CHECK(slurp(dir1 / "tensors.json") == slurp(dir2 / "tensors.json"));
  CHECK(slurp(dir1 / "harmonics.json") == slurp(dir2 / "harmonics.json"));

  REQUIRE(run_cli("reconstruct " + (dir1 / "tensors.json").string() + " --seed 42 --out " +
                  dir1.string()) == 0);
  REQUIRE(run_cli("reconstruct " + (dir2 / "tensors.json").string() + " --seed 42 --out " +
                  dir2.string()) == 0);
  CHECK(slurp(dir1 / "result.json") == slurp(dir2 / "result.json"));
  CHECK(slurp(dir1 / "mesh.off") == slurp(dir2 / "mesh.off"));
}

TEST_CASE("converge subcommand emits a csv") {
  fs::path dir = fresh_dir("conv");
  REQUIRE(run_cli("converge cube --so 2,3 --seed 4 --starts 6 --out " + dir.string()) == 0);
  std::string csv = slurp(dir / "converge.csv");
  CHECK(csv.rfind("s_o,residual,dt,seconds\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("noise subcommand emits a csv") {
  fs::path dir = fresh_dir("noise");
  REQUIRE(run_cli("noise pyramid --so 2 --sigma2 0 --trials 2 --seed 8 --starts 6 --out " +
                  dir.string()) == 0);
  std::string csv = slurp(dir / "noise.csv");
  CHECK(csv.rfind("sigma2,trial,case,dt\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("case3_polytope") != std::string::npos);
}

TEST_CASE("json round trips") {
  Rng rng(71);
  DiscreteMeasure mu(3);
  for (int i = 0; i < 5; ++i) mu.add(rng.unit_vector(3), rng.uniform(0.1, 2.0));
  DiscreteMeasure back = measure_from_json(measure_to_json(mu));
  REQUIRE(back.size() == mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    CHECK((back.atoms[i] - mu.atoms[i]).norm() == 0.0);
    CHECK(back.weights[i] == mu.weights[i]);
  }

  TensorSet ts = TensorSet::from_measure(mu, 3);
  TensorSet ts2 = tensor_set_from_json(tensor_set_to_json(ts));
  CHECK((ts.phi_vector() - ts2.phi_vector()).cwiseAbs().maxCoeff() == 0.0);

  json bad = tensor_set_to_json(ts);
  bad["mystery"] = 1;
  CHECK_THROWS_AS(tensor_set_from_json(bad), std::invalid_argument);
}
