#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entroframe/cli.hpp"
#include "entroframe/frames.hpp"
#include "entroframe/pframes.hpp"

using namespace entroframe;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("entroframe-cli-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

json load(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string strip_timestamp(const std::string& text) {
  json j = json::parse(text);
  j.erase("generated_at");
  return j.dump();
}

}  // namespace

TEST_CASE("gen writes valid frames") {
  TempDir t;
  auto r = run({"gen", "--builder", "fourier", "--dim", "4", "-o", t / "f.json"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("parseval_defect") != std::string::npos);
  CHECK(parseval_defect(frame_from_json(load(t / "f.json"))) <= 1e-12);

  r = run({"gen", "--builder", "circle", "--nodes", "256", "-o", t / "c.json"});
  CHECK(r.code == cli::kOk);
  const auto c = frame_from_json(load(t / "c.json"));
  CHECK(c.size() == 256);
  CHECK(parseval_defect(c) <= 1e-12);
  CHECK(c.refinable());

  const auto a = run({"gen", "--builder", "random-parseval", "--dim", "3", "--atoms", "7", "--seed", "1"});
  const auto b = run({"gen", "--builder", "random-parseval", "--dim", "3", "--atoms", "7", "--seed", "1"});
  CHECK(a.code == cli::kOk);
  CHECK(a.out == b.out);
  CHECK(frame_from_json(json::parse(a.out)).vectors() == make_random_parseval(3, 7, 1).vectors());

  CHECK(run({"gen", "--builder", "mercedes"}).code == cli::kOk);
  CHECK(run({"gen", "--builder", "onb", "--dim", "3", "--field", "R"}).code == cli::kOk);

  r = run({"gen", "--builder", "split-pframe", "--dim", "2", "--p", "1.5", "--splits", "2,3", "--lambda", "4"});
  CHECK(r.code == cli::kOk);
  const auto pf = pframe_from_json(json::parse(r.out));
  CHECK(pf.p() == 1.5);
  CHECK(pf.size() == 5);
  CHECK(pf.measure().total_mass() == doctest::Approx(8.0));
  r = run({"gen", "--builder", "coordinate-pframe", "--dim", "3", "--p", "3", "--role", "vectors"});
  CHECK(pframe_from_json(json::parse(r.out)).role() == PRole::Vectors);
}

TEST_CASE("gen usage errors") {
  CHECK(run({"gen", "--builder", "torus"}).code == cli::kUsage);
  CHECK(run({"gen"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "circle", "--nodes", "1"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "random-parseval", "--dim", "5", "--atoms", "3"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "onb", "--dim", "two"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "split-pframe", "--dim", "2", "--splits", "1,x"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "coordinate-pframe", "--dim", "2", "--p", "0.5"}).code == cli::kUsage);
  CHECK(run({"gen", "--builder", "onb", "--field", "Q"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
}

TEST_CASE("verify exit codes") {
  TempDir t;
  run({"gen", "--builder", "onb", "--dim", "4", "-o", t / "s.json"});
  run({"gen", "--builder", "fourier", "--dim", "4", "-o", t / "f.json"});
  auto r = run({"verify", t / "s.json", t / "f.json", "--samples", "1000", "-o", t / "rep.json"});
  CHECK(r.code == cli::kOk);
  const json rep = load(t / "rep.json");
  CHECK(rep["passed"] == true);
  CHECK(rep["batch"]["failures"] == 0);
  CHECK(rep["batch"]["n_samples"] == 1000);
  CHECK(rep.contains("generated_at"));
  CHECK(rep.contains("config_hash"));

  // corrupt one vector so the defect is 0.5
  json bad = load(t / "s.json");
  bad["vectors"][0][0] = json::array({std::sqrt(1.5), 0.0});
  {
    std::ofstream o(t / "bad.json");
    o << bad.dump();
  }
  CHECK(parseval_defect(frame_from_json(bad)) == doctest::Approx(0.5));
  r = run({"verify", t / "bad.json", t / "f.json"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("not Parseval within tolerance") != std::string::npos);

  // a negative tolerance demands a strict margin the top of the sandwich cannot give
  r = run({"verify", t / "s.json", t / "s.json", "--samples", "10", "--tol", "-10"});
  CHECK(r.code == cli::kBoundFailure);
  CHECK(json::parse(r.out)["passed"] == false);

  run({"gen", "--builder", "onb", "--dim", "3", "-o", t / "s3.json"});
  CHECK(run({"verify", t / "s.json", t / "s3.json"}).code == cli::kUsage);
  CHECK(run({"verify", t / "s.json", t / "missing.json"}).code == cli::kUsage);
  CHECK(run({"verify", t / "s.json"}).code == cli::kUsage);
  CHECK(run({"verify", t / "s.json", t / "f.json", "--p", "3"}).code == cli::kUsage);
  CHECK(run({"verify", t / "s.json", t / "f.json", "--p", "2", "--samples", "50", "--restarts", "4"}).code == cli::kOk);
  {
    std::ofstream o(t / "junk.json");
    o << "{not json";
  }
  CHECK(run({"verify", t / "junk.json", t / "f.json"}).code == cli::kUsage);
}

TEST_CASE("verify in p-frame mode") {
  TempDir t;
  run({"gen", "--builder", "coordinate-pframe", "--dim", "3", "--p", "1.5", "-o", t / "a.json"});
  run({"gen", "--builder", "split-pframe", "--dim", "3", "--p", "1.5", "--splits", "1,2,3", "-o", t / "b.json"});
  auto r = run({"verify", t / "a.json", t / "b.json", "--p", "1.5", "--samples", "200", "--restarts", "8"});
  CHECK(r.code == cli::kOk);
  const json rep = json::parse(r.out);
  CHECK(rep["mode"] == "p-frame");
  CHECK(rep["batch"]["failures"] == 0);
  CHECK(run({"verify", t / "a.json", t / "b.json", "--p", "2"}).code == cli::kUsage);

  run({"gen", "--builder", "coordinate-pframe", "--dim", "3", "--p", "3", "-o", t / "c.json"});
  CHECK(run({"verify", t / "a.json", t / "c.json"}).code == cli::kUsage);
  run({"gen", "--builder", "onb", "--dim", "3", "-o", t / "h.json"});
  CHECK(run({"verify", t / "a.json", t / "h.json"}).code == cli::kUsage);
}

TEST_CASE("probe") {
  TempDir t;
  run({"gen", "--builder", "onb", "--dim", "3", "-o", t / "s.json"});
  run({"gen", "--builder", "fourier", "--dim", "3", "-o", t / "f.json"});
  auto r = run({"probe", t / "s.json", t / "f.json", "--seed", "4", "--restarts", "8", "-o", t / "p.json",
                "--trace-csv", t / "trace.csv"});
  CHECK(r.code == cli::kOk);
  const json rep = load(t / "p.json");
  CHECK(rep["probe"]["verdict"] == "supports-conjecture");
  CHECK(rep["probe"]["margin_kraus"].get<double>() >= -1e-6);
  std::ifstream csv(t / "trace.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "restart,seed,start_value,final_value,iterations,nudges,stop");

  const auto a = run({"probe", t / "s.json", t / "f.json", "--seed", "4", "--restarts", "8"});
  const auto b = run({"probe", t / "s.json", t / "f.json", "--seed", "4", "--restarts", "8"});
  CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));

  run({"gen", "--builder", "circle", "--nodes", "512", "-o", t / "c1.json"});
  run({"gen", "--builder", "circle", "--nodes", "512", "--offset", "0.5", "-o", t / "c2.json"});
  r = run({"probe", t / "c1.json", t / "c2.json", "--restarts", "4"});
  CHECK(r.code == cli::kOk);
  const json circ = json::parse(r.out);
  CHECK(circ["probe"]["reevaluation"].contains("refinement_factor"));
  CHECK(circ["probe"].contains("coherence_extrapolated"));

  CHECK(run({"probe", t / "s.json", t / "f.json", "--restarts", "0"}).code == cli::kUsage);
  run({"gen", "--builder", "coordinate-pframe", "--dim", "3", "--p", "2", "-o", t / "pf.json"});
  CHECK(run({"probe", t / "pf.json", t / "pf.json"}).code == cli::kUsage);
}

TEST_CASE("verify determinism") {
  TempDir t;
  run({"gen", "--builder", "random-parseval", "--dim", "3", "--atoms", "7", "--seed", "2", "-o", t / "a.json"});
  run({"gen", "--builder", "circle", "--nodes", "64", "-o", t / "c.json"});
  run({"gen", "--builder", "random-parseval", "--dim", "3", "--atoms", "5", "--seed", "3", "-o", t / "b.json"});
  const auto x = run({"verify", t / "a.json", t / "b.json", "--seed", "11", "--samples", "300"});
  const auto y = run({"verify", t / "a.json", t / "b.json", "--seed", "11", "--samples", "300"});
  CHECK(x.code == cli::kOk);
  CHECK(strip_timestamp(x.out) == strip_timestamp(y.out));
  const auto z = run({"verify", t / "a.json", t / "b.json", "--seed", "12", "--samples", "300"});
  CHECK(json::parse(z.out)["config_hash"] != json::parse(x.out)["config_hash"]);
}

TEST_CASE("convergence") {
  auto r = run({"convergence", "--builder", "circle"});
  REQUIRE(r.code == cli::kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "nodes,entropy,coherence,parseval_defect");
  std::vector<double> s, c;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    s.push_back(v[1]);
    c.push_back(v[2]);
    CHECK(v[3] <= 1e-12);
  }
  REQUIRE(s.size() == 8);
  for (std::size_t i = 0; i + 2 < s.size(); ++i) CHECK(std::abs(s[i + 2] - s[i + 1]) < std::abs(s[i + 1] - s[i]));
  CHECK(std::abs(c.back() - 1.0 / std::numbers::pi) < 1e-5);
  CHECK(std::abs(c.back() - 1.0 / std::numbers::pi) <= std::abs(c.front() - 1.0 / std::numbers::pi));

  CHECK(run({"convergence", "--builder", "onb"}).code == cli::kUsage);
  CHECK(run({"convergence", "--schedule", "8,1"}).code == cli::kUsage);
  CHECK(run({"convergence", "--schedule", ""}).code == cli::kUsage);
}

TEST_CASE("help") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("verify") != std::string::npos);
}
