#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lsl/corpus.hpp"
#include "lsl/errors.hpp"
#include "lsl/io.hpp"
#include "support.hpp"

using namespace lsl;
namespace fs = std::filesystem;

namespace {

Chart random_chart(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 10);
  Chart c;
  c.grid = {linspace(-1.0 / 3, 2.0 / 7, 7), linspace(std::exp(1.0), std::exp(1.5), 5)};
  c.F = Field2D(c.grid);
  c.H = Field2D(c.grid);
  Field2D L(c.grid), K(c.grid);
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    c.F.values()[k] = d(rng);
    c.H.values()[k] = -d(rng) / 3;
    L.values()[k] = std::nextafter(d(rng), 0.0);
    K.values()[k] = d(rng) * 1e-300;
  }
  c.L = L;
  c.K = K;
  c.u0_index = 2;
  c.v0_index = 4;
  c.eps1 = -1;
  c.metadata["source"] = "random";
  return c;
}

std::string chart_text(const std::string& body) {
  return R"({"schema_version": 1, "u_grid": [0, 1, 2], "v_grid": [0, 1], "u0_index": 0, "v0_index": 1,
             "eps1": 1, "eps2": -1, )" +
         body + "}";
}

}  // namespace

TEST_CASE("chart round trip is bit-exact") {
  const auto dir = test::scratch_dir("io_roundtrip");
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    const Chart c = random_chart(rng);
    io::write_chart(dir / "c.json", c);
    const Chart r = io::read_chart(dir / "c.json");
    CHECK(r.grid.u == c.grid.u);
    CHECK(r.grid.v == c.grid.v);
    CHECK(r.F == c.F);
    CHECK(r.H == c.H);
    CHECK(r.L == c.L);
    CHECK(r.K == c.K);
    CHECK_FALSE(r.M.has_value());
    CHECK(r.u0_index == 2);
    CHECK(r.v0_index == 4);
    CHECK(r.eps1 == -1);
    CHECK(r.metadata == c.metadata);
  }
  CHECK_FALSE(fs::exists(dir / "c.json.tmp"));
}

TEST_CASE("chart layout: rows are v, columns are u") {
  const auto g = linspace(0, 1, 3);
  Chart c = corpus::reference_chart("cylinder", g, linspace(0, 1, 2), 0, 0);
  c.F(2, 1) = 7.0;
  c.canonical = true;
  const auto doc = io::chart_to_json(c);
  CHECK(doc["F"].size() == 2);
  CHECK(doc["F"][0].size() == 3);
  CHECK(doc["F"][1][2].get<double>() == 7.0);
  CHECK(doc["metadata"]["canonical"] == "true");
  CHECK(io::chart_from_json(doc).canonical);
}

TEST_CASE("malformed charts are rejected") {
  const auto parse = [](const std::string& s) { return io::chart_from_json(io::Json::parse(s)); };
  const std::string F = R"("F": [[1, 1, 1], [1, 1, 1]], )";
  const std::string H = R"("H": [[0, 0, 0], [0, 0, 0]])";
  CHECK_NOTHROW(parse(chart_text(F + H)));
  CHECK_THROWS_AS(parse(chart_text(R"("F": [[1, 1], [1, 1]], )" + H)), FormatError);
  CHECK_THROWS_AS(parse(chart_text(R"("F": [[1, 1, 1], [1, 0, 1]], )" + H)), FormatError);
  try {
    parse(chart_text(R"("F": [[1, 1, 1], [1, -2, 1]], )" + H));
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("i=1, j=1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(chart_text(F + R"("H": [[0, 0, "x"], [0, 0, 0]])")), FormatError);
  CHECK_THROWS_AS(parse(R"({"schema_version": 2})"), FormatError);
  CHECK_THROWS_AS(parse(R"([1, 2])"), FormatError);
  const auto dir = test::scratch_dir("io_bad");
  io::write_atomic(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(io::read_chart(dir / "bad.json"), FormatError);
  CHECK_THROWS_AS(io::read_chart(dir / "missing.json"), FormatError);
}

TEST_CASE("reports") {
  io::Report r("residual");
  r.set_inputs_digest("abc");
  r.set_tolerance("residual", 1e-3);
  r.add_check({"a", 1e-4, 1e-3, 2e-5, 1.97});
  r.add_check({"b", std::nan(""), 1e-3, std::nullopt, std::nullopt});
  r.summary()["grid"] = {3, 4};
  CHECK_FALSE(r.all_pass());
  const auto doc = io::Json::parse(r.dump());
  CHECK(doc["command"] == "residual");
  CHECK(doc["inputs_digest"] == "abc");
  CHECK(doc["tolerances"]["residual"].get<double>() == 1e-3);
  CHECK(doc["checks"][0]["pass"] == true);
  CHECK(doc["checks"][0]["order_estimate"].get<double>() == 1.97);
  CHECK(doc["checks"][1]["max_abs"].is_null());
  CHECK(doc["checks"][1]["pass"] == false);
  CHECK(doc["all_pass"] == false);
  CHECK_FALSE(doc.contains("wall_time_s"));
  for (const auto& c : doc["checks"])
    if (c["max_abs"].is_number())
      CHECK(c["pass"].get<bool>() == (c["max_abs"].get<double>() <= c["tolerance"].get<double>()));
  CHECK(r.dump() == r.dump());
  r.set_wall_time(0.5);
  CHECK(io::Json::parse(r.dump())["wall_time_s"].get<double>() == 0.5);
}

TEST_CASE("mesh export") {
  const auto dir = test::scratch_dir("io_mesh");
  const Grid2D g{linspace(0, 1, 3), linspace(0, 1, 2)};
  MeshField m(g);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 3; ++i) m(i, j) = {double(i), double(j), 0.5};
  io::write_mesh(dir / "m", g, m);
  std::ifstream obj(dir / "m.obj");
  std::string line;
  std::vector<std::string> vs, fs_;
  bool metric_comment = false;
  while (std::getline(obj, line)) {
    if (line.rfind("#", 0) == 0 && line.find("-a1*b1 + a2*b2 + a3*b3") != std::string::npos) metric_comment = true;
    if (line.rfind("v ", 0) == 0) vs.push_back(line);
    if (line.rfind("f ", 0) == 0) fs_.push_back(line);
  }
  CHECK(metric_comment);
  CHECK(vs.size() == 6);
  CHECK(vs[4] == "v 1 1 0.5");
  CHECK(fs_.size() == 4);
  CHECK(fs_[0] == "f 1 2 5");
  CHECK(fs_[1] == "f 1 5 4");
  // consistent winding: every triangle has positive orientation in the (x1, x2) plane
  for (const auto& f : fs_) {
    std::istringstream in(f.substr(2));
    int a, b, c;
    in >> a >> b >> c;
    const auto p = [&](int k) { return m.values()[k - 1]; };
    const double cr = (p(b).a1 - p(a).a1) * (p(c).a2 - p(a).a2) - (p(b).a2 - p(a).a2) * (p(c).a1 - p(a).a1);
    CHECK(cr > 0);
  }
  std::ifstream csv(dir / "m.csv");
  std::getline(csv, line);
  CHECK(line == "u,v,x1,x2,x3");
  std::getline(csv, line);
  CHECK(line == "0,0,0,0,0.5");
  CHECK_THROWS_AS(io::write_mesh(dir / "x", Grid2D{linspace(0, 1, 2), linspace(0, 1, 2)}, m), PreconditionError);
}

TEST_CASE("digest and seeds") {
  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") == "af63dc4c8601ec8c");
  const auto dir = test::scratch_dir("io_seed");
  io::write_atomic(dir / "s.json", R"({"X": [1, 1, 0], "Y": [-1, 1, 0], "l": [0, 0, 1]})");
  const auto s = io::read_seed(dir / "s.json");
  CHECK(s.Y == MinkowskiVec{-1, 1, 0});
  CHECK(s.x == MinkowskiVec{0, 0, 0});
  io::write_atomic(dir / "t.json", R"({"X": [1, 1], "Y": [-1, 1, 0], "l": [0, 0, 1]})");
  CHECK_THROWS_AS(io::read_seed(dir / "t.json"), FormatError);
}
