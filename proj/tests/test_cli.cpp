#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "lsl/io.hpp"
#include "support.hpp"

using namespace lsl;
namespace fs = std::filesystem;

namespace {

const fs::path& dir() {
  static const fs::path d = test::scratch_dir("cli");
  return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(LSL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

io::Json report(const std::string& name) { return io::Json::parse(io::read_file(path(name))); }

const io::Json& check(const io::Json& rep, const std::string& name) {
  for (const auto& c : rep["checks"])
    if (c["name"] == name) return c;
  FAIL("missing check " << name);
  static io::Json none;
  return none;
}

}  // namespace

TEST_CASE("corpus listing and charts") {
  CHECK(run("corpus list") == 0);
  CHECK(run("corpus show hyperbolic_cone") == 0);
  CHECK(run("corpus show torus") == 2);
  CHECK(run("corpus chart cylinder --grid 21x21 --out " + path("cyl.json")) == 0);
  CHECK(fs::exists(path("cyl.json")));
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("analyze") {
  CHECK(run("analyze enneper1 --report " + path("a1.json") + " --mesh " + path("a1")) == 0);
  const auto a1 = report("a1.json");
  CHECK(a1["summary"]["classification"]["kind"] == "first");
  CHECK(a1["summary"]["canonical"]["status"] == "pass");
  CHECK(a1["summary"]["H_range"][1].get<double>() < 1e-12);
  CHECK(fs::exists(path("a1.obj")));
  CHECK(fs::exists(path("a1.csv")));

  CHECK(run("analyze lorentz_sphere --report " + path("as.json")) == 0);
  const auto as = report("as.json");
  CHECK(as["summary"]["classification"]["kind"] == "not_general_type");
  CHECK(as["summary"]["canonical"]["status"] == "unavailable");

  CHECK(run("analyze enneper2 --report " + path("a2.json")) == 0);
  CHECK(report("a2.json")["summary"]["classification"]["kind"] == "second");

  io::write_atomic(path("neg.json"), R"({"schema_version": 1, "u_grid": [0, 1], "v_grid": [0, 1],
    "F": [[1, 1], [1, -1]], "H": [[0, 0], [0, 0]], "u0_index": 0, "v0_index": 0, "eps1": 1, "eps2": 1})");
  CHECK(run("analyze " + path("neg.json") + " --report " + path("neg_r.json")) == 2);
  CHECK(run("analyze enneper1 --report " + path("x.json") + " --grid 0x4") == 2);
  CHECK(run("analyze enneper1 --report " + path("x.json") + " --domain 0:1,0:1") == 2);
}

TEST_CASE("canonicalize") {
  const std::string c0 = "3.7224194364083982";
  CHECK(run("canonicalize hyperbolic_cone --u0 0 --v0 0 --tilde-u0 " + c0 + " --tilde-v0 " + c0 +
            " --grid 101x101 --out " + path("cone_c.json") + " --report " + path("cone_r.json")) == 0);
  const auto r = report("cone_r.json");
  CHECK(check(r, "closed_form_F_relative")["max_abs"].get<double>() <= 1e-6);
  CHECK(io::read_chart(path("cone_c.json")).canonical);

  CHECK(run("canonicalize enneper1 --grid 21x21 --out " + path("e_c.json") + " --report " + path("e_r.json")) == 0);
  const Chart e = io::read_chart(path("e_c.json"));
  CHECK(e.F(3, 4) == doctest::Approx(0.5 * std::pow(e.grid.u[3] - e.grid.v[4] + 2.0, 2)).epsilon(1e-9));

  CHECK(run("canonicalize lorentz_sphere --out " + path("s_c.json") + " --report " + path("s_r.json")) == 1);
  CHECK(report("s_r.json")["summary"].contains("error"));
  CHECK_FALSE(fs::exists(path("s_c.json")));
}

TEST_CASE("residual") {
  CHECK(run("corpus chart cylinder --grid 21x21 --out " + path("cyl.json")) == 0);
  CHECK(run("residual " + path("cyl.json") + " --mode general --report " + path("rg.json")) == 0);
  CHECK(check(report("rg.json"), "general_residual")["max_abs"].get<double>() <= 1e-12);

  CHECK(run("corpus chart enneper1 --grid 101x101 --out " + path("e101.json")) == 0);
  CHECK(run("corpus chart enneper1 --grid 201x201 --out " + path("e201.json")) == 0);
  CHECK(run("residual " + path("e101.json") + " --mode minimal --refined " + path("e201.json") + " --report " +
            path("rm.json")) == 0);
  const auto rep_m = report("rm.json");
  const auto& m = check(rep_m, "minimal_residual");
  CHECK(m["max_abs"].get<double>() <= 1e-3);
  CHECK(m["order_estimate"].get<double>() == doctest::Approx(2.0).epsilon(0.1));

  CHECK(run("corpus chart lorentz_sphere --grid 11x11 --out " + path("sph.json")) == 0);
  CHECK(run("residual " + path("sph.json") + " --mode cmc --report " + path("rs.json")) == 2);
  CHECK(run("residual " + path("sph.json") + " --mode bogus --report " + path("rs.json")) == 2);
}

TEST_CASE("reconstruct") {
  CHECK(run("corpus chart cylinder --grid 61x61 --fh-only --out " + path("cyl61.json")) == 0);
  CHECK(run("reconstruct " + path("cyl61.json") + " --mesh " + path("cm") + " --report " + path("rc.json")) == 0);
  const auto rc = report("rc.json");
  CHECK(check(rc, "form_mismatch_F")["pass"] == true);
  CHECK(fs::exists(path("cm.obj")));

  CHECK(run("reconstruct " + path("cyl61.json") + " --pair --mesh " + path("pm") + " --report " + path("rp.json")) ==
        0);
  const auto rp = report("rp.json");
  CHECK(rp["summary"]["p"]["recomputed"]["L"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rp["summary"]["m"]["recomputed"]["L"][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(rp["summary"]["m"]["recomputed"]["N"][1].get<double>() == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(rp["summary"]["pair_congruence"] == "not_congruent");
  CHECK(fs::exists(path("pm_p.obj")));
  CHECK(fs::exists(path("pm_m.csv")));

  CHECK(run("corpus chart cylinder --grid 41x41 --perturb-F 1.05 --out " + path("cylp.json")) == 0);
  CHECK(run("reconstruct " + path("cylp.json") + " --mesh " + path("pp") + " --report " + path("rpp.json")) == 0);
  const auto rpp = report("rpp.json");
  CHECK(rpp["summary"]["reconstruction"]["natural_warning"] == true);
  CHECK(rpp["summary"]["reconstruction"]["compat_max"].get<double>() == doctest::Approx(0.1).epsilon(0.1));

  io::write_atomic(path("seed.json"), R"({"X": [1, 0, 0], "Y": [-1, 1, 0], "l": [0, 0, 1]})");
  CHECK(run("reconstruct " + path("cyl61.json") + " --seed " + path("seed.json") + " --mesh " + path("sm") +
            " --report " + path("rsd.json")) == 2);
  io::write_atomic(path("seed2.json"), R"({"X": [1, 1, 0], "Y": [-1, 1, 0], "l": [0, 0, 1], "x": [5, 0, 0]})");
  CHECK(run("reconstruct " + path("cyl61.json") + " --seed " + path("seed2.json") + " --mesh " + path("sm") +
            " --report " + path("rsd.json")) == 0);
}

TEST_CASE("reports are reproducible and carry wall time only on request") {
  CHECK(run("corpus chart enneper1 --grid 41x41 --out " + path("e41.json")) == 0);
  CHECK(run("reconstruct " + path("e41.json") + " --mesh " + path("d1") + " --report " + path("d1.json")) == 0);
  CHECK(run("reconstruct " + path("e41.json") + " --mesh " + path("d2") + " --report " + path("d2.json")) == 0);
  CHECK(io::read_file(path("d1.json")) == io::read_file(path("d2.json")));
  CHECK_FALSE(report("d1.json").contains("wall_time_s"));
  CHECK(run("--timing reconstruct " + path("e41.json") + " --mesh " + path("d3") + " --report " + path("d3.json")) ==
        0);
  CHECK(report("d3.json").contains("wall_time_s"));
}
