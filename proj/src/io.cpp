#include "lsl/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lsl/errors.hpp"

namespace lsl::io {

namespace {

Json field_to_json(const Field2D& f) {
  Json rows = Json::array();
  for (std::size_t j = 0; j < f.nv(); ++j) {
    Json row = Json::array();
    for (std::size_t i = 0; i < f.nu(); ++i) row.push_back(f(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

double number(const Json& x, const std::string& where) {
  if (!x.is_number()) throw FormatError(where + " is not a number");
  return x.get<double>();
}

std::vector<double> axis_from_json(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw FormatError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (std::size_t k = 0; k < doc[key].size(); ++k)
    out.push_back(number(doc[key][k], std::string(key) + "[" + std::to_string(k) + "]"));
  return out;
}

Field2D field_from_json(const Json& doc, const char* key, const Grid2D& g) {
  if (!doc.contains(key) || !doc[key].is_array()) throw FormatError(std::string("missing 2-D array '") + key + "'");
  const Json& rows = doc[key];
  if (rows.size() != g.nv())
    throw FormatError(std::string(key) + " has " + std::to_string(rows.size()) + " rows, expected |v_grid| = " +
                      std::to_string(g.nv()));
  Field2D f(g);
  for (std::size_t j = 0; j < g.nv(); ++j) {
    if (!rows[j].is_array() || rows[j].size() != g.nu())
      throw FormatError(std::string(key) + " row " + std::to_string(j) + " does not have |u_grid| = " +
                        std::to_string(g.nu()) + " entries");
    for (std::size_t i = 0; i < g.nu(); ++i)
      f(i, j) = number(rows[j][i], std::string(key) + "[" + std::to_string(j) + "][" + std::to_string(i) + "]");
  }
  return f;
}

std::int64_t integer(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) throw FormatError(std::string("missing integer '") + key + "'");
  return doc[key].get<std::int64_t>();
}

MinkowskiVec vec_from_json(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != 3)
    throw FormatError(std::string("seed entry '") + key + "' must be an array of three numbers");
  return {number(doc[key][0], key), number(doc[key][1], key), number(doc[key][2], key)};
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json chart_to_json(const Chart& c) {
  Json doc;
  doc["schema_version"] = kChartSchemaVersion;
  doc["u_grid"] = c.grid.u;
  doc["v_grid"] = c.grid.v;
  doc["u0_index"] = c.u0_index;
  doc["v0_index"] = c.v0_index;
  doc["eps1"] = c.eps1;
  doc["eps2"] = c.eps2;
  doc["F"] = field_to_json(c.F);
  doc["H"] = field_to_json(c.H);
  if (c.L) doc["L"] = field_to_json(*c.L);
  if (c.M) doc["M"] = field_to_json(*c.M);
  if (c.N) doc["N"] = field_to_json(*c.N);
  if (c.K) doc["K"] = field_to_json(*c.K);
  Json meta = Json::object();
  for (const auto& [k, v] : c.metadata) meta[k] = v;
  if (c.canonical) meta["canonical"] = "true";
  if (!meta.empty()) doc["metadata"] = std::move(meta);
  return doc;
}

Chart chart_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("chart document is not an object");
  const auto version = integer(doc, "schema_version");
  if (version != kChartSchemaVersion) throw FormatError("unsupported chart schema_version " + std::to_string(version));
  Chart c;
  c.grid = {axis_from_json(doc, "u_grid"), axis_from_json(doc, "v_grid")};
  c.grid.validate();
  c.F = field_from_json(doc, "F", c.grid);
  c.H = field_from_json(doc, "H", c.grid);
  for (const auto& [key, slot] : {std::pair{"L", &c.L}, {"M", &c.M}, {"N", &c.N}, {"K", &c.K}})
    if (doc.contains(key)) *slot = field_from_json(doc, key, c.grid);
  const auto iu = integer(doc, "u0_index"), jv = integer(doc, "v0_index");
  if (iu < 0 || jv < 0) throw FormatError("negative initial point index");
  c.u0_index = static_cast<std::size_t>(iu);
  c.v0_index = static_cast<std::size_t>(jv);
  c.eps1 = static_cast<int>(integer(doc, "eps1"));
  c.eps2 = static_cast<int>(integer(doc, "eps2"));
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) throw FormatError("metadata must be an object");
    for (const auto& [k, v] : doc["metadata"].items()) {
      if (!v.is_string()) throw FormatError("metadata value '" + k + "' is not a string");
      if (k == "canonical")
        c.canonical = v.get<std::string>() == "true";
      else
        c.metadata[k] = v.get<std::string>();
    }
  }
  c.validate();
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_chart(const std::filesystem::path& path, const Chart& chart) {
  write_atomic(path, chart_to_json(chart).dump(1) + "\n");
}

Chart read_chart(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return chart_from_json(doc);
}

FrameState read_seed(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("seed document is not an object");
  FrameState s{vec_from_json(doc, "X"), vec_from_json(doc, "Y"), vec_from_json(doc, "l"), {0, 0, 0}};
  if (doc.contains("x")) s.x = vec_from_json(doc, "x");
  return s;
}

Report::Report(std::string command) : command_(std::move(command)) {}

bool Report::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass()) return false;
  return true;
}

std::string Report::dump() const {
  Json doc;
  doc["command"] = command_;
  doc["inputs_digest"] = digest_;
  doc["tolerances"] = tolerances_;
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json j;
    j["name"] = c.name;
    j["max_abs"] = finite_or_null(c.max_abs);
    j["l2"] = c.l2 ? finite_or_null(*c.l2) : Json(nullptr);
    j["order_estimate"] = c.order_estimate ? finite_or_null(*c.order_estimate) : Json(nullptr);
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass();
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  doc["summary"] = summary_;
  doc["all_pass"] = all_pass();
  if (wall_time_) doc["wall_time_s"] = *wall_time_;
  return doc.dump(2) + "\n";
}

void Report::write(const std::filesystem::path& path) const { write_atomic(path, dump()); }

void write_mesh(const std::filesystem::path& stem, const Grid2D& grid, const MeshField& mesh) {
  if (!mesh.same_shape(grid)) throw PreconditionError("write_mesh: mesh shape does not match the grid");
  const std::size_t nu = grid.nu(), nv = grid.nv();
  fmt::memory_buffer obj;
  fmt::format_to(std::back_inserter(obj),
                 "# Lorentz surface mesh in R^3_1, metric <a,b> = -a1*b1 + a2*b2 + a3*b3 (signature -,+,+)\n"
                 "# vertex coordinates (x1, x2, x3); grid {} x {} (u x v); vertex j*{}+i+1 is node (u_i, v_j)\n",
                 nu, nv, nu);
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t i = 0; i < nu; ++i) {
      const auto& p = mesh(i, j);
      fmt::format_to(std::back_inserter(obj), "v {} {} {}\n", p.a1, p.a2, p.a3);
    }
  for (std::size_t j = 0; j + 1 < nv; ++j)
    for (std::size_t i = 0; i + 1 < nu; ++i) {
      const std::size_t a = j * nu + i + 1, b = a + 1, c = a + nu + 1, d = a + nu;
      fmt::format_to(std::back_inserter(obj), "f {} {} {}\nf {} {} {}\n", a, b, c, a, c, d);
    }
  fmt::memory_buffer csv;
  fmt::format_to(std::back_inserter(csv), "u,v,x1,x2,x3\n");
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t i = 0; i < nu; ++i) {
      const auto& p = mesh(i, j);
      fmt::format_to(std::back_inserter(csv), "{},{},{},{},{}\n", grid.u[i], grid.v[j], p.a1, p.a2, p.a3);
    }
  auto with_ext = [&](const char* ext) {
    auto p = stem;
    p += ext;
    return p;
  };
  write_atomic(with_ext(".obj"), std::string_view(obj.data(), obj.size()));
  write_atomic(with_ext(".csv"), std::string_view(csv.data(), csv.size()));
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace lsl::io
