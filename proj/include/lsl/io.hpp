#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lsl/bonnet.hpp"
#include "lsl/chart.hpp"

namespace lsl::io {

using Json = nlohmann::ordered_json;

inline constexpr int kChartSchemaVersion = 1;

/// Chart document: schema_version, u_grid, v_grid, F and H as arrays of
/// rows (row index = v, column index = u), u0_index, v0_index, eps1, eps2,
/// optional L, M, N, K and metadata. Doubles are written in shortest
/// round-trip form, so write-then-read is bit-exact.
Json chart_to_json(const Chart& chart);

/// Parses and validates a chart document; throws FormatError.
Chart chart_from_json(const Json& doc);

void write_chart(const std::filesystem::path& path, const Chart& chart);
Chart read_chart(const std::filesystem::path& path);

/// Custom seed document: {"X": [a1,a2,a3], "Y": [...], "l": [...], "x": [...]}.
FrameState read_seed(const std::filesystem::path& path);

/// One numerical check; passes iff max_abs <= tolerance.
struct Check {
  std::string name;
  double max_abs = 0;
  double tolerance = 0;
  std::optional<double> l2;
  std::optional<double> order_estimate;

  bool pass() const { return max_abs <= tolerance; }
};

/// Structured run report: command, digest of the inputs, effective
/// tolerances, checks and a free-form summary.
class Report {
 public:
  explicit Report(std::string command);

  void set_inputs_digest(std::string digest) { digest_ = std::move(digest); }
  void set_tolerance(const std::string& name, double value) { tolerances_[name] = value; }
  void add_check(Check c) { checks_.push_back(std::move(c)); }
  Json& summary() { return summary_; }
  void set_wall_time(double seconds) { wall_time_ = seconds; }

  bool all_pass() const;
  const std::vector<Check>& checks() const { return checks_; }

  std::string dump() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::string digest_;
  Json tolerances_ = Json::object();
  std::vector<Check> checks_;
  Json summary_ = Json::object();
  std::optional<double> wall_time_;
};

/// Writes <stem>.obj (vertices and two triangles per grid cell) and
/// <stem>.csv (u, v, x1, x2, x3).
void write_mesh(const std::filesystem::path& stem, const Grid2D& grid, const MeshField& mesh);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string digest(std::string_view bytes);

}  // namespace lsl::io
