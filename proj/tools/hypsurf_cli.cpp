// hypsurf command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypsurf/hypsurf.h"

namespace {

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kUsage = 2, kInfeasible = 3 };

constexpr double kMaxCandidates = 1e10;
constexpr std::int64_t kMaxSurveyLevel = 10'000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// One output cell: either a JSON-ready literal or absent.
struct Cell {
  enum class Kind { kNumber, kString, kNull } kind = Kind::kNull;
  std::string text;

  static Cell number(double x) {
    if (!std::isfinite(x)) return {};
    return {Kind::kNumber, fmt_double(x)};
  }
  static Cell integer(std::int64_t x) { return {Kind::kNumber, std::to_string(x)}; }
  static Cell decimal(const char* digits) { return {Kind::kString, digits}; }
  static Cell boolean(bool b) { return {Kind::kNumber, b ? "1" : "0"}; }
  static Cell string(std::string s) { return {Kind::kString, std::move(s)}; }
  static Cell null() { return {}; }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> summary;  // key, JSON literal
};

std::string csv_field(const Cell& c) {
  if (c.kind == Cell::Kind::kNull) return "";
  if (c.kind == Cell::Kind::kString) {
    if (c.text.find_first_of(",\"\n") == std::string::npos) return c.text;
    std::string q = "\"";
    for (char ch : c.text) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return c.text;
}

std::string json_field(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kNull: return "null";
    case Cell::Kind::kString: return nlohmann::json(c.text).dump();
    case Cell::Kind::kNumber: return c.text;
  }
  return "null";
}

std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  for (const auto& [key, value] : t.summary) os << "# " << key << ": " << value << "\n";
  return os.str();
}

std::string render_json(const Table& t, const nlohmann::json& meta) {
  std::ostringstream os;
  os << "{\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    {" : "\n    {");
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      os << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": " << json_field(t.rows[r][i]);
    }
    os << "}";
  }
  os << (t.rows.empty() ? "],\n" : "\n  ],\n");
  os << "  \"summary\": {";
  for (std::size_t i = 0; i < t.summary.size(); ++i) {
    os << (i ? ", " : "") << nlohmann::json(t.summary[i].first).dump() << ": " << t.summary[i].second;
  }
  os << "},\n  \"meta\": " << meta.dump() << "\n}\n";
  return os.str();
}

// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

struct GlobalOptions {
  std::string out;
  std::string format = "csv";
  bool timing = false;
};

int emit(const GlobalOptions& g, const Table& table, nlohmann::json meta, double seconds) {
  std::fprintf(stderr, "wall-clock: %.3f s\n", seconds);
  meta["version"] = hs_version();
  if (g.timing) meta["wall_clock_s"] = seconds;
  const std::string text = g.format == "json" ? render_json(table, meta) : render_csv(table);
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_atomically(g.out, text);
  }
  return kSuccess;
}

std::string status_text(hs_status s) {
  return std::string(hs_status_name(s)) + ": " + hs_last_error_message();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

int run_survey(const GlobalOptions& g, std::int64_t n_min, std::int64_t n_max) {
  if (n_min < 3 || n_max > kMaxSurveyLevel || n_min > n_max) {
    throw UsageError("survey needs 3 <= n-min <= n-max <= 10000");
  }
  const auto start = std::chrono::steady_clock::now();
  Table t;
  t.columns = {"N", "index_d", "genus", "cusps", "systole", "area", "compacted_genus", "compacted_volume"};
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    hs_surface_data data;
    hs_compacted_surface compact;
    if (auto s = hs_surface_data_get(n, &data); s != HS_OK) throw std::runtime_error(status_text(s));
    if (auto s = hs_compacted_surface_get(n, 1.0, &compact); s != HS_OK) throw std::runtime_error(status_text(s));
    t.rows.push_back({Cell::integer(n), Cell::decimal(data.index_d), Cell::decimal(data.genus),
                      Cell::decimal(data.cusps), Cell::number(data.systole), Cell::number(data.area),
                      Cell::decimal(compact.genus), Cell::number(compact.volume)});
  }
  nlohmann::json meta = {{"command", "survey"}, {"config", {{"n_min", n_min}, {"n_max", n_max}}}};
  return emit(g, t, meta, seconds_since(start));
}

int run_systole(const GlobalOptions& g, std::int64_t level, std::optional<std::int64_t> bound_opt,
                unsigned workers) {
  if (level < 3) throw UsageError("systole needs --level >= 3");
  if (level > 3'000'000) throw UsageError("systole level too large");
  const std::int64_t bound = bound_opt.value_or(10 * level * level);
  if (bound < level * level) {
    throw UsageError("--entry-bound must be >= N^2 = " + std::to_string(level * level) +
                     " so that the witness lies inside the search box");
  }
  const double projected = hs_projected_candidates(level, bound);
  if (projected > kMaxCandidates) {
    std::fprintf(stderr, "refusing: search would visit ~%.3g candidates (limit %.0e)\n", projected, kMaxCandidates);
    return kInfeasible;
  }

  const auto start = std::chrono::steady_clock::now();
  hs_matrix w;
  if (auto s = hs_witness_matrix(level, &w); s != HS_OK) throw std::runtime_error(status_text(s));
  int in_gamma = 0;
  if (auto s = hs_is_in_gamma(&w, level, &in_gamma); s != HS_OK) throw std::runtime_error(status_text(s));
  const std::int64_t expected = level * level - 2;
  std::int64_t found = 0;
  const hs_status s = hs_min_hyperbolic_trace(level, bound, workers, &found);
  if (s != HS_OK && s != HS_ERR_NOT_FOUND) throw std::runtime_error(status_text(s));
  const bool pass = s == HS_OK && found == expected && in_gamma == 1 && std::llabs(w.a + w.d) == expected;

  Table t;
  t.columns = {"N", "entry_bound", "witness_a", "witness_b", "witness_c", "witness_d", "witness_in_gamma",
               "expected_abs_trace", "min_abs_trace", "pass"};
  t.rows.push_back({Cell::integer(level), Cell::integer(bound), Cell::integer(w.a), Cell::integer(w.b),
                    Cell::integer(w.c), Cell::integer(w.d), Cell::boolean(in_gamma == 1), Cell::integer(expected),
                    s == HS_OK ? Cell::integer(found) : Cell::null(), Cell::boolean(pass)});
  nlohmann::json meta = {{"command", "systole"}, {"config", {{"level", level}, {"entry_bound", bound}}}};
  emit(g, t, meta, seconds_since(start));
  return pass ? kSuccess : kCheckFailed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_schedule(const GlobalOptions& g, const std::string& config_path, double radius, std::int64_t j_max,
                 unsigned workers) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("--radius must be positive");
  if (j_max < 1) throw UsageError("--j-max must be >= 1");
  const std::string text = read_file(config_path);

  hs_schedule* raw = nullptr;
  if (hs_schedule_from_json(text.c_str(), &raw) != HS_OK) throw UsageError(hs_last_error_message());
  std::unique_ptr<hs_schedule, decltype(&hs_schedule_free)> schedule(raw, hs_schedule_free);

  const auto start = std::chrono::steady_clock::now();
  hs_report* report_raw = nullptr;
  if (auto s = hs_classify_schedule(schedule.get(), radius, static_cast<size_t>(j_max), workers, &report_raw);
      s != HS_OK) {
    throw std::runtime_error(status_text(s));
  }
  std::unique_ptr<hs_report, decltype(&hs_report_free)> report(report_raw, hs_report_free);

  Table t;
  t.columns = {"j", "N", "t", "b_pairs", "genus", "volume", "bs_ratio", "pl_sum", "pl_sum_err",
               "pl_norm", "lower", "upper", "valid"};
  for (size_t i = 0; i < hs_report_row_count(report.get()); ++i) {
    hs_schedule_row row;
    if (auto s = hs_report_row(report.get(), i, &row); s != HS_OK) throw std::runtime_error(status_text(s));
    const bool v = row.valid != 0;
    const bool b = v && row.has_bounds != 0;
    t.rows.push_back({Cell::integer(static_cast<std::int64_t>(row.j)), Cell::integer(row.level),
                      Cell::number(row.pinch_length), Cell::decimal(row.pinched_count), Cell::decimal(row.genus),
                      Cell::number(row.volume), v ? Cell::number(row.bs_ratio) : Cell::null(),
                      v ? Cell::number(row.plancherel_sum.value) : Cell::null(),
                      v ? Cell::number(row.plancherel_sum.radius) : Cell::null(),
                      v ? Cell::number(row.plancherel_normalized.value) : Cell::null(),
                      b ? Cell::number(row.lower) : Cell::null(), b ? Cell::number(row.upper) : Cell::null(),
                      Cell::boolean(v)});
  }
  hs_verdict verdict;
  hs_report_verdict(report.get(), &verdict);
  t.summary = {
      {"valid_rows", std::to_string(verdict.valid_rows)},
      {"bs_vanishing", verdict.bs_vanishing ? "true" : "false"},
      {"plancherel_expected", nlohmann::json(verdict.plancherel_expected).dump()},
      {"plancherel_observed", nlohmann::json(verdict.plancherel_observed).dump()},
      {"tail_loglog_slope", fmt_double(verdict.tail_loglog_slope)},
      {"decreasing_from_j", verdict.decreasing_from ? std::to_string(verdict.decreasing_from) : "null"},
  };

  nlohmann::json config_echo = nlohmann::json::parse(text);
  nlohmann::json meta = {{"command", "schedule"},
                         {"config", {{"schedule", config_echo}, {"radius", radius}, {"j_max", j_max}}}};
  return emit(g, t, meta, seconds_since(start));
}

std::vector<double> parse_supports(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--supports: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) {
      throw UsageError("--supports: '" + item + "' is not a positive number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--supports needs at least one value");
  return out;
}

int run_trace_check(const GlobalOptions& g, const std::string& supports_text, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("--tol must be positive");
  const auto supports = parse_supports(supports_text);
  const auto start = std::chrono::steady_clock::now();

  Table t;
  t.columns = {"S", "phi0", "plancherel", "abs_error", "tail_bound", "truncation", "pass", "error"};
  bool all_pass = true;
  for (double S : supports) {
    hs_test_function* phi_raw = nullptr;
    if (auto s = hs_bump_create(S, 1.0, &phi_raw); s != HS_OK) throw std::runtime_error(status_text(s));
    std::unique_ptr<hs_test_function, decltype(&hs_test_function_free)> phi(phi_raw, hs_test_function_free);
    double phi0 = 0;
    hs_test_function_eval(phi.get(), 0.0, &phi0);
    hs_plancherel_result r;
    const hs_status s = hs_plancherel_integral(phi.get(), 0.0, &r);
    if (s != HS_OK) {
      all_pass = false;
      t.rows.push_back({Cell::number(S), Cell::number(phi0), Cell::null(), Cell::null(), Cell::null(), Cell::null(),
                        Cell::boolean(false), Cell::string(status_text(s))});
      continue;
    }
    const double err = std::fabs(r.value - phi0);
    const bool pass = err <= tol;
    all_pass = all_pass && pass;
    t.rows.push_back({Cell::number(S), Cell::number(phi0), Cell::number(r.value), Cell::number(err),
                      Cell::number(r.tail_bound), Cell::number(r.truncation), Cell::boolean(pass), Cell::null()});
  }
  nlohmann::json meta = {{"command", "trace-check"}, {"config", {{"supports", supports}, {"tol", tol}}}};
  emit(g, t, meta, seconds_since(start));
  return all_pass ? kSuccess : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length-spectrum functionals of pinched congruence surfaces"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--timing", g.timing, "Record wall-clock time in JSON metadata");
  unsigned workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  std::int64_t n_min = 0, n_max = 0;
  auto* survey = app.add_subcommand("survey", "Level data of X(N) and X_t(N) for a range of N");
  survey->add_option("--n-min", n_min)->required();
  survey->add_option("--n-max", n_max)->required();

  std::int64_t level = 0;
  std::optional<std::int64_t> entry_bound;
  auto* systole = app.add_subcommand("systole", "Witness and exhaustive minimal-trace search in Gamma(N)");
  systole->add_option("--level", level)->required();
  systole->add_option("--entry-bound", entry_bound, "Search box half-width (default 10 N^2)");

  std::string config;
  double radius = 0;
  std::int64_t j_max = 0;
  auto* schedule = app.add_subcommand("schedule", "Convergence functionals along a schedule of X_{t_j}(N_j)");
  schedule->add_option("--config", config)->required();
  schedule->add_option("--radius", radius)->required();
  schedule->add_option("--j-max", j_max)->required();

  std::string supports;
  double tol = 0;
  auto* trace_check = app.add_subcommand("trace-check", "Plancherel identity for bump test functions");
  trace_check->add_option("--supports", supports, "Comma-separated supports S")->required();
  trace_check->add_option("--tol", tol)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*survey) return run_survey(g, n_min, n_max);
    if (*systole) return run_systole(g, level, entry_bound, workers);
    if (*schedule) return run_schedule(g, config, radius, j_max, workers);
    if (*trace_check) return run_trace_check(g, supports, tol);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckFailed;
  }
  return kUsage;
}
