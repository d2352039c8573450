#include "v2rdm/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "v2rdm/ground_state.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace v2rdm {

namespace {

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = lo + k * step;
    if (v > hi + 1e-12) break;
    out.push_back(v);
  }
  return out;
}

ConditionLevel level_from_string(const std::string& s) {
  if (s == "2pos") return ConditionLevel::TwoPos;
  if (s == "2pos_t2") return ConditionLevel::TwoPosT2;
  throw std::invalid_argument("unknown condition level: " + s);
}

template <typename F>
std::vector<SweepRecord> parallel_map(int n, int threads, F&& fn) {
  std::vector<SweepRecord> out(n);
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void check_strictly_increasing(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw std::invalid_argument(std::string(name) + " grid empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g[i] <= g[i - 1])
      throw std::invalid_argument(std::string(name) +
                                  " grid must be strictly increasing");
}

}  // namespace

void ExperimentConfig::validate_grids() const {
  if (!v_grid.empty()) check_strictly_increasing(v_grid, "V");
  if (!u_over_v_grid.empty()) check_strictly_increasing(u_over_v_grid, "U/V");
  if (!l_grid.empty()) {
    for (std::size_t i = 1; i < l_grid.size(); ++i)
      if (l_grid[i] <= l_grid[i - 1])
        throw std::invalid_argument("L grid must be strictly increasing");
  }
  if (levels.empty()) throw std::invalid_argument("no condition levels selected");
}

LatticeSpec ExperimentConfig::lattice(int l) const {
  if ((!n_up || !n_down) && l % 2 != 0)
    throw std::invalid_argument("default half filling needs even L");
  LatticeSpec spec;
  spec.sites = l;
  spec.boundary = boundary;
  spec.n_up = n_up.value_or(l / 2);
  spec.n_down = n_down.value_or(l / 2);
  spec.validate();
  return spec;
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions opts;
  opts.eps = eps;
  opts.max_iter = max_iter;
  return opts;
}

ExperimentConfig ExperimentConfig::fig1_defaults() {
  ExperimentConfig c;
  c.sites = 6;
  c.t = 0.0;
  c.u = 1.0;
  c.v_grid = arange(0.25, 1.0, 0.05);
  c.levels = {ConditionLevel::TwoPos};
  return c;
}

ExperimentConfig ExperimentConfig::fig2_defaults() {
  ExperimentConfig c;
  c.sites = 6;
  c.sites_t2 = 4;
  c.t = 1.0;
  c.u = 1.0;
  c.u_over_v_grid = arange(0.5, 4.0, 0.25);
  c.levels = {ConditionLevel::TwoPos, ConditionLevel::TwoPosT2};
  return c;
}

ExperimentConfig ExperimentConfig::scale_defaults() {
  ExperimentConfig c;
  c.t = 0.0;
  c.u = 1.0;
  c.v_grid = {0.25};
  c.l_grid = {4, 6, 8, 10, 12};
  c.levels = {ConditionLevel::TwoPos};
  return c;
}

std::string emit_config(const ExperimentConfig& c) {
  json j;
  j["sites"] = c.sites;
  j["sites_t2"] = c.sites_t2;
  j["boundary"] = (c.boundary == Boundary::periodic) ? "periodic" : "open";
  j["t"] = c.t;
  j["u"] = c.u;
  j["v_grid"] = c.v_grid;
  j["u_over_v_grid"] = c.u_over_v_grid;
  j["l_grid"] = c.l_grid;
  std::vector<std::string> levels;
  for (auto l : c.levels) levels.emplace_back(to_string(l));
  j["levels"] = levels;
  j["eps"] = c.eps;
  j["max_iter"] = c.max_iter;
  if (c.n_up) j["n_up"] = *c.n_up;
  if (c.n_down) j["n_down"] = *c.n_down;
  j["sz_row"] = c.sz_row;
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  c.sites = j.value("sites", c.sites);
  c.sites_t2 = j.value("sites_t2", c.sites_t2);
  const std::string b = j.value("boundary", "periodic");
  if (b == "periodic")
    c.boundary = Boundary::periodic;
  else if (b == "open")
    c.boundary = Boundary::open;
  else
    throw std::invalid_argument("config: boundary must be periodic or open");
  c.t = j.value("t", c.t);
  c.u = j.value("u", c.u);
  c.v_grid = j.value("v_grid", c.v_grid);
  c.u_over_v_grid = j.value("u_over_v_grid", c.u_over_v_grid);
  c.l_grid = j.value("l_grid", c.l_grid);
  if (j.contains("levels")) {
    c.levels.clear();
    for (const auto& s : j["levels"])
      c.levels.push_back(level_from_string(s.get<std::string>()));
  }
  c.eps = j.value("eps", c.eps);
  c.max_iter = j.value("max_iter", c.max_iter);
  if (j.contains("n_up")) c.n_up = j["n_up"].get<int>();
  if (j.contains("n_down")) c.n_down = j["n_down"].get<int>();
  c.sz_row = j.value("sz_row", c.sz_row);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.threads = j.value("threads", c.threads);
  return c;
}

bool SweepResult::any_flagged() const {
  for (const auto& r : records)
    if (r.flagged) return true;
  return false;
}

namespace {

SweepRecord solve_point(const ExperimentConfig& config, int sites, double t,
                        double u, double v, ConditionLevel level,
                        double energy_ref, bool ref_is_oracle) {
  const auto t0 = std::chrono::steady_clock::now();

  LatticeSpec spec = config.lattice(sites);
  HubbardParams params{t, u, v};
  V2rdmOptions opts;
  opts.solver = config.solver_options();
  opts.sz_row = config.sz_row;
  V2rdmResult res = solve(spec, params, level, opts);

  SweepRecord rec;
  rec.t = t;
  rec.u = u;
  rec.v = v;
  rec.u_over_v = (v != 0.0) ? u / v : std::numeric_limits<double>::infinity();
  rec.sites = sites;
  rec.level = to_string(level);
  rec.energy_sdp = res.energy;
  rec.energy_ref = energy_ref;
  rec.error = energy_ref - res.energy;
  rec.gap = res.gap;
  rec.iters = res.iterations;
  rec.wall_ms = elapsed_ms(t0);
  rec.status = to_string(res.status);

  if (res.status != SolveStatus::converged) {
    rec.flagged = true;
  } else if (ref_is_oracle) {
    // lower-bound property per record
    rec.flagged = rec.error < -1e-6 * (1.0 + std::abs(energy_ref));
  } else {
    rec.flagged = std::abs(rec.error) > 1e-4 * sites;
  }
  return rec;
}

}  // namespace

SweepResult run_fig1_sweep(const ExperimentConfig& config) {
  config.validate_grids();
  if (config.t != 0.0)
    throw std::invalid_argument("fig1 sweep requires t = 0");
  if (config.v_grid.empty())
    throw std::invalid_argument("fig1 sweep requires a V grid");

  SweepResult out;
  out.experiment = "fig1";
  const int n = static_cast<int>(config.v_grid.size());
  out.records = parallel_map(n, config.threads, [&](int i) {
    const double v = config.v_grid[i];
    const double ref = analytic_t0_energy(config.sites, config.u, v);
    return solve_point(config, config.sites, 0.0, config.u, v,
                       config.levels.front(), ref, /*ref_is_oracle=*/false);
  });
  return out;
}

SweepResult run_fig2_sweep(const ExperimentConfig& config) {
  config.validate_grids();
  if (config.t != 1.0 || config.u != 1.0)
    throw std::invalid_argument("fig2 sweep requires t = U = 1");
  if (config.u_over_v_grid.empty())
    throw std::invalid_argument("fig2 sweep requires a U/V grid");

  struct Point {
    double ratio;
    ConditionLevel level;
  };
  std::vector<Point> points;
  for (auto level : config.levels)
    for (double ratio : config.u_over_v_grid) points.push_back({ratio, level});

  SweepResult out;
  out.experiment = "fig2";
  out.records =
      parallel_map(static_cast<int>(points.size()), config.threads, [&](int i) {
        const auto& pt = points[i];
        const int sites =
            (pt.level == ConditionLevel::TwoPosT2) ? config.sites_t2 : config.sites;
        const double v = config.u / pt.ratio;
        LatticeSpec spec = config.lattice(sites);
        const SecondQuantizedOperator h =
            build_extended_hubbard(spec, {config.t, config.u, v});
        FockBasis basis(spec.sites, spec.n_up, spec.n_down);
        GroundStateResult ed = ground_state(h, basis);
        return solve_point(config, sites, config.t, config.u, v, pt.level,
                           ed.energy, /*ref_is_oracle=*/true);
      });
  return out;
}

SweepResult run_scaling_benchmark(const ExperimentConfig& config) {
  config.validate_grids();
  if (config.t != 0.0)
    throw std::invalid_argument("scaling benchmark requires t = 0");
  if (config.l_grid.empty())
    throw std::invalid_argument("scaling benchmark requires an L grid");
  const double v = config.v_grid.empty() ? 0.25 : config.v_grid.front();

  SweepResult out;
  out.experiment = "scale";
  // sequential on purpose: wall-time measurements should not contend
  for (int l : config.l_grid) {
    const double ref = analytic_t0_energy(l, config.u, v);
    out.records.push_back(solve_point(config, l, 0.0, config.u, v,
                                      ConditionLevel::TwoPos, ref,
                                      /*ref_is_oracle=*/false));
  }

  // log-log fit of wall time against L
  const int n = static_cast<int>(out.records.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& r : out.records) {
      const double x = std::log(static_cast<double>(r.sites));
      const double y = std::log(std::max<long>(r.wall_ms, 1));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    ScalingFit fit;
    const double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (const auto& r : out.records) {
      const double x = std::log(static_cast<double>(r.sites));
      const double y = std::log(std::max<long>(r.wall_ms, 1));
      const double e = y - (fit.intercept + fit.slope * x);
      ss_res += e * e;
    }
    fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    out.fit = fit;
  }
  return out;
}

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

}  // namespace

void emit_results(const SweepResult& result, const std::string& csv_path,
                  const std::string& json_path) {
  std::ostringstream csv;
  csv << "t,U,V,u_over_v,L,level,energy_sdp,energy_ref,error,gap,iters,wall_ms,"
         "status\n";
  for (const auto& r : result.records) {
    csv << format_double(r.t) << "," << format_double(r.u) << ","
        << format_double(r.v) << "," << format_double(r.u_over_v) << ","
        << r.sites << "," << r.level << "," << format_double(r.energy_sdp)
        << "," << format_double(r.energy_ref) << "," << format_double(r.error)
        << "," << format_double(r.gap) << "," << r.iters << "," << r.wall_ms
        << "," << r.status << "\n";
  }
  atomic_write(csv_path, csv.str());

  json j;
  j["schema"] = "v2rdm-sweep/1";
  j["experiment"] = result.experiment;
  j["points"] = json::array();
  for (const auto& r : result.records) {
    json p;
    p["t"] = r.t;
    p["U"] = r.u;
    p["V"] = r.v;
    if (std::isfinite(r.u_over_v)) p["u_over_v"] = r.u_over_v;
    p["L"] = r.sites;
    p["level"] = r.level;
    p["energy_sdp"] = r.energy_sdp;
    p["energy_ref"] = r.energy_ref;
    p["error"] = r.error;
    p["gap"] = r.gap;
    p["iters"] = r.iters;
    p["wall_ms"] = r.wall_ms;
    p["status"] = r.status;
    p["flagged"] = r.flagged;
    j["points"].push_back(p);
  }
  if (result.fit) {
    j["fit"] = {{"slope", result.fit->slope},
                {"intercept", result.fit->intercept},
                {"r_squared", result.fit->r_squared}};
  }
  atomic_write(json_path, j.dump(2) + "\n");
}

SweepResult parse_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  SweepResult out;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty CSV: " + path);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 13)
      throw std::runtime_error("bad CSV record: " + line);
    SweepRecord r;
    r.t = std::stod(fields[0]);
    r.u = std::stod(fields[1]);
    r.v = std::stod(fields[2]);
    r.u_over_v = (fields[3] == "inf")
                     ? std::numeric_limits<double>::infinity()
                     : std::stod(fields[3]);
    r.sites = std::stoi(fields[4]);
    r.level = fields[5];
    r.energy_sdp = std::stod(fields[6]);
    r.energy_ref = std::stod(fields[7]);
    r.error = std::stod(fields[8]);
    r.gap = std::stod(fields[9]);
    r.iters = std::stoi(fields[10]);
    r.wall_ms = std::stol(fields[11]);
    r.status = fields[12];
    out.records.push_back(r);
  }
  return out;
}

SweepResult parse_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  json j = json::parse(is);
  if (j.value("schema", "") != "v2rdm-sweep/1")
    throw std::runtime_error("unexpected schema in " + path);
  SweepResult out;
  out.experiment = j.value("experiment", "");
  for (const auto& p : j["points"]) {
    SweepRecord r;
    r.t = p["t"];
    r.u = p["U"];
    r.v = p["V"];
    r.u_over_v = p.contains("u_over_v")
                     ? p["u_over_v"].get<double>()
                     : std::numeric_limits<double>::infinity();
    r.sites = p["L"];
    r.level = p["level"];
    r.energy_sdp = p["energy_sdp"];
    r.energy_ref = p["energy_ref"];
    r.error = p["error"];
    r.gap = p["gap"];
    r.iters = p["iters"];
    r.wall_ms = p["wall_ms"];
    r.status = p["status"];
    r.flagged = p.value("flagged", false);
    out.records.push_back(r);
  }
  if (j.contains("fit")) {
    ScalingFit fit;
    fit.slope = j["fit"]["slope"];
    fit.intercept = j["fit"]["intercept"];
    fit.r_squared = j["fit"]["r_squared"];
    out.fit = fit;
  }
  return out;
}

void ensure_writable_dir(const std::string& dir) {
  fs::path p(dir);
  if (!fs::exists(p)) fs::create_directories(p);
  if (!fs::is_directory(p))
    throw std::runtime_error(dir + " is not a directory");
  const fs::path probe = p / ".v2rdm_write_probe";
  std::ofstream os(probe);
  if (!os) throw std::runtime_error(dir + " is not writable");
  os.close();
  fs::remove(probe);
}

}  // namespace v2rdm
