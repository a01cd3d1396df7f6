#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mixq/adversary.hpp"
#include "mixq/analytic.hpp"
#include "mixq/sim.hpp"

namespace mixq::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double quantile(std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const std::size_t idx = static_cast<std::size_t>(q * (sorted.size() - 1));
  return sorted[idx];
}

struct Point {
  ExperimentConfig config;  // with the sweep value applied
  double sweep_value;
  int rep;
};

std::vector<Point> expand(const ExperimentConfig& config, bool with_reps) {
  std::vector<double> values = config.sweep_values;
  if (config.sweep == "none" || values.empty()) values = {0.0};
  std::vector<Point> points;
  for (double v : values) {
    ExperimentConfig c = config;
    if (config.sweep == "k")
      c.k = static_cast<int>(v);
    else if (config.sweep == "lambda")
      c.lambda = v;
    else if (config.sweep == "p_a")
      c.p_a = v;
    const int reps = with_reps ? config.reps : 1;
    for (int r = 0; r < reps; ++r) points.push_back({c, v, r});
  }
  return points;
}

ResultRow base_row(const Point& pt) {
  ResultRow row;
  row.mix = pt.config.mix;
  row.n = pt.config.n;
  row.k = pt.config.k;
  row.lambda = pt.config.lambda;
  row.p_a = pt.config.p_a;
  row.m = pt.config.m;
  row.horizon = pt.config.horizon;
  row.seed = pt.config.seed + static_cast<std::uint64_t>(pt.rep);
  row.rep = pt.rep;
  row.sweep = pt.config.sweep;
  row.sweep_value = pt.sweep_value;
  row.attack = pt.config.attack;
  return row;
}

void fill_analytic(const Point& pt, ResultRow& row) {
  const ExperimentConfig& c = pt.config;
  try {
    if (c.mix == "sampling") {
      const SamplingMixParams params{c.n, c.k, c.lambda, c.p_a};
      row.analytic_load = sampling_load(params);
      row.analytic_delay = sampling_mean_delay(params);
      row.status = row.status.empty() ? "ok" : row.status;
    } else if (c.k == 2) {
      const BatchMixParams params{c.n, 2, c.lambda};
      row.analytic_load = n2_moments(params).load;
      row.analytic_delay = n2_mean_delay(params);
      row.status = row.status.empty() ? "ok" : row.status;
    } else {
      const EfsApproxResult efs = efs_fixed_point({c.n, c.k, c.lambda});
      if (efs.status == EfsStatus::ok) {
        row.analytic_load = efs.rho;
        row.analytic_delay = efs.mean_delay;
        if (row.status.empty()) row.status = "ok";
      } else {
        row.status = efs.status == EfsStatus::unstable ? "unstable" : "no_convergence";
      }
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
}

SimResult simulate_point(const Point& pt, bool collect_trace) {
  const ExperimentConfig& c = pt.config;
  SimParams sp;
  sp.kind = c.mix == "sampling" ? MixKind::sampling : MixKind::batch;
  sp.n = c.n;
  sp.k = c.k;
  sp.rate = c.lambda;
  sp.p_a = c.p_a;
  sp.m = c.m;
  sp.horizon.max_messages = c.horizon;
  sp.seed = c.seed + static_cast<std::uint64_t>(pt.rep);
  sp.warmup_fraction = c.warmup;
  sp.collect_trace = collect_trace;
  return run(sp);
}

void fill_simulated(const Point& pt, const SimResult& sim, ResultRow& row) {
  std::vector<double> delays;
  delays.reserve(sim.delays.size());
  double total = 0.0;
  for (const DelaySample& d : sim.delays) {
    delays.push_back(d.delay);
    total += d.delay;
  }
  std::sort(delays.begin(), delays.end());
  row.mean_delay = delays.empty() ? kNaN : total / delays.size();
  row.delay_p50 = quantile(delays, 0.50);
  row.delay_p95 = quantile(delays, 0.95);
  row.delay_p99 = quantile(delays, 0.99);
  row.load = sim.stats.avg_load();
  if (row.status.empty()) row.status = "ok";
  (void)pt;
}

ResultRow attack_point(const Point& pt) {
  ResultRow row = base_row(pt);
  const ExperimentConfig& c = pt.config;
  const SimResult sim = simulate_point(pt, true);
  fill_simulated(pt, sim, row);
  row.status.clear();

  const int target = 0;
  AttackResult res;
  try {
    if (c.attack == "intersection") {
      res = intersection_attack(sim.trace, target, c.m, c.n, c.k);
    } else if (c.attack == "stateful") {
      EmptyStateOracle oracle{sim.empty_arrival_indices};
      res = stateful_sampling_attack(sim.trace, &oracle, target, c.m, c.n);
    } else if (c.attack == "stateless") {
      res = stateless_frequency_attack(sim.trace, target, c.m, c.n, c.p_a);
    } else {
      row.status = "error: no attack configured";
      return row;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    return row;
  }

  switch (res.status) {
    case AttackStatus::success: row.status = "success"; break;
    case AttackStatus::impossible: row.status = "impossible"; break;
    case AttackStatus::exhausted: row.status = "exhausted"; break;
  }
  row.observations_used = res.observations_used;
  row.ttd = res.status == AttackStatus::success ? res.ttd : kNaN;
  return row;
}

std::vector<ResultRow> map_points(const std::vector<Point>& points, int jobs,
                                  const std::function<ResultRow(const Point&)>& fn) {
  std::vector<ResultRow> rows(points.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = fn(points[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        rows[i] = fn(points[i]);
      }
    }));
  }
  for (auto& f : workers) f.get();
  return rows;  // points are pre-sorted by (sweep value, rep), so rows are too
}

}  // namespace

void ExperimentConfig::validate(Command cmd) const {
  if (mix != "batch" && mix != "sampling")
    throw std::invalid_argument("mix must be 'batch' or 'sampling'");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (warmup < 0.0 || warmup >= 1.0) throw std::invalid_argument("warmup must be in [0,1)");
  if (sweep != "none" && sweep != "k" && sweep != "lambda" && sweep != "p_a")
    throw std::invalid_argument("sweep must be one of none|k|lambda|p_a");
  if (sweep != "none" && sweep_values.empty())
    throw std::invalid_argument("sweep requested without sweep values");
  if (attack != "none" && attack != "intersection" && attack != "stateful" &&
      attack != "stateless")
    throw std::invalid_argument("attack must be one of none|intersection|stateful|stateless");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");

  const auto check_point = [&](int kk, double pa) {
    if (mix == "batch") {
      if (kk < 2 || kk > n) throw std::invalid_argument("batch mix needs 2 <= k <= n");
    } else {
      if (kk < 1 || kk > n - 1) throw std::invalid_argument("sampling mix needs 1 <= k <= n-1");
      if (pa < 0.0 || pa > 1.0) throw std::invalid_argument("p_a must be in [0,1]");
    }
  };
  if (sweep == "k")
    for (double v : sweep_values) check_point(static_cast<int>(v), p_a);
  else if (sweep == "p_a")
    for (double v : sweep_values) check_point(k, v);
  else
    check_point(k, p_a);

  if (cmd == Command::simulate || cmd == Command::attack || cmd == Command::compare) {
    if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  }
  if (cmd == Command::attack && attack == "none")
    throw std::invalid_argument("attack command needs an attack kind");
}

ResultRow::ResultRow()
    : mean_delay(kNaN), delay_p50(kNaN), delay_p95(kNaN), delay_p99(kNaN),
      load(kNaN), analytic_delay(kNaN), analytic_load(kNaN), ttd(kNaN) {}

std::string csv_header() {
  return "mix,n,k,lambda,p_a,m,horizon,seed,rep,sweep,sweep_value,"
         "mean_delay,delay_p50,delay_p95,delay_p99,load,"
         "analytic_delay,analytic_load,attack,status,observations_used,ttd";
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream out;
  out << r.mix << ',' << r.n << ',' << r.k << ',' << fmt(r.lambda) << ','
      << fmt(r.p_a) << ',' << r.m << ',' << r.horizon << ',' << r.seed << ','
      << r.rep << ',' << r.sweep << ',' << fmt(r.sweep_value) << ','
      << fmt(r.mean_delay) << ',' << fmt(r.delay_p50) << ',' << fmt(r.delay_p95)
      << ',' << fmt(r.delay_p99) << ',' << fmt(r.load) << ','
      << fmt(r.analytic_delay) << ',' << fmt(r.analytic_load) << ','
      << r.attack << ',' << r.status << ',' << r.observations_used << ','
      << fmt(r.ttd);
  return out.str();
}

ResultRow parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() != 22) throw std::invalid_argument("parse_csv_row: expected 22 fields");

  ResultRow r;
  std::size_t i = 0;
  r.mix = fields[i++];
  r.n = std::stoi(fields[i++]);
  r.k = std::stoi(fields[i++]);
  r.lambda = std::stod(fields[i++]);
  r.p_a = std::stod(fields[i++]);
  r.m = std::stoi(fields[i++]);
  r.horizon = std::stoull(fields[i++]);
  r.seed = std::stoull(fields[i++]);
  r.rep = std::stoi(fields[i++]);
  r.sweep = fields[i++];
  r.sweep_value = std::stod(fields[i++]);
  r.mean_delay = std::stod(fields[i++]);
  r.delay_p50 = std::stod(fields[i++]);
  r.delay_p95 = std::stod(fields[i++]);
  r.delay_p99 = std::stod(fields[i++]);
  r.load = std::stod(fields[i++]);
  r.analytic_delay = std::stod(fields[i++]);
  r.analytic_load = std::stod(fields[i++]);
  r.attack = fields[i++];
  r.status = fields[i++];
  r.observations_used = std::stoull(fields[i++]);
  r.ttd = std::stod(fields[i++]);
  return r;
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line));
  }
  return rows;
}

std::vector<ResultRow> run_analytic(const ExperimentConfig& config) {
  config.validate(Command::analytic);
  std::vector<ResultRow> rows;
  for (const Point& pt : expand(config, /*with_reps=*/false)) {
    ResultRow row = base_row(pt);
    fill_analytic(pt, row);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ResultRow> run_simulate(const ExperimentConfig& config) {
  config.validate(Command::simulate);
  return map_points(expand(config, true), config.jobs, [](const Point& pt) {
    ResultRow row = base_row(pt);
    const SimResult sim = simulate_point(pt, false);
    fill_simulated(pt, sim, row);
    return row;
  });
}

std::vector<ResultRow> run_attack(const ExperimentConfig& config) {
  config.validate(Command::attack);
  return map_points(expand(config, true), config.jobs, attack_point);
}

std::vector<ResultRow> run_compare(const ExperimentConfig& config) {
  config.validate(Command::compare);
  return map_points(expand(config, true), config.jobs, [](const Point& pt) {
    ResultRow row = base_row(pt);
    const SimResult sim = simulate_point(pt, false);
    fill_simulated(pt, sim, row);
    row.status.clear();
    fill_analytic(pt, row);
    return row;
  });
}

std::string resolve_out_path(const std::string& out, const char* env_dir) {
  if (out.empty()) return out;
  if (out.front() == '/') return out;
  if (env_dir && *env_dir) return std::string(env_dir) + "/" + out;
  return out;
}

void write_rows(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << csv_header() << '\n';
  for (const ResultRow& r : rows) out << to_csv(r) << '\n';
}

}  // namespace mixq::cli
