#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mixq::cli {

enum class Command { analytic, simulate, attack, compare };

struct ExperimentConfig {
  std::string mix = "batch";      // batch | sampling
  int n = 10;
  int k = 2;
  double lambda = 1.0;
  double p_a = 0.0;
  int m = 1;
  std::uint64_t horizon = 100000;  // messages
  std::uint64_t seed = 1;
  int reps = 1;
  double warmup = 0.1;
  std::string sweep = "none";     // none | k | lambda | p_a
  std::vector<double> sweep_values;
  std::string attack = "none";    // none | intersection | stateful | stateless
  int jobs = 1;

  void validate(Command cmd) const;  // throws std::invalid_argument
};

struct ResultRow {
  // config echo (full reproducibility: every row carries its seed)
  std::string mix;
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  double p_a = 0.0;
  int m = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  int rep = 0;
  std::string sweep = "none";
  double sweep_value = 0.0;
  // measurements (NaN when not applicable)
  double mean_delay;
  double delay_p50;
  double delay_p95;
  double delay_p99;
  double load;
  double analytic_delay;
  double analytic_load;
  // attack outcome
  std::string attack = "none";
  std::string status = "";
  std::uint64_t observations_used = 0;
  double ttd;

  ResultRow();
};

std::string csv_header();
std::string to_csv(const ResultRow& row);
ResultRow parse_csv_row(const std::string& line);
std::vector<ResultRow> parse_csv(std::istream& in);  // expects a header line

std::vector<ResultRow> run_analytic(const ExperimentConfig& config);
std::vector<ResultRow> run_simulate(const ExperimentConfig& config);
std::vector<ResultRow> run_attack(const ExperimentConfig& config);
std::vector<ResultRow> run_compare(const ExperimentConfig& config);

/// Resolves the output path: relative paths land in $MIXQ_OUT_DIR when set.
std::string resolve_out_path(const std::string& out, const char* env_dir);

void write_rows(const std::vector<ResultRow>& rows, std::ostream& out);

}  // namespace mixq::cli
