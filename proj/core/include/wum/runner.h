#pragma once

// Experiment grids: topology -> simulation -> reconstruction with every
// heuristic -> (mining) -> accuracy, one CSV row per
// (swept value, heuristic, replication).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wum/miner.h"
#include "wum/reconstruct.h"
#include "wum/simulator.h"
#include "wum/topology.h"

namespace wum::runner {

enum class SweptVar { kStp, kLpp, kNip, kMinSupport };

std::string_view to_string(SweptVar v);
std::optional<SweptVar> parse_swept_var(std::string_view text);

// Support values read literally as percentages of sessions.
inline const std::vector<double> kLiteralSupportSweep = {0.0005, 0.0010, 0.0015,
                                                         0.0020, 0.0025};
// The same numbers read as fractions; needs far fewer sessions.
inline const std::vector<double> kFractionSupportSweep = {0.05, 0.10, 0.15,
                                                          0.20, 0.25};

struct BehaviourSetting {
  double stp, lpp, nip;
};

// Experiments 1-8 of the pattern-accuracy grid.
BehaviourSetting pattern_experiment(int id);

struct ExperimentConfig {
  TopologyGenParams topology;
  sim::SimulationParams simulation;
  recon::ReconstructionParams reconstruction;
  mine::MiningParams mining;
  SweptVar swept = SweptVar::kStp;
  std::vector<double> values;
  std::uint32_t replications = 5;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  // Per-cell artifacts go to <artifacts_dir>/<content hash>/ when set. A
  // cell whose rows.csv already exists is loaded instead of recomputed.
  std::filesystem::path artifacts_dir;

  // Throws std::invalid_argument.
  void validate() const;

  // Canonical key=value rendering (artifacts_dir and jobs excluded).
  std::string canonical() const;
};

struct ResultRow {
  SweptVar swept = SweptVar::kStp;
  double value = 0.0;
  recon::Heuristic heuristic = recon::Heuristic::kSSRA;
  std::uint32_t replication = 0;
  double session_accuracy = 0.0;
  std::optional<double> pattern_accuracy;
  double runtime_ms = 0.0;
};

// Sweeps stp, lpp or nip; session accuracy only.
std::vector<ResultRow> run_session_sweep(const ExperimentConfig& config);

// Sweeps min_support; session and pattern accuracy.
std::vector<ResultRow> run_pattern_sweep(const ExperimentConfig& config);

// Dispatches on config.swept.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// swept_var,value,heuristic,replication,session_accuracy,pattern_accuracy,runtime_ms
std::string csv_header();
std::string to_csv(const ResultRow& row);
void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(std::istream& in);

struct SummaryRow {
  SweptVar swept = SweptVar::kStp;
  double value = 0.0;
  recon::Heuristic heuristic = recon::Heuristic::kSSRA;
  std::size_t n = 0;
  double session_mean = 0.0, session_sd = 0.0;
  std::optional<double> pattern_mean, pattern_sd;
};

// Mean and sample standard deviation over replications.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

// "600", "600s", "10m", "1.5h" -> seconds.
double parse_duration(std::string_view text);

// Flat key=value text; '#' comments. Throws FormatError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace wum::runner
