#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wum/miner.h"
#include "wum/types.h"

namespace wum::eval {

// Which real sessions appear as a contiguous run of at least one
// reconstructed session. Multi-pattern search over all reconstructed
// sessions at once (Aho-Corasick over page ids).
std::vector<bool> captured_sessions(std::span<const Session> real,
                                    std::span<const Session> reconstructed);

// Fraction of real sessions captured by some reconstructed session. Throws
// std::invalid_argument when `real` is empty.
double session_accuracy(std::span<const Session> real,
                        std::span<const Session> reconstructed);

// |true ∩ found| / |true| by exact page sequence. Throws
// std::invalid_argument when `truth` is empty.
double pattern_accuracy(std::span<const mine::Pattern> truth,
                        std::span<const mine::Pattern> found);

struct AccuracyReport {
  std::string heuristic;
  double session_accuracy = 0.0;
  double pattern_accuracy = 0.0;
  std::size_t n_real_sessions = 0;
  std::size_t n_reconstructed = 0;
  std::size_t n_true_patterns = 0;
  std::size_t n_found_patterns = 0;
  // "key=value;key=value" echo of the parameters that produced the row.
  std::string params;
};

// heuristic,session_accuracy,pattern_accuracy,n_real_sessions,
// n_reconstructed,n_true_patterns,n_found_patterns,params
std::string csv_header();
std::string to_csv_row(const AccuracyReport& report);

}  // namespace wum::eval
