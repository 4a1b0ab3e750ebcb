#pragma once

// Sequential apriori over reconstructed sessions.
//
// Level k+1 candidates are built by appending a frequent single page to a
// frequent length-k pattern, but only when the topology has a link from the
// pattern's last page to that page. Support is the fraction of sessions that
// contain the pattern as a contiguous run. A pattern stays maximal until some
// frequent extension drops it, either as the extended prefix, as the suffix
// left by removing the extension's first page, or as the appended page.
// Only patterns of at least min_maximal_length pages are reported.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wum/topology.h"
#include "wum/types.h"

namespace wum::mine {

struct Pattern {
  std::vector<PageId> pages;
  double support = 0.0;
  bool maximal = false;
};

struct MiningParams {
  double min_support = 0.05;
  // 0 means the longest session length.
  std::uint32_t max_length = 0;
  // Keep support > min_support instead of >=.
  bool strict_threshold = false;
  // Join each level with every page of the site and count support by a full
  // scan, exactly as the textbook loop does. Slow; used as a reference.
  bool join_all_pages = false;
  // Record rejected candidates in the level trace.
  bool record_rejected = false;
  // Shorter patterns keep their flag in the level trace but are left out of
  // MiningResult::maximal. A lone page is not a navigation path, so 2.
  std::uint32_t min_maximal_length = 2;

  // Requires 0 < min_support <= 1. Throws std::invalid_argument.
  void validate() const;
};

struct PatternLevel {
  std::uint32_t k = 0;
  std::vector<Pattern> patterns;  // accepted, maximal flag as finally set
  std::vector<Pattern> rejected;  // evaluated but below threshold
};

struct MiningResult {
  std::vector<PatternLevel> levels;
  std::vector<Pattern> maximal;  // lexicographic page order
};

// Fraction of `sessions` containing `pattern` contiguously. Throws
// std::invalid_argument when `sessions` is empty.
double support(std::span<const PageId> pattern,
               std::span<const Session> sessions);

// `pages` is the site's page set (every session page must be in it).
MiningResult sequential_apriori(const MiningParams& params,
                                std::span<const Session> sessions,
                                const WebTopology& topology,
                                std::span<const PageId> pages);

// Uses the topology's page set.
MiningResult sequential_apriori(const MiningParams& params,
                                std::span<const Session> sessions,
                                const WebTopology& topology);

// "P1,P13,P49<TAB>support=0.400000" per pattern, sorted by line.
void write_patterns(std::ostream& out, std::span<const Pattern> patterns);
std::vector<Pattern> read_patterns(std::istream& in);

}  // namespace wum::mine
