#pragma once

// Shared fixtures and reference oracles for the unit and acceptance tests.
// Oracles here are written from the definitions, independently of the
// library's algorithms.

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wum/miner.h"
#include "wum/simulator.h"
#include "wum/topology.h"
#include "wum/types.h"

namespace wum::testing {

inline PageId P(std::uint32_t i) { return PageId{i}; }

inline std::vector<PageId> pages_of(std::initializer_list<std::uint32_t> ids) {
  std::vector<PageId> out;
  for (auto i : ids) out.push_back(P(i));
  return out;
}

// Builds a topology from an edge list; every page mentioned is declared.
WebTopology make_topology(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                          std::vector<std::uint32_t> extra_pages,
                          std::vector<std::uint32_t> entries);

// Only the links the navigation example forces: P1->P20, P20->P23,
// P1->P13, P13->P34. Entry page P1.
WebTopology backtrack_topology();

// Links of the pattern-mining example.
WebTopology mining_topology();

// The five sessions of the mining example.
std::vector<Session> example_sessions();

// Session with visits `step` seconds apart starting at `start`.
Session make_session(std::string user, const std::vector<PageId>& pages,
                     Timestamp start = 0, Timestamp step = 60);

VisitStream make_stream(std::string user, const std::vector<PageId>& pages,
                        const std::vector<Timestamp>& times);

// Plays back fixed answers; throws when a queue runs dry.
class ScriptedDecisions final : public sim::DecisionSource {
 public:
  std::deque<double> uniforms;
  std::deque<std::size_t> picks;
  std::deque<Timestamp> gaps;

  double uniform() override { return take(uniforms, "uniform"); }
  std::size_t pick(std::size_t n) override {
    std::size_t i = take(picks, "pick");
    if (i >= n) throw std::logic_error("scripted pick out of range");
    return i;
  }
  Timestamp gap(const sim::SimulationParams&) override { return take(gaps, "gap"); }

 private:
  template <typename T>
  static T take(std::deque<T>& q, const char* what) {
    if (q.empty()) throw std::logic_error(std::string("script exhausted: ") + what);
    T v = q.front();
    q.pop_front();
    return v;
  }
};

// back-jump walk: P1 -> P20 -> P23, back to P1, -> P13 -> P34, stop. Needs
// the small site topology and lpp = nip = 0.3.
ScriptedDecisions backtrack_trace_script();

struct OraclePattern {
  std::vector<PageId> pages;
  std::uint32_t count = 0;
  friend bool operator==(const OraclePattern&, const OraclePattern&) = default;
};

// Every contiguous run of every session, kept when it is a topology path and
// count * den >= num * |sessions| (or > when strict). Returns the frequent
// runs not contained in a longer frequent run, sorted by pages.
std::vector<OraclePattern> brute_force_maximal(const std::vector<Session>& sessions,
                                               const WebTopology& topology,
                                               std::uint32_t num, std::uint32_t den,
                                               bool strict = false,
                                               std::size_t min_length = 2);

// All frequent runs (not only maximal), keyed by pages.
std::map<std::vector<PageId>, std::uint32_t> brute_force_frequent(
    const std::vector<Session>& sessions, const WebTopology& topology,
    std::uint32_t num, std::uint32_t den, bool strict = false);

struct MiningInstance {
  WebTopology topology;
  std::vector<Session> sessions;
};

// Random small site with random-walk sessions (walks may break links so
// that non-path runs also occur).
MiningInstance random_mining_instance(std::mt19937_64& rng, std::uint32_t max_pages,
                                      std::uint32_t max_sessions);

// Episode-length law: P(L = m) for m = 1..max_len, requests stopping before
// request n with probability 1 - (1 - stp)^n for n >= 2. The last cell
// holds the tail mass P(L >= max_len).
std::vector<double> episode_length_pmf(double stp, std::size_t max_len);

// Pearson goodness of fit of `observed` (index m-1 = length m) against
// `pmf`, pooling adjacent cells until each expects at least 5. Returns the
// upper-tail p-value.
double chi_square_p_value(const std::vector<std::size_t>& observed,
                          const std::vector<double>& pmf);

// Naive capture test by definition.
bool naive_captured(const Session& real, const std::vector<Session>& reconstructed);

}  // namespace wum::testing
