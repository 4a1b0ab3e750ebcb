#pragma once

// Web-user agent simulator.
//
// Each agent browses a WebTopology with four behaviours: start at an entry
// page, follow a link from the current page, jump back to an earlier page of
// the current episode and follow one of its links, or stop. The simulator
// records two things per agent: the real sessions (every root-to-leaf path of
// the navigation tree of an episode) and the requests that actually reach
// the server (first visits only; cached pages and back moves are invisible).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "wum/clf.h"
#include "wum/topology.h"
#include "wum/types.h"

namespace wum::sim {

struct SimulationParams {
  double stp = 0.05;  // session termination probability
  double lpp = 0.30;  // link-from-previous-page probability
  double nip = 0.30;  // new-initial-page probability
  double mean_stay = 132.0;  // seconds
  double sd_stay = 30.0;     // seconds
  double max_gap = 600.0;    // seconds, exclusive upper bound on a gap
  std::uint32_t n_agents = 10000;
  std::uint64_t seed = 1;
  Timestamp start_time = 1136073600;  // 2006-01-01T00:00:00Z
  Timestamp start_spread = 86400;     // agents start uniformly in this window

  // Throws std::invalid_argument.
  void validate() const;
};

enum class EpisodeEnd { kTerminated, kNewEpisode, kDeadEnd };

struct EpisodeStats {
  std::uint32_t agent_id = 0;
  std::uint32_t requests = 0;  // page requests issued in the episode
  EpisodeEnd end = EpisodeEnd::kTerminated;
};

// Source of every random choice an agent makes. The default implementation
// draws from a seeded engine; tests substitute scripted sequences.
class DecisionSource {
 public:
  virtual ~DecisionSource() = default;
  // Uniform in [0, 1).
  virtual double uniform() = 0;
  // Uniform index in [0, n), n > 0.
  virtual std::size_t pick(std::size_t n) = 0;
  // Gap before the next request in whole seconds, within [1, max_gap].
  virtual Timestamp gap(const SimulationParams& params) = 0;
};

// Navigation-tree bookkeeping for one agent: maintains the current path,
// the per-episode cache, the emitted real sessions and the server log.
class Navigator {
 public:
  Navigator(std::uint32_t agent_id, std::string client_ip);

  // Behaviour 1. Closes the running episode, clears the cache.
  void start_episode(PageId entry, Timestamp t);
  // Behaviour 2.
  void follow(PageId page, Timestamp t);
  // Behaviour 3: back to path()[depth] (depth < path().size() - 1), then
  // follow a link from there to `page`.
  void back_jump(std::size_t depth, PageId page, Timestamp t);
  // Closes the running episode.
  void finish();

  const std::vector<Visit>& path() const { return path_; }
  std::vector<Session>& real_sessions() { return sessions_; }
  std::vector<clf::LogEntry>& log() { return log_; }

 private:
  void request(PageId page, Timestamp t);
  void emit_leaf();

  std::uint32_t agent_id_;
  std::string client_ip_;
  std::vector<Visit> path_;
  bool path_is_new_leaf_ = false;
  std::unordered_set<PageId> cache_;
  std::vector<Session> sessions_;
  std::vector<clf::LogEntry> log_;
};

struct AgentTrace {
  std::vector<Session> real_sessions;  // user = decimal agent id
  std::vector<clf::LogEntry> log;      // user = synthetic IP
  std::vector<EpisodeStats> episodes;
};

// "10.x.y.z" derived from the agent id (ids below 2^24).
std::string agent_ip(std::uint32_t agent_id);

// Per-agent seed derived from the run seed.
std::uint64_t agent_seed(std::uint64_t run_seed, std::uint32_t agent_id);

AgentTrace simulate_agent(const WebTopology& topology,
                          const SimulationParams& params,
                          std::uint32_t agent_id, std::uint64_t seed);

AgentTrace simulate_agent(const WebTopology& topology,
                          const SimulationParams& params,
                          std::uint32_t agent_id, Timestamp start,
                          DecisionSource& decisions);

struct SimulationResult {
  std::vector<Session> real_sessions;  // by agent, then emission order
  std::vector<clf::LogEntry> log;      // sorted by (timestamp, agent)
  std::vector<EpisodeStats> episodes;
};

// Runs params.n_agents agents on `workers` threads. The result does not
// depend on the worker count.
SimulationResult simulate(const WebTopology& topology,
                          const SimulationParams& params,
                          unsigned workers = 1);

void write_server_log(std::ostream& out,
                      const std::vector<clf::LogEntry>& log);

}  // namespace wum::sim
