#include "wum/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace wum::sim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomDecisions final : public DecisionSource {
 public:
  explicit RandomDecisions(std::uint64_t seed) : rng_(seed) {}

  double uniform() override { return unit_(rng_); }

  std::size_t pick(std::size_t n) override {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // Truncated normal by redraw: the continuous draw must fall strictly
  // inside (1, max_gap).
  Timestamp gap(const SimulationParams& params) override {
    std::normal_distribution<double> stay(params.mean_stay, params.sd_stay);
    double g = 0;
    do {
      g = stay(rng_);
    } while (!(g > 1.0 && g < params.max_gap));
    return std::max<Timestamp>(1, std::llround(g));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

enum class Action { kNewEpisode, kBackJump, kFollow };

}  // namespace

void SimulationParams::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
  };
  prob(stp, "stp");
  prob(lpp, "lpp");
  prob(nip, "nip");
  if (!(stp > 0.0)) {
    throw std::invalid_argument("stp must be positive or agents never stop");
  }
  if (lpp + nip > 1.0 + 1e-12) {
    throw std::invalid_argument("lpp + nip must not exceed 1");
  }
  if (!(mean_stay > 1.0) || !(sd_stay > 0.0)) {
    throw std::invalid_argument("mean_stay must exceed 1 s and sd_stay be > 0");
  }
  if (!(mean_stay + 3.0 * sd_stay < max_gap)) {
    throw std::invalid_argument("mean_stay + 3 * sd_stay must be below max_gap");
  }
  if (n_agents > (1U << 24)) {
    throw std::invalid_argument("at most 2^24 agents are supported");
  }
  if (start_spread < 0) {
    throw std::invalid_argument("start_spread must be non-negative");
  }
}

Navigator::Navigator(std::uint32_t agent_id, std::string client_ip)
    : agent_id_(agent_id), client_ip_(std::move(client_ip)) {}

void Navigator::request(PageId page, Timestamp t) {
  path_.push_back({page, t});
  path_is_new_leaf_ = true;
  if (cache_.insert(page).second) {
    log_.push_back({client_ip_, t, clf::path_for_page(page), 200, 0});
  }
}

void Navigator::emit_leaf() {
  if (path_is_new_leaf_ && !path_.empty()) {
    sessions_.push_back({std::to_string(agent_id_), path_});
  }
  path_is_new_leaf_ = false;
}

void Navigator::start_episode(PageId entry, Timestamp t) {
  finish();
  cache_.clear();
  path_.clear();
  request(entry, t);
}

void Navigator::follow(PageId page, Timestamp t) {
  if (path_.empty()) {
    throw std::logic_error("follow() before start_episode()");
  }
  request(page, t);
}

void Navigator::back_jump(std::size_t depth, PageId page, Timestamp t) {
  if (depth + 1 >= path_.size()) {
    throw std::logic_error("back_jump target must precede the current page");
  }
  emit_leaf();
  path_.resize(depth + 1);
  request(page, t);
}

void Navigator::finish() { emit_leaf(); }

std::string agent_ip(std::uint32_t agent_id) {
  return "10." + std::to_string((agent_id >> 16) & 0xff) + "." +
         std::to_string((agent_id >> 8) & 0xff) + "." +
         std::to_string(agent_id & 0xff);
}

std::uint64_t agent_seed(std::uint64_t run_seed, std::uint32_t agent_id) {
  return splitmix64(splitmix64(run_seed) ^ (agent_id + 1ULL));
}

AgentTrace simulate_agent(const WebTopology& topology,
                          const SimulationParams& params,
                          std::uint32_t agent_id, Timestamp start,
                          DecisionSource& decisions) {
  const auto entries = topology.entry_pages();
  if (entries.empty()) {
    throw std::invalid_argument("topology has no entry pages");
  }

  Navigator nav(agent_id, agent_ip(agent_id));
  AgentTrace trace;
  Timestamp now = start;
  std::uint32_t n = 1;  // requests issued in the running episode
  nav.start_episode(entries[decisions.pick(entries.size())], now);

  auto close_episode = [&](EpisodeEnd why) {
    trace.episodes.push_back({agent_id, n, why});
  };

  std::vector<std::size_t> back_targets;
  while (true) {
    const double stop = 1.0 - std::pow(1.0 - params.stp, n + 1);
    if (decisions.uniform() < stop) {
      close_episode(EpisodeEnd::kTerminated);
      break;
    }
    const Timestamp next = now + decisions.gap(params);
    const auto& path = nav.path();
    const bool can_follow = !topology.successors(path.back().page).empty();
    back_targets.clear();
    for (std::size_t d = 0; d + 1 < path.size(); ++d) {
      if (!topology.successors(path[d].page).empty() &&
          static_cast<double>(next - path[d].time) <= params.max_gap) {
        back_targets.push_back(d);
      }
    }
    const bool can_back = !back_targets.empty();

    const double w_new = params.nip;
    const double w_back = can_back ? params.lpp : 0.0;
    const double w_follow =
        can_follow ? std::max(0.0, 1.0 - params.nip - params.lpp) : 0.0;
    const double total = w_new + w_back + w_follow;

    if (!(total > 0.0)) {
      // No behaviour with positive probability is available.
      close_episode(EpisodeEnd::kDeadEnd);
      break;
    }
    Action action = Action::kFollow;
    const double u = decisions.uniform() * total;
    if (u < w_new) {
      action = Action::kNewEpisode;
    } else if (u < w_new + w_back) {
      action = Action::kBackJump;
    }

    switch (action) {
      case Action::kNewEpisode:
        close_episode(EpisodeEnd::kNewEpisode);
        nav.start_episode(entries[decisions.pick(entries.size())], next);
        n = 1;
        break;
      case Action::kBackJump: {
        std::size_t depth = back_targets[decisions.pick(back_targets.size())];
        auto succ = topology.successors(path[depth].page);
        nav.back_jump(depth, succ[decisions.pick(succ.size())], next);
        ++n;
        break;
      }
      case Action::kFollow: {
        auto succ = topology.successors(path.back().page);
        nav.follow(succ[decisions.pick(succ.size())], next);
        ++n;
        break;
      }
    }
    now = next;
  }
  nav.finish();
  trace.real_sessions = std::move(nav.real_sessions());
  trace.log = std::move(nav.log());
  return trace;
}

AgentTrace simulate_agent(const WebTopology& topology,
                          const SimulationParams& params,
                          std::uint32_t agent_id, std::uint64_t seed) {
  RandomDecisions decisions(seed);
  Timestamp offset = 0;
  if (params.start_spread > 0) {
    offset = std::uniform_int_distribution<Timestamp>(
        0, params.start_spread - 1)(decisions.engine());
  }
  return simulate_agent(topology, params, agent_id,
                        params.start_time + offset, decisions);
}

SimulationResult simulate(const WebTopology& topology,
                          const SimulationParams& params, unsigned workers) {
  params.validate();
  std::vector<AgentTrace> traces(params.n_agents);
  std::atomic<std::uint32_t> next{0};
  auto work = [&] {
    for (std::uint32_t i = next++; i < params.n_agents; i = next++) {
      traces[i] = simulate_agent(topology, params, i, agent_seed(params.seed, i));
    }
  };
  workers = std::max(1U, std::min<unsigned>(workers, params.n_agents));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }

  SimulationResult out;
  std::vector<std::pair<std::uint32_t, clf::LogEntry>> tagged;
  for (std::uint32_t i = 0; i < traces.size(); ++i) {
    AgentTrace& t = traces[i];
    std::move(t.real_sessions.begin(), t.real_sessions.end(),
              std::back_inserter(out.real_sessions));
    std::move(t.episodes.begin(), t.episodes.end(),
              std::back_inserter(out.episodes));
    for (auto& e : t.log) {
      tagged.emplace_back(i, std::move(e));
    }
  }
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) {
                     return a.second.timestamp != b.second.timestamp
                                ? a.second.timestamp < b.second.timestamp
                                : a.first < b.first;
                   });
  out.log.reserve(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    tagged[i].second.raw_line_no = i + 1;
    out.log.push_back(std::move(tagged[i].second));
  }
  return out;
}

void write_server_log(std::ostream& out,
                      const std::vector<clf::LogEntry>& log) {
  for (const auto& e : log) {
    out << clf::format_line(e) << '\n';
  }
}

}  // namespace wum::sim
