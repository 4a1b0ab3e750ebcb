#include "wum/eval.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <stdexcept>

namespace wum::eval {
namespace {

// Aho-Corasick automaton over page-id strings.
class SessionMatcher {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  explicit SessionMatcher(std::span<const Session> patterns) {
    nodes_.emplace_back();
    for (std::uint32_t id = 0; id < patterns.size(); ++id) {
      std::uint32_t state = 0;
      for (const Visit& v : patterns[id].visits) {
        std::uint32_t next = child(state, v.page.value);
        if (next == kNone) {
          next = static_cast<std::uint32_t>(nodes_.size());
          add_edge(state, v.page.value, next);
          nodes_.emplace_back();
        }
        state = next;
      }
      nodes_[state].terminal.push_back(id);
    }
    build_links();
  }

  // Calls `hit(pattern_id)` once per pattern that occurs anywhere in the
  // scanned texts, across all calls to scan().
  template <typename Hit>
  void scan(std::span<const Visit> text, Hit&& hit) {
    std::uint32_t state = 0;
    for (const Visit& v : text) {
      const std::uint32_t symbol = v.page.value;
      std::uint32_t next = child(state, symbol);
      while (next == kNone && state != 0) {
        state = nodes_[state].fail;
        next = child(state, symbol);
      }
      state = next == kNone ? 0 : next;
      std::uint32_t t =
          nodes_[state].terminal.empty() ? nodes_[state].dict : state;
      while (t != kNone && !nodes_[t].reported) {
        nodes_[t].reported = true;
        for (std::uint32_t id : nodes_[t].terminal) {
          hit(id);
        }
        t = nodes_[t].dict;
      }
    }
  }

 private:
  struct NodeData {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // sorted
    std::uint32_t fail = 0;
    std::uint32_t dict = kNone;  // nearest terminal on the fail chain
    std::vector<std::uint32_t> terminal;
    bool reported = false;
  };

  std::uint32_t child(std::uint32_t state, std::uint32_t symbol) const {
    const auto& edges = nodes_[state].edges;
    auto it = std::lower_bound(
        edges.begin(), edges.end(), symbol,
        [](const auto& e, std::uint32_t s) { return e.first < s; });
    return it != edges.end() && it->first == symbol ? it->second : kNone;
  }

  void add_edge(std::uint32_t state, std::uint32_t symbol, std::uint32_t to) {
    auto& edges = nodes_[state].edges;
    auto it = std::lower_bound(
        edges.begin(), edges.end(), symbol,
        [](const auto& e, std::uint32_t s) { return e.first < s; });
    edges.insert(it, {symbol, to});
  }

  void build_links() {
    std::deque<std::uint32_t> queue;
    for (const auto& [symbol, c] : nodes_[0].edges) {
      nodes_[c].fail = 0;
      queue.push_back(c);
    }
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      for (const auto& [symbol, c] : nodes_[u].edges) {
        std::uint32_t f = nodes_[u].fail;
        std::uint32_t target = child(f, symbol);
        while (target == kNone && f != 0) {
          f = nodes_[f].fail;
          target = child(f, symbol);
        }
        nodes_[c].fail = target == kNone ? 0 : target;
        const NodeData& fail_node = nodes_[nodes_[c].fail];
        nodes_[c].dict =
            fail_node.terminal.empty() ? fail_node.dict : nodes_[c].fail;
        queue.push_back(c);
      }
    }
  }

  std::vector<NodeData> nodes_;
};

}  // namespace

std::vector<bool> captured_sessions(std::span<const Session> real,
                                    std::span<const Session> reconstructed) {
  std::vector<bool> captured(real.size(), false);
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (real[i].empty()) {
      captured[i] = true;
    }
  }
  SessionMatcher matcher(real);
  for (const Session& h : reconstructed) {
    matcher.scan(h.visits, [&](std::uint32_t id) { captured[id] = true; });
  }
  return captured;
}

double session_accuracy(std::span<const Session> real,
                        std::span<const Session> reconstructed) {
  if (real.empty()) {
    throw std::invalid_argument("session accuracy needs real sessions");
  }
  auto captured = captured_sessions(real, reconstructed);
  auto hits = std::count(captured.begin(), captured.end(), true);
  return static_cast<double>(hits) / static_cast<double>(real.size());
}

double pattern_accuracy(std::span<const mine::Pattern> truth,
                        std::span<const mine::Pattern> found) {
  std::set<std::vector<PageId>> truth_set;
  for (const auto& p : truth) {
    truth_set.insert(p.pages);
  }
  if (truth_set.empty()) {
    throw std::invalid_argument("pattern accuracy needs true patterns");
  }
  std::set<std::vector<PageId>> found_set;
  for (const auto& p : found) {
    found_set.insert(p.pages);
  }
  std::size_t common = 0;
  for (const auto& p : truth_set) {
    common += found_set.contains(p);
  }
  return static_cast<double>(common) / static_cast<double>(truth_set.size());
}

std::string csv_header() {
  return "heuristic,session_accuracy,pattern_accuracy,n_real_sessions,"
         "n_reconstructed,n_true_patterns,n_found_patterns,params";
}

std::string to_csv_row(const AccuracyReport& r) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.session_accuracy,
                r.pattern_accuracy);
  return r.heuristic + "," + buf + "," + std::to_string(r.n_real_sessions) +
         "," + std::to_string(r.n_reconstructed) + "," +
         std::to_string(r.n_true_patterns) + "," +
         std::to_string(r.n_found_patterns) + "," + r.params;
}

}  // namespace wum::eval
