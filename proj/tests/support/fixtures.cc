#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

namespace wum::testing {

WebTopology make_topology(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                          std::vector<std::uint32_t> extra_pages,
                          std::vector<std::uint32_t> entries) {
  std::set<std::uint32_t> ids(extra_pages.begin(), extra_pages.end());
  ids.insert(entries.begin(), entries.end());
  for (auto [a, b] : edges) {
    ids.insert(a);
    ids.insert(b);
  }
  std::vector<PageId> pages;
  std::vector<std::vector<PageId>> succ;
  for (auto id : ids) {
    pages.push_back(P(id));
    succ.emplace_back();
    for (auto [a, b] : edges) {
      if (a == id) succ.back().push_back(P(b));
    }
  }
  std::vector<PageId> entry_pages;
  for (auto e : entries) entry_pages.push_back(P(e));
  return WebTopology(std::move(pages), std::move(succ), std::move(entry_pages));
}

WebTopology backtrack_topology() {
  return make_topology({{1, 20}, {20, 23}, {1, 13}, {13, 34}}, {}, {1});
}

WebTopology mining_topology() {
  return make_topology(
      {{1, 13}, {13, 49}, {13, 34}, {49, 23}, {34, 23}, {1, 20}, {20, 23}}, {}, {1});
}

std::vector<Session> example_sessions() {
  return {make_session("1", pages_of({1, 13, 49, 23})),
          make_session("2", pages_of({1, 13, 34, 23})),
          make_session("3", pages_of({1, 13, 49})),
          make_session("4", pages_of({1, 20, 23})),
          make_session("5", pages_of({13, 49}))};
}

Session make_session(std::string user, const std::vector<PageId>& pages, Timestamp start,
                     Timestamp step) {
  Session s{std::move(user), {}};
  for (std::size_t i = 0; i < pages.size(); ++i) {
    s.visits.push_back({pages[i], start + static_cast<Timestamp>(i) * step});
  }
  return s;
}

VisitStream make_stream(std::string user, const std::vector<PageId>& pages,
                        const std::vector<Timestamp>& times) {
  VisitStream s{std::move(user), {}};
  for (std::size_t i = 0; i < pages.size(); ++i) {
    s.visits.push_back({pages[i], times.at(i)});
  }
  return s;
}

// P1 -> P20 -> P23, back to P1, -> P13 -> P34, stop.
ScriptedDecisions backtrack_trace_script() {
  ScriptedDecisions d;
  d.picks = {0,      // entry P1
             1,      // P1 successors {P13, P20}: P20
             0,      // P20 -> P23
             0, 0,   // back to path[0] = P1, then P13
             0};     // P13 -> P34
  // Per step: termination draw, then behaviour draw.
  d.uniforms = {0.99, 0.9,    // follow (total weight 0.7, no back target yet)
                0.99, 0.9,    // follow
                0.99, 0.75,   // P23 has no links: new 0.3 + back 0.3, pick back
                0.99, 0.9,    // follow
                0.0};         // stop
  d.gaps = {60, 60, 60, 60};
  return d;
}

namespace {

bool is_path(const std::vector<PageId>& run, const WebTopology& t) {
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    if (!t.has_link(run[i], run[i + 1])) return false;
  }
  return true;
}

bool contains_run(const std::vector<PageId>& hay, const std::vector<PageId>& needle) {
  if (needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + i)) return true;
  }
  return false;
}

}  // namespace

std::map<std::vector<PageId>, std::uint32_t> brute_force_frequent(
    const std::vector<Session>& sessions, const WebTopology& topology, std::uint32_t num,
    std::uint32_t den, bool strict) {
  std::map<std::vector<PageId>, std::set<std::size_t>> seen;
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    auto pages = sessions[s].pages();
    for (std::size_t i = 0; i < pages.size(); ++i) {
      for (std::size_t j = i + 1; j <= pages.size(); ++j) {
        seen[std::vector<PageId>(pages.begin() + i, pages.begin() + j)].insert(s);
      }
    }
  }
  const std::uint64_t need = static_cast<std::uint64_t>(num) * sessions.size();
  std::map<std::vector<PageId>, std::uint32_t> out;
  for (const auto& [run, where] : seen) {
    const std::uint64_t have = static_cast<std::uint64_t>(where.size()) * den;
    const bool ok = strict ? have > need : have >= need;
    if (ok && is_path(run, topology)) {
      out.emplace(run, static_cast<std::uint32_t>(where.size()));
    }
  }
  return out;
}

std::vector<OraclePattern> brute_force_maximal(const std::vector<Session>& sessions,
                                               const WebTopology& topology,
                                               std::uint32_t num, std::uint32_t den,
                                               bool strict, std::size_t min_length) {
  auto frequent = brute_force_frequent(sessions, topology, num, den, strict);
  std::vector<OraclePattern> out;
  for (const auto& [run, count] : frequent) {
    if (run.size() < min_length) continue;
    bool covered = false;
    for (const auto& [other, c] : frequent) {
      if (other.size() > run.size() && contains_run(other, run)) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back({run, count});
  }
  return out;
}

MiningInstance random_mining_instance(std::mt19937_64& rng, std::uint32_t max_pages,
                                      std::uint32_t max_sessions) {
  std::uniform_int_distribution<std::uint32_t> n_pages_d(2, max_pages);
  const std::uint32_t n = n_pages_d(rng);
  std::bernoulli_distribution edge(0.35);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t a = 1; a <= n; ++a) {
    for (std::uint32_t b = 1; b <= n; ++b) {
      if (a != b && edge(rng)) edges.emplace_back(a, b);
    }
  }
  std::vector<std::uint32_t> all;
  for (std::uint32_t i = 1; i <= n; ++i) all.push_back(i);
  WebTopology t = make_topology(edges, all, {1});

  std::uniform_int_distribution<std::uint32_t> n_sessions_d(1, max_sessions);
  std::uniform_int_distribution<std::uint32_t> len_d(1, 7);
  std::uniform_int_distribution<std::uint32_t> page_d(1, n);
  std::bernoulli_distribution jump(0.15);
  std::vector<Session> sessions;
  const std::uint32_t n_sessions = n_sessions_d(rng);
  for (std::uint32_t s = 0; s < n_sessions; ++s) {
    std::vector<PageId> walk{P(page_d(rng))};
    const std::uint32_t len = len_d(rng);
    while (walk.size() < len) {
      auto succ = t.successors(walk.back());
      if (succ.empty() || jump(rng)) {
        walk.push_back(P(page_d(rng)));
      } else {
        walk.push_back(succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)]);
      }
    }
    sessions.push_back(make_session(std::to_string(s), walk));
  }
  return {std::move(t), std::move(sessions)};
}

std::vector<double> episode_length_pmf(double stp, std::size_t max_len) {
  std::vector<double> pmf(max_len, 0.0);
  double alive = 1.0;  // P(L >= m)
  for (std::size_t m = 1; m < max_len; ++m) {
    const double q_next = 1.0 - std::pow(1.0 - stp, static_cast<double>(m + 1));
    pmf[m - 1] = alive * q_next;
    alive *= 1.0 - q_next;
  }
  pmf[max_len - 1] = alive;
  return pmf;
}

double chi_square_p_value(const std::vector<std::size_t>& observed,
                          const std::vector<double>& pmf) {
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double o = 0, e = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    o += i < observed.size() ? static_cast<double>(observed[i]) : 0.0;
    e += pmf[i] * n;
    if (e >= 5.0) {
      cells.emplace_back(o, e);
      o = e = 0;
    }
  }
  if (e > 0 || o > 0) {
    if (cells.empty()) throw std::invalid_argument("too few observations");
    cells.back().first += o;
    cells.back().second += e;
  }
  double stat = 0;
  for (auto [oc, ec] : cells) stat += (oc - ec) * (oc - ec) / ec;
  const double dof = static_cast<double>(cells.size()) - 1.0;
  if (dof < 1) throw std::invalid_argument("need at least two cells");
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
}

bool naive_captured(const Session& real, const std::vector<Session>& reconstructed) {
  auto r = real.pages();
  for (const auto& h : reconstructed) {
    if (contains_run(h.pages(), r)) return true;
  }
  return false;
}

}  // namespace wum::testing
