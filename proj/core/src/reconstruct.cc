#include "wum/reconstruct.h"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace wum::recon {

std::string_view to_string(Heuristic h) {
  switch (h) {
    case Heuristic::kTO1:
      return "to1";
    case Heuristic::kTO2:
      return "to2";
    case Heuristic::kNO:
      return "no";
    case Heuristic::kSSRA:
      return "ssra";
  }
  return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view text) {
  for (Heuristic h : kAllHeuristics) {
    if (text == to_string(h)) {
      return h;
    }
  }
  return std::nullopt;
}

void ReconstructionParams::validate() const {
  if (page_stay_rho <= 0 || page_stay_rho > session_duration_delta) {
    throw std::invalid_argument("need 0 < rho <= delta");
  }
}

std::vector<Session> to1_reconstruct(const VisitStream& stream,
                                     const ReconstructionParams& params) {
  std::vector<Session> out;
  for (const Visit& v : stream.visits) {
    if (out.empty() || v.time - out.back().visits.front().time >=
                           params.session_duration_delta) {
      out.push_back({stream.user, {}});
    }
    out.back().visits.push_back(v);
  }
  return out;
}

std::vector<Session> to2_reconstruct(const VisitStream& stream,
                                     const ReconstructionParams& params) {
  std::vector<Session> out;
  for (const Visit& v : stream.visits) {
    if (out.empty() ||
        v.time - out.back().visits.back().time > params.page_stay_rho) {
      out.push_back({stream.user, {}});
    }
    out.back().visits.push_back(v);
  }
  return out;
}

std::vector<Session> no_reconstruct(const VisitStream& stream,
                                    const WebTopology& topology) {
  std::vector<Session> out;
  for (const Visit& v : stream.visits) {
    if (out.empty()) {
      out.push_back({stream.user, {v}});
      continue;
    }
    auto& visits = out.back().visits;
    if (topology.has_link(visits.back().page, v.page)) {
      visits.push_back(v);
      continue;
    }
    // Nearest earlier page of the session that links to v.
    std::size_t q = visits.size() - 1;
    bool found = false;
    while (q-- > 0) {
      if (topology.has_link(visits[q].page, v.page)) {
        found = true;
        break;
      }
    }
    if (!found) {
      out.push_back({stream.user, {v}});
      continue;
    }
    const std::size_t last = visits.size() - 1;
    const Timestamp steps = static_cast<Timestamp>(last - q);
    for (std::size_t i = last; i-- > q;) {
      Timestamp offset = steps - static_cast<Timestamp>(last - 1 - i);
      visits.push_back({visits[i].page, v.time - offset});
    }
    visits.push_back(v);
  }
  return out;
}

std::vector<Session> ssra_phase1(const VisitStream& stream,
                                 const ReconstructionParams& params) {
  std::vector<Session> out;
  for (const Visit& v : stream.visits) {
    if (out.empty() ||
        v.time - out.back().visits.back().time > params.page_stay_rho ||
        v.time - out.back().visits.front().time >=
            params.session_duration_delta) {
      out.push_back({stream.user, {}});
    }
    out.back().visits.push_back(v);
  }
  return out;
}

std::vector<Session> ssra_phase2(const Session& candidate,
                                 const WebTopology& topology,
                                 const ReconstructionParams& params) {
  const auto& c = candidate.visits;
  const std::size_t n = c.size();
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = topology.index_of(c[i].page);
  }
  auto links = [&](std::size_t a, std::size_t b) {
    return topology.has_link_by_index(idx[a], idx[b]);
  };

  // referrers[i]: remaining events earlier than i that link to it.
  std::vector<std::uint32_t> referrers(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c[j].time < c[i].time && links(j, i)) {
        ++referrers[i];
      }
    }
  }

  std::vector<bool> remaining(n, true);
  std::size_t left = n;
  std::vector<std::vector<std::size_t>> frontier;
  std::vector<std::vector<std::size_t>> next_frontier;
  std::vector<std::size_t> dangling;
  std::vector<bool> used;

  while (left > 0) {
    dangling.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] && referrers[i] == 0) {
        dangling.push_back(i);
      }
    }
    for (std::size_t d : dangling) {
      remaining[d] = false;
      --left;
    }
    for (std::size_t d : dangling) {
      for (std::size_t j = 0; j < n; ++j) {
        if (remaining[j] && c[d].time < c[j].time && links(d, j)) {
          --referrers[j];
        }
      }
    }

    used.assign(dangling.size(), false);
    next_frontier.clear();
    for (auto& s : frontier) {
      const std::size_t last = s.back();
      bool extended = false;
      for (std::size_t k = 0; k < dangling.size(); ++k) {
        const std::size_t d = dangling[k];
        if (c[last].time < c[d].time &&
            c[d].time - c[last].time <= params.page_stay_rho && links(last, d)) {
          auto& clone = next_frontier.emplace_back(s);
          clone.push_back(d);
          used[k] = true;
          extended = true;
        }
      }
      if (!extended) {
        next_frontier.push_back(std::move(s));
      }
    }
    for (std::size_t k = 0; k < dangling.size(); ++k) {
      if (!used[k]) {
        next_frontier.push_back({dangling[k]});
      }
    }
    frontier.swap(next_frontier);
  }

  std::vector<Session> out;
  out.reserve(frontier.size());
  for (const auto& s : frontier) {
    Session& session = out.emplace_back(Session{candidate.user, {}});
    session.visits.reserve(s.size());
    for (std::size_t i : s) {
      session.visits.push_back(c[i]);
    }
  }
  return out;
}

std::vector<Session> smart_sra(const VisitStream& stream,
                               const WebTopology& topology,
                               const ReconstructionParams& params) {
  std::vector<Session> out;
  for (const Session& candidate : ssra_phase1(stream, params)) {
    auto sessions = ssra_phase2(candidate, topology, params);
    std::move(sessions.begin(), sessions.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<Session> reconstruct(const VisitStream& stream,
                                 const WebTopology& topology,
                                 const ReconstructionParams& params) {
  switch (params.heuristic) {
    case Heuristic::kTO1:
      return to1_reconstruct(stream, params);
    case Heuristic::kTO2:
      return to2_reconstruct(stream, params);
    case Heuristic::kNO:
      return no_reconstruct(stream, topology);
    case Heuristic::kSSRA:
      return smart_sra(stream, topology, params);
  }
  throw std::invalid_argument("unknown heuristic");
}

std::vector<Session> reconstruct_all(std::span<const VisitStream> streams,
                                     const WebTopology& topology,
                                     const ReconstructionParams& params,
                                     unsigned workers) {
  params.validate();
  std::vector<std::vector<Session>> per_stream(streams.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < streams.size(); i = next++) {
      auto sessions = reconstruct(streams[i], topology, params);
      std::stable_sort(sessions.begin(), sessions.end(),
                       [](const Session& a, const Session& b) {
                         return a.visits.front().time < b.visits.front().time;
                       });
      per_stream[i] = std::move(sessions);
    }
  };
  workers = std::max<unsigned>(
      1, std::min<std::size_t>(workers, std::max<std::size_t>(1, streams.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  std::vector<Session> out;
  for (auto& list : per_stream) {
    std::move(list.begin(), list.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace wum::recon
