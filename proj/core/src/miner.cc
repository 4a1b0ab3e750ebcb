#include "wum/miner.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace wum::mine {
namespace {

using Encoded = std::vector<std::uint32_t>;

struct EncodedHash {
  std::size_t operator()(const Encoded& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t x : v) {
      h = (h ^ x) * 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// (session, index of the pattern's last page inside that session)
struct Occurrence {
  std::uint32_t session;
  std::uint32_t end;
};

struct Node {
  Encoded pages;
  std::uint32_t count = 0;  // supporting sessions
  bool maximal = true;
  std::vector<Occurrence> occurrences;  // sorted by session, then end
};

class Threshold {
 public:
  Threshold(const MiningParams& params, std::size_t n_sessions)
      : need_(params.min_support * static_cast<double>(n_sessions)),
        slack_(1e-9 * std::max(1.0, need_)),
        strict_(params.strict_threshold) {}

  bool met(std::uint32_t count) const {
    const double c = count;
    return strict_ ? c > need_ + slack_ : c >= need_ - slack_;
  }

 private:
  double need_;
  double slack_;
  bool strict_;
};

std::uint32_t distinct_sessions(const std::vector<Occurrence>& occ) {
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i == 0 || occ[i].session != occ[i - 1].session) {
      ++count;
    }
  }
  return count;
}

std::uint32_t scan_count(const Encoded& pattern,
                         const std::vector<Encoded>& sessions) {
  std::uint32_t count = 0;
  for (const Encoded& s : sessions) {
    if (std::search(s.begin(), s.end(), pattern.begin(), pattern.end()) !=
        s.end()) {
      ++count;
    }
  }
  return count;
}

}  // namespace

void MiningParams::validate() const {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw std::invalid_argument("min_support must lie in (0, 1]");
  }
}

double support(std::span<const PageId> pattern,
               std::span<const Session> sessions) {
  if (sessions.empty()) {
    throw std::invalid_argument("support over an empty session list");
  }
  std::size_t count = 0;
  std::vector<PageId> pages;
  for (const Session& s : sessions) {
    pages = s.pages();
    if (is_subsession(pattern, pages)) {
      ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(sessions.size());
}

MiningResult sequential_apriori(const MiningParams& params,
                                std::span<const Session> sessions,
                                const WebTopology& topology,
                                std::span<const PageId> pages) {
  params.validate();
  if (sessions.empty()) {
    throw std::invalid_argument("cannot mine an empty session list");
  }
  const std::size_t n_topo = topology.size();
  const double n_sessions = static_cast<double>(sessions.size());
  const Threshold threshold(params, sessions.size());

  std::vector<bool> in_page_set(n_topo, false);
  for (PageId p : pages) {
    in_page_set[topology.index_of(p)] = true;
  }
  std::vector<Encoded> encoded;
  encoded.reserve(sessions.size());
  std::size_t longest = 0;
  for (const Session& s : sessions) {
    Encoded& e = encoded.emplace_back();
    e.reserve(s.visits.size());
    for (const Visit& v : s.visits) {
      std::uint32_t i = topology.index_of(v.page);
      if (!in_page_set[i]) {
        throw std::invalid_argument("session page " + to_string(v.page) +
                                    " is not in the page set");
      }
      e.push_back(i);
    }
    longest = std::max(longest, e.size());
  }
  const std::size_t max_len =
      params.max_length == 0 ? longest : params.max_length;

  auto to_pattern = [&](const Node& node) {
    Pattern p;
    p.pages.reserve(node.pages.size());
    for (std::uint32_t i : node.pages) {
      p.pages.push_back(topology.pages()[i]);
    }
    p.support = node.count / n_sessions;
    p.maximal = node.maximal;
    return p;
  };

  // Level 1: page order as given by `pages`.
  std::vector<std::uint32_t> single_count(n_topo, 0);
  {
    std::vector<std::uint32_t> seen_in(n_topo, UINT32_MAX);
    for (std::uint32_t s = 0; s < encoded.size(); ++s) {
      for (std::uint32_t i : encoded[s]) {
        if (seen_in[i] != s) {
          seen_in[i] = s;
          ++single_count[i];
        }
      }
    }
  }
  std::vector<std::vector<Node>> levels(1);
  std::vector<std::int64_t> single_node(n_topo, -1);
  std::vector<Pattern> rejected1;
  for (PageId p : pages) {
    const std::uint32_t i = topology.index_of(p);
    Node node{{i}, single_count[i], true, {}};
    if (threshold.met(node.count)) {
      single_node[i] = static_cast<std::int64_t>(levels[0].size());
      levels[0].push_back(std::move(node));
    } else if (params.record_rejected) {
      rejected1.push_back(to_pattern(node));
    }
  }
  if (!params.join_all_pages) {
    for (std::uint32_t s = 0; s < encoded.size(); ++s) {
      for (std::uint32_t pos = 0; pos < encoded[s].size(); ++pos) {
        std::int64_t k = single_node[encoded[s][pos]];
        if (k >= 0) {
          levels[0][k].occurrences.push_back({s, pos});
        }
      }
    }
  }
  std::vector<std::vector<Pattern>> rejected{std::move(rejected1)};

  // Candidate buckets keyed by the appended page, reused across patterns.
  std::vector<std::vector<Occurrence>> bucket(n_topo);
  std::vector<std::uint32_t> touched;

  for (std::size_t k = 1; k < max_len && !levels.back().empty(); ++k) {
    std::vector<Node>& current = levels.back();
    std::unordered_map<Encoded, std::size_t, EncodedHash> lookup;
    lookup.reserve(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
      lookup.emplace(current[i].pages, i);
    }
    std::vector<Node> next;
    std::vector<Pattern> next_rejected;

    auto accept = [&](Node& parent, Node&& child) {
      parent.maximal = false;
      if (const std::int64_t j = single_node[child.pages.back()]; j >= 0) {
        levels[0][j].maximal = false;
      }
      Encoded suffix(child.pages.begin() + 1, child.pages.end());
      if (auto it = lookup.find(suffix); it != lookup.end()) {
        current[it->second].maximal = false;
      }
      child.maximal = true;
      next.push_back(std::move(child));
    };

    for (std::size_t pi = 0; pi < current.size(); ++pi) {
      Node& parent = current[pi];
      const std::uint32_t last = parent.pages.back();

      if (params.join_all_pages) {
        for (PageId p : pages) {
          const std::uint32_t j = topology.index_of(p);
          if (!topology.has_link_by_index(last, j)) {
            continue;
          }
          Node child{parent.pages, 0, true, {}};
          child.pages.push_back(j);
          child.count = scan_count(child.pages, encoded);
          if (threshold.met(child.count)) {
            accept(parent, std::move(child));
          } else if (params.record_rejected) {
            next_rejected.push_back(to_pattern(child));
          }
        }
        continue;
      }

      touched.clear();
      for (const Occurrence& o : parent.occurrences) {
        const Encoded& s = encoded[o.session];
        if (o.end + 1 >= s.size()) {
          continue;
        }
        const std::uint32_t j = s[o.end + 1];
        if (single_node[j] < 0 || !topology.has_link_by_index(last, j)) {
          continue;
        }
        if (bucket[j].empty()) {
          touched.push_back(j);
        }
        bucket[j].push_back({o.session, o.end + 1});
      }
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t j : touched) {
        Node child{parent.pages, 0, true, std::move(bucket[j])};
        bucket[j].clear();
        child.pages.push_back(j);
        child.count = distinct_sessions(child.occurrences);
        if (threshold.met(child.count)) {
          accept(parent, std::move(child));
        } else if (params.record_rejected) {
          next_rejected.push_back(to_pattern(child));
        }
      }
    }
    // Occurrence lists of a finished level are no longer needed.
    for (Node& node : current) {
      node.occurrences = {};
    }
    levels.push_back(std::move(next));
    rejected.push_back(std::move(next_rejected));
  }

  MiningResult result;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    PatternLevel level;
    level.k = static_cast<std::uint32_t>(k + 1);
    for (const Node& node : levels[k]) {
      Pattern p = to_pattern(node);
      if (p.maximal && p.pages.size() >= params.min_maximal_length) {
        result.maximal.push_back(p);
      }
      level.patterns.push_back(std::move(p));
    }
    level.rejected = std::move(rejected[k]);
    result.levels.push_back(std::move(level));
  }
  std::sort(result.maximal.begin(), result.maximal.end(),
            [](const Pattern& a, const Pattern& b) { return a.pages < b.pages; });
  return result;
}

MiningResult sequential_apriori(const MiningParams& params,
                                std::span<const Session> sessions,
                                const WebTopology& topology) {
  return sequential_apriori(params, sessions, topology, topology.pages());
}

void write_patterns(std::ostream& out, std::span<const Pattern> patterns) {
  std::vector<std::string> lines;
  lines.reserve(patterns.size());
  for (const Pattern& p : patterns) {
    std::string line;
    for (std::size_t i = 0; i < p.pages.size(); ++i) {
      if (i > 0) {
        line += ',';
      }
      line += to_string(p.pages[i]);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "\tsupport=%.6f", p.support);
    line += buf;
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) {
    out << line << '\n';
  }
}

std::vector<Pattern> read_patterns(std::istream& in) {
  std::vector<Pattern> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos ||
        line.compare(tab + 1, 8, "support=") != 0) {
      throw FormatError(line_no, "expected '<pages>\\tsupport=<value>'");
    }
    Pattern p;
    p.maximal = true;
    std::string_view pages(line.data(), tab);
    std::size_t start = 0;
    while (true) {
      std::size_t comma = pages.find(',', start);
      auto id = parse_page_id(pages.substr(
          start, comma == std::string_view::npos ? std::string_view::npos
                                                 : comma - start));
      if (!id) {
        throw FormatError(line_no, "bad page id in pattern");
      }
      p.pages.push_back(*id);
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    const char* first = line.data() + tab + 9;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, p.support);
    if (ec != std::errc{} || ptr != last) {
      throw FormatError(line_no, "bad support value");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace wum::mine
