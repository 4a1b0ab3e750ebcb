#include "wum/topology.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace wum {
namespace {

// Graphs up to this many pages get a dense bit matrix (8 MiB at the limit).
constexpr std::size_t kDenseLimit = 8192;

void sort_unique(std::vector<PageId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void WebTopology::LinkSet::reset(std::size_t n) {
  n_ = n;
  bits_.clear();
  hashed_.clear();
  if (n <= kDenseLimit) {
    bits_.assign((n * n + 63) / 64, 0);
  }
}

void WebTopology::LinkSet::set(std::uint32_t a, std::uint32_t b) {
  if (!bits_.empty()) {
    std::size_t bit = static_cast<std::size_t>(a) * n_ + b;
    bits_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  } else {
    hashed_.insert((static_cast<std::uint64_t>(a) << 32) | b);
  }
}

WebTopology::WebTopology(std::vector<PageId> pages,
                         std::vector<std::vector<PageId>> successors,
                         std::vector<PageId> entry_pages) {
  if (pages.size() != successors.size()) {
    throw std::invalid_argument("pages and successor lists differ in size");
  }
  std::vector<std::size_t> order(pages.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pages[a] < pages[b]; });
  pages_.reserve(pages.size());
  successors_.reserve(pages.size());
  for (std::size_t i : order) {
    if (!pages_.empty() && pages_.back() == pages[i]) {
      throw std::invalid_argument("duplicate page " + to_string(pages[i]));
    }
    pages_.push_back(pages[i]);
    successors_.push_back(std::move(successors[i]));
  }
  for (std::uint32_t i = 0; i < pages_.size(); ++i) {
    index_.emplace(pages_[i], i);
  }

  links_.reset(pages_.size());
  for (std::uint32_t i = 0; i < pages_.size(); ++i) {
    auto& succ = successors_[i];
    sort_unique(succ);
    for (PageId to : succ) {
      if (to == pages_[i]) {
        throw std::invalid_argument("self-loop on " + to_string(to));
      }
      auto it = index_.find(to);
      if (it == index_.end()) {
        throw std::invalid_argument("link " + to_string(pages_[i]) + " -> " +
                                    to_string(to) +
                                    " references an unknown page");
      }
      links_.set(i, it->second);
    }
    edge_count_ += succ.size();
  }

  sort_unique(entry_pages);
  if (entry_pages.empty()) {
    throw std::invalid_argument("topology needs at least one entry page");
  }
  for (PageId p : entry_pages) {
    if (!contains(p)) {
      throw std::invalid_argument("entry page " + to_string(p) +
                                  " is not a page of the topology");
    }
  }
  entry_pages_ = std::move(entry_pages);
}

std::uint32_t WebTopology::index_of(PageId page) const {
  auto it = index_.find(page);
  if (it == index_.end()) {
    throw std::out_of_range("unknown page " + to_string(page));
  }
  return it->second;
}

bool WebTopology::has_link(PageId from, PageId to) const {
  return links_.test(index_of(from), index_of(to));
}

std::span<const PageId> WebTopology::successors(PageId page) const {
  return successors_[index_of(page)];
}

bool operator==(const WebTopology& a, const WebTopology& b) {
  return a.pages_ == b.pages_ && a.successors_ == b.successors_ &&
         a.entry_pages_ == b.entry_pages_;
}

WebTopology generate_random_topology(const TopologyGenParams& params) {
  const std::uint32_t n = params.n_pages;
  if (n == 0) {
    throw std::invalid_argument("n_pages must be positive");
  }
  if (!(params.avg_outdegree > 0.0) || params.avg_outdegree >= n) {
    throw std::invalid_argument("avg_outdegree must lie in (0, n_pages)");
  }
  if (!(params.entry_fraction > 0.0) || params.entry_fraction > 1.0) {
    throw std::invalid_argument("entry_fraction must lie in (0, 1]");
  }

  std::mt19937_64 rng(params.seed);
  std::vector<PageId> pages(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    pages[i] = PageId{i + 1};
  }

  std::vector<std::vector<PageId>> successors(n);
  if (n > 1) {
    const double p =
        std::min(1.0, params.avg_outdegree / static_cast<double>(n - 1));
    const double log_q = std::log1p(-p);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Geometric skipping over the n-1 candidate targets of each page.
    for (std::uint32_t a = 0; a < n; ++a) {
      std::int64_t c = -1;
      while (true) {
        double skip = std::floor(std::log1p(-unit(rng)) / log_q);
        if (skip >= static_cast<double>(n)) {
          break;
        }
        c += 1 + static_cast<std::int64_t>(skip);
        if (c >= static_cast<std::int64_t>(n - 1)) {
          break;
        }
        std::uint32_t b = static_cast<std::uint32_t>(c) < a
                              ? static_cast<std::uint32_t>(c)
                              : static_cast<std::uint32_t>(c) + 1;
        successors[a].push_back(pages[b]);
      }
    }
  }

  std::size_t n_entry = static_cast<std::size_t>(
      std::ceil(params.entry_fraction * static_cast<double>(n) - 1e-9));
  n_entry = std::clamp<std::size_t>(n_entry, 1, n);
  std::vector<PageId> shuffled = pages;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.resize(n_entry);

  return WebTopology(std::move(pages), std::move(successors),
                     std::move(shuffled));
}

namespace {

struct PendingRef {
  PageId page;
  std::size_t line;
};

std::vector<PendingRef> parse_id_list(std::string_view list, std::size_t line) {
  std::vector<PendingRef> out;
  list = trim(list);
  if (list.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    std::string_view item = trim(list.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start));
    auto id = parse_page_id(item);
    if (!id) {
      throw FormatError(line, "bad page id '" + std::string(item) + "'");
    }
    out.push_back({*id, line});
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace

WebTopology read_topology(std::istream& in) {
  std::optional<std::size_t> declared;
  std::map<PageId, std::vector<PendingRef>> adjacency;
  std::optional<std::vector<PendingRef>> entry;
  std::size_t entry_line = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw FormatError(line_no, "expected '<key>: <value>'");
    }
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = line.substr(colon + 1);

    if (key == "pages") {
      if (declared) {
        throw FormatError(line_no, "duplicate 'pages:' header");
      }
      std::string_view v = trim(value);
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
      if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw FormatError(line_no, "bad page count");
      }
      declared = n;
    } else if (key == "entry") {
      if (entry) {
        throw FormatError(line_no, "duplicate 'entry:' line");
      }
      entry = parse_id_list(value, line_no);
      entry_line = line_no;
    } else {
      if (!declared) {
        throw FormatError(line_no, "page line before 'pages:' header");
      }
      auto id = parse_page_id(key);
      if (!id) {
        throw FormatError(line_no, "bad page id '" + std::string(key) + "'");
      }
      auto [it, inserted] = adjacency.emplace(*id, parse_id_list(value, line_no));
      if (!inserted) {
        throw FormatError(line_no, "page " + to_string(*id) + " declared twice");
      }
      for (const PendingRef& ref : it->second) {
        if (ref.page == *id) {
          throw FormatError(line_no, "self-loop on " + to_string(*id));
        }
      }
    }
  }

  if (!declared) {
    throw FormatError(0, "missing 'pages:' header");
  }
  if (adjacency.empty()) {
    throw FormatError(0, "empty pages section");
  }
  if (adjacency.size() != *declared) {
    throw FormatError(0, "header declares " + std::to_string(*declared) +
                             " pages but " + std::to_string(adjacency.size()) +
                             " are listed");
  }
  if (!entry || entry->empty()) {
    throw FormatError(entry_line, "missing or empty 'entry:' line");
  }

  auto check = [&](const PendingRef& ref) {
    if (!adjacency.contains(ref.page)) {
      throw FormatError(ref.line,
                        "dangling reference to undeclared page " +
                            to_string(ref.page));
    }
  };
  std::vector<PageId> pages;
  std::vector<std::vector<PageId>> successors;
  for (const auto& [page, refs] : adjacency) {
    pages.push_back(page);
    auto& succ = successors.emplace_back();
    for (const PendingRef& ref : refs) {
      check(ref);
      succ.push_back(ref.page);
    }
  }
  std::vector<PageId> entries;
  for (const PendingRef& ref : *entry) {
    check(ref);
    entries.push_back(ref.page);
  }
  return WebTopology(std::move(pages), std::move(successors),
                     std::move(entries));
}

void write_topology(std::ostream& out, const WebTopology& topology) {
  out << "pages: " << topology.size() << '\n';
  for (PageId page : topology.pages()) {
    out << to_string(page) << ':';
    const char* sep = " ";
    for (PageId to : topology.successors(page)) {
      out << sep << to_string(to);
      sep = ",";
    }
    out << '\n';
  }
  out << "entry:";
  const char* sep = " ";
  for (PageId p : topology.entry_pages()) {
    out << sep << to_string(p);
    sep = ",";
  }
  out << '\n';
}

WebTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_topology(in);
}

void save_topology(const WebTopology& topology,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_topology(out, topology);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace wum
