#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wum/types.h"

namespace wum {

// Directed hyperlink graph of a web site with its entry pages. Immutable
// after construction; safe to share between threads.
class WebTopology {
 public:
  // `successors[i]` lists the link targets of `pages[i]`. Throws
  // std::invalid_argument on duplicate pages, dangling links, self-loops or
  // an empty/unknown entry set.
  WebTopology(std::vector<PageId> pages,
              std::vector<std::vector<PageId>> successors,
              std::vector<PageId> entry_pages);

  std::span<const PageId> pages() const { return pages_; }
  std::span<const PageId> entry_pages() const { return entry_pages_; }
  std::size_t size() const { return pages_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  bool contains(PageId page) const { return index_.contains(page); }

  // Throws std::out_of_range naming the page when either end is unknown.
  bool has_link(PageId from, PageId to) const;

  std::span<const PageId> successors(PageId page) const;

  // Dense index in [0, size()), in `pages()` order.
  std::uint32_t index_of(PageId page) const;
  bool has_link_by_index(std::uint32_t from, std::uint32_t to) const {
    return links_.test(from, to);
  }

  friend bool operator==(const WebTopology& a, const WebTopology& b);

 private:
  // Bit matrix for small graphs, hashed edge set otherwise.
  class LinkSet {
   public:
    void reset(std::size_t n);
    void set(std::uint32_t a, std::uint32_t b);
    bool test(std::uint32_t a, std::uint32_t b) const {
      if (!bits_.empty()) {
        std::size_t bit = static_cast<std::size_t>(a) * n_ + b;
        return (bits_[bit >> 6] >> (bit & 63)) & 1U;
      }
      return hashed_.contains((static_cast<std::uint64_t>(a) << 32) | b);
    }

   private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<std::uint64_t> hashed_;
  };

  std::vector<PageId> pages_;
  std::vector<std::vector<PageId>> successors_;
  std::vector<PageId> entry_pages_;
  std::unordered_map<PageId, std::uint32_t> index_;
  LinkSet links_;
  std::size_t edge_count_ = 0;
};

struct TopologyGenParams {
  std::uint32_t n_pages = 300;
  double avg_outdegree = 15.0;
  double entry_fraction = 0.05;
  std::uint64_t seed = 1;
};

// Independent-edge random digraph: each ordered pair (a, b), a != b, is a
// link with probability avg_outdegree / (n_pages - 1). Pages are P1..Pn;
// ceil(entry_fraction * n) distinct entry pages (at least one).
WebTopology generate_random_topology(const TopologyGenParams& params);

// Text format:
//   pages: <n>
//   P<i>: <comma-separated successors>
//   entry: <comma-separated pages>
// Whitespace-insensitive; '#' starts a comment. Throws FormatError.
WebTopology read_topology(std::istream& in);
void write_topology(std::ostream& out, const WebTopology& topology);

WebTopology load_topology(const std::filesystem::path& path);
void save_topology(const WebTopology& topology,
                   const std::filesystem::path& path);

}  // namespace wum
