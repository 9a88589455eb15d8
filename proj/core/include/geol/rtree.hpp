#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "geol/geometry.hpp"

namespace geol {

/// In-memory R-tree over minimum bounding boxes: Sort-Tile-Recursive bulk
/// loading, Guttman quadratic-split insertion, and closed-box intersection
/// queries (boxes that merely share an edge still intersect, so
/// boundary-touching candidates are never filtered out).
template <typename Payload>
class RTree {
 public:
  struct Entry {
    BoundingBox box;
    Payload value;
  };

  struct Config {
    std::size_t max_fanout = 16;
    std::size_t min_fanout = 6;
  };

  RTree() = default;
  explicit RTree(Config cfg) : cfg_(cfg) {}

  static RTree bulk_load(std::vector<Entry> entries, Config cfg = {}) {
    RTree tree(cfg);
    tree.size_ = entries.size();
    if (entries.empty()) return tree;

    std::vector<std::unique_ptr<Node>> level;
    if (entries.size() <= cfg.max_fanout) {
      level.push_back(make_leaf(std::move(entries)));
    } else {
      // STR: sort by center x, carve vertical slices of sqrt(P) runs, sort
      // each slice by center y, pack runs of max_fanout.
      std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return center_x(a.box) < center_x(b.box);
      });
      std::size_t leaf_count = ceil_div(entries.size(), cfg.max_fanout);
      std::size_t slices = static_cast<std::size_t>(
          std::ceil(std::sqrt(static_cast<double>(leaf_count))));
      std::size_t slice_size = ceil_div(entries.size(), slices);
      for (std::size_t s = 0; s < entries.size(); s += slice_size) {
        std::size_t end = std::min(s + slice_size, entries.size());
        std::sort(entries.begin() + static_cast<std::ptrdiff_t>(s),
                  entries.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Entry& a, const Entry& b) { return center_y(a.box) < center_y(b.box); });
        for (std::size_t i = s; i < end; i += cfg.max_fanout) {
          std::size_t stop = std::min(i + cfg.max_fanout, end);
          std::vector<Entry> chunk(entries.begin() + static_cast<std::ptrdiff_t>(i),
                                   entries.begin() + static_cast<std::ptrdiff_t>(stop));
          level.push_back(make_leaf(std::move(chunk)));
        }
      }
      rebalance_level(level, cfg, [](Node& n) -> std::vector<Entry>& { return n.entries; });
    }

    while (level.size() > cfg.max_fanout) {
      level = pack_level(std::move(level), cfg);
    }
    if (level.size() == 1) {
      tree.root_ = std::move(level.front());
    } else {
      tree.root_ = make_internal(std::move(level));
    }
    return tree;
  }

  void insert(const BoundingBox& box, Payload value) {
    ++size_;
    if (!root_) {
      root_ = std::make_unique<Node>();
      root_->leaf = true;
      root_->box = box;
      root_->entries.push_back({box, std::move(value)});
      return;
    }
    auto sibling = insert_into(*root_, Entry{box, std::move(value)});
    if (sibling) {
      std::vector<std::unique_ptr<Node>> children;
      children.push_back(std::move(root_));
      children.push_back(std::move(sibling));
      root_ = make_internal(std::move(children));
    }
  }

  template <typename Fn>
  void query(const BoundingBox& box, Fn&& fn) const {
    if (root_ && root_->box.intersects(box)) query_node(*root_, box, fn);
  }

  std::vector<Payload> query(const BoundingBox& box) const {
    std::vector<Payload> out;
    query(box, [&](const Payload& p) { out.push_back(p); });
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::size_t height() const {
    std::size_t h = 0;
    for (const Node* n = root_.get(); n; n = n->leaf ? nullptr : n->children.front().get()) ++h;
    return h;
  }

  const Config& config() const { return cfg_; }

  /// Full structural walk; returns an empty string when every invariant
  /// holds, else a description of the first failure. Test support.
  std::string check_structure() const {
    if (!root_) return size_ == 0 ? "" : "null root with nonzero size";
    std::size_t leaf_depth = kNoDepth;
    std::size_t counted = 0;
    std::string err = check_node(*root_, 0, true, leaf_depth, counted);
    if (!err.empty()) return err;
    if (counted != size_) return "entry count mismatch";
    return "";
  }

 private:
  static constexpr std::size_t kNoDepth = static_cast<std::size_t>(-1);

  struct Node {
    BoundingBox box;
    bool leaf = false;
    std::vector<std::unique_ptr<Node>> children;  // internal
    std::vector<Entry> entries;                   // leaf
  };

  static std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }
  static double center_x(const BoundingBox& b) { return 0.5 * (b.min_x + b.max_x); }
  static double center_y(const BoundingBox& b) { return 0.5 * (b.min_y + b.max_y); }

  static std::unique_ptr<Node> make_leaf(std::vector<Entry> entries) {
    auto node = std::make_unique<Node>();
    node->leaf = true;
    node->entries = std::move(entries);
    recompute_box(*node);
    return node;
  }

  static std::unique_ptr<Node> make_internal(std::vector<std::unique_ptr<Node>> children) {
    auto node = std::make_unique<Node>();
    node->leaf = false;
    node->children = std::move(children);
    recompute_box(*node);
    return node;
  }

  static void recompute_box(Node& node) {
    bool first = true;
    auto take = [&](const BoundingBox& b) {
      if (first) {
        node.box = b;
        first = false;
      } else {
        node.box.expand(b);
      }
    };
    if (node.leaf) {
      for (const auto& e : node.entries) take(e.box);
    } else {
      for (const auto& c : node.children) take(c->box);
    }
  }

  // STR packing leaves an undersized run at the tail of every slice. Steal
  // from the left neighbor until both sides satisfy min_fanout, merging when
  // the neighbor cannot spare any (safe while min <= max/2).
  template <typename GetItems>
  static void rebalance_level(std::vector<std::unique_ptr<Node>>& level, Config cfg,
                              GetItems items) {
    for (std::size_t i = 1; i < level.size(); ++i) {
      auto& curr = items(*level[i]);
      auto& prev = items(*level[i - 1]);
      while (curr.size() < cfg.min_fanout && prev.size() > cfg.min_fanout) {
        curr.insert(curr.begin(), std::move(prev.back()));
        prev.pop_back();
      }
      if (curr.size() < cfg.min_fanout) {
        for (auto& item : curr) prev.push_back(std::move(item));
        recompute_box(*level[i - 1]);
        level.erase(level.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
        continue;
      }
      recompute_box(*level[i]);
      recompute_box(*level[i - 1]);
    }
  }

  static std::vector<std::unique_ptr<Node>> pack_level(std::vector<std::unique_ptr<Node>> nodes,
                                                       Config cfg) {
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
      return center_x(a->box) < center_x(b->box);
    });
    std::size_t parent_count = ceil_div(nodes.size(), cfg.max_fanout);
    std::size_t slices =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(parent_count))));
    std::size_t slice_size = ceil_div(nodes.size(), slices);
    std::vector<std::unique_ptr<Node>> parents;
    for (std::size_t s = 0; s < nodes.size(); s += slice_size) {
      std::size_t end = std::min(s + slice_size, nodes.size());
      std::sort(nodes.begin() + static_cast<std::ptrdiff_t>(s),
                nodes.begin() + static_cast<std::ptrdiff_t>(end),
                [](const auto& a, const auto& b) { return center_y(a->box) < center_y(b->box); });
      for (std::size_t i = s; i < end; i += cfg.max_fanout) {
        std::size_t stop = std::min(i + cfg.max_fanout, end);
        std::vector<std::unique_ptr<Node>> chunk;
        chunk.reserve(stop - i);
        for (std::size_t k = i; k < stop; ++k) chunk.push_back(std::move(nodes[k]));
        parents.push_back(make_internal(std::move(chunk)));
      }
    }
    rebalance_level(parents, cfg,
                    [](Node& n) -> std::vector<std::unique_ptr<Node>>& { return n.children; });
    return parents;
  }

  template <typename Fn>
  static void query_node(const Node& node, const BoundingBox& box, Fn& fn) {
    if (node.leaf) {
      for (const auto& e : node.entries) {
        if (e.box.intersects(box)) fn(e.value);
      }
      return;
    }
    for (const auto& c : node.children) {
      if (c->box.intersects(box)) query_node(*c, box, fn);
    }
  }

  static double enlargement(const BoundingBox& box, const BoundingBox& add) {
    BoundingBox grown = box;
    grown.expand(add);
    return grown.area() - box.area();
  }

  std::unique_ptr<Node> insert_into(Node& node, Entry entry) {
    node.box.expand(entry.box);
    if (node.leaf) {
      node.entries.push_back(std::move(entry));
      if (node.entries.size() > cfg_.max_fanout) return split(node, node.entries);
      return nullptr;
    }
    Node* best = nullptr;
    double best_enl = 0.0;
    for (const auto& c : node.children) {
      double enl = enlargement(c->box, entry.box);
      if (!best || enl < best_enl || (enl == best_enl && c->box.area() < best->box.area())) {
        best = c.get();
        best_enl = enl;
      }
    }
    auto sibling = insert_into(*best, std::move(entry));
    if (sibling) {
      node.children.push_back(std::move(sibling));
      if (node.children.size() > cfg_.max_fanout) return split(node, node.children);
    }
    return nullptr;
  }

  static const BoundingBox& item_box(const Entry& e) { return e.box; }
  static const BoundingBox& item_box(const std::unique_ptr<Node>& n) { return n->box; }

  // Guttman quadratic split over either leaf entries or child nodes. Items
  // move out of `items`; the first group stays in `node`, the second is
  // returned as the new sibling.
  template <typename Item>
  std::unique_ptr<Node> split(Node& node, std::vector<Item>& items) {
    std::vector<Item> pool = std::move(items);
    items.clear();

    // PickSeeds: the pair wasting the most area when joined.
    std::size_t seed_a = 0, seed_b = 1;
    double worst = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        BoundingBox join = item_box(pool[i]);
        join.expand(item_box(pool[j]));
        double waste = join.area() - item_box(pool[i]).area() - item_box(pool[j]).area();
        if (waste > worst) {
          worst = waste;
          seed_a = i;
          seed_b = j;
        }
      }
    }

    std::vector<Item> group_a, group_b;
    BoundingBox box_a = item_box(pool[seed_a]);
    BoundingBox box_b = item_box(pool[seed_b]);
    group_a.push_back(std::move(pool[seed_a]));
    group_b.push_back(std::move(pool[seed_b]));
    std::vector<Item> rest;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i != seed_a && i != seed_b) rest.push_back(std::move(pool[i]));
    }

    while (!rest.empty()) {
      // Force-assign when a group must take everything left to reach the
      // minimum fill.
      if (group_a.size() + rest.size() == cfg_.min_fanout) {
        for (auto& item : rest) {
          box_a.expand(item_box(item));
          group_a.push_back(std::move(item));
        }
        rest.clear();
        break;
      }
      if (group_b.size() + rest.size() == cfg_.min_fanout) {
        for (auto& item : rest) {
          box_b.expand(item_box(item));
          group_b.push_back(std::move(item));
        }
        rest.clear();
        break;
      }
      // PickNext: strongest preference first.
      std::size_t pick = 0;
      double best_diff = -1.0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        double da = enlargement(box_a, item_box(rest[i]));
        double db = enlargement(box_b, item_box(rest[i]));
        double diff = std::fabs(da - db);
        if (diff > best_diff) {
          best_diff = diff;
          pick = i;
        }
      }
      double da = enlargement(box_a, item_box(rest[pick]));
      double db = enlargement(box_b, item_box(rest[pick]));
      bool to_a;
      if (da != db) {
        to_a = da < db;
      } else if (box_a.area() != box_b.area()) {
        to_a = box_a.area() < box_b.area();
      } else {
        to_a = group_a.size() <= group_b.size();
      }
      if (to_a) {
        box_a.expand(item_box(rest[pick]));
        group_a.push_back(std::move(rest[pick]));
      } else {
        box_b.expand(item_box(rest[pick]));
        group_b.push_back(std::move(rest[pick]));
      }
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    auto sibling = std::make_unique<Node>();
    sibling->leaf = node.leaf;
    if constexpr (std::is_same_v<Item, Entry>) {
      node.entries = std::move(group_a);
      sibling->entries = std::move(group_b);
    } else {
      node.children = std::move(group_a);
      sibling->children = std::move(group_b);
    }
    recompute_box(node);
    recompute_box(*sibling);
    return sibling;
  }

  std::string check_node(const Node& node, std::size_t depth, bool is_root,
                         std::size_t& leaf_depth, std::size_t& counted) const {
    std::size_t count = node.leaf ? node.entries.size() : node.children.size();
    if (is_root) {
      if (!node.leaf && count < 2) return "root has fewer than 2 children";
    } else if (count < cfg_.min_fanout || count > cfg_.max_fanout) {
      return "node fanout " + std::to_string(count) + " outside [" +
             std::to_string(cfg_.min_fanout) + "," + std::to_string(cfg_.max_fanout) + "]";
    }
    if (node.leaf) {
      if (leaf_depth == kNoDepth) leaf_depth = depth;
      if (depth != leaf_depth) return "leaves at unequal depth";
      counted += node.entries.size();
      for (const auto& e : node.entries) {
        if (!node.box.contains(e.box)) return "entry box outside leaf box";
      }
    }
    bool first = true;
    BoundingBox expect;
    auto take = [&](const BoundingBox& b) {
      if (first) {
        expect = b;
        first = false;
      } else {
        expect.expand(b);
      }
    };
    if (node.leaf) {
      for (const auto& e : node.entries) take(e.box);
    } else {
      for (const auto& c : node.children) take(c->box);
    }
    if (!(expect == node.box)) return "node box is not the union of its children";
    if (!node.leaf) {
      for (const auto& c : node.children) {
        if (!node.box.contains(c->box)) return "child box outside parent box";
        std::string err = check_node(*c, depth + 1, false, leaf_depth, counted);
        if (!err.empty()) return err;
      }
    }
    return "";
  }

  Config cfg_;
  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

}  // namespace geol
