#include "htc/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "htc/error.hpp"

namespace htc {

namespace {

// Union-find over cluster slots; the root of a set is always its smallest
// slot so components come out in representative order.
class SlotForest {
 public:
  explicit SlotForest(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Grouping {
  std::vector<std::size_t> new_index;          // old slot -> new slot
  std::vector<std::vector<std::size_t>> parts;  // new slot -> old slots
};

Grouping group(SlotForest& forest, std::size_t k) {
  Grouping g;
  g.new_index.assign(k, 0);
  std::vector<std::size_t> root_to_new(k, std::numeric_limits<std::size_t>::max());
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t root = forest.find(s);
    if (root_to_new[root] == std::numeric_limits<std::size_t>::max()) {
      root_to_new[root] = g.parts.size();
      g.parts.emplace_back();
    }
    g.new_index[s] = root_to_new[root];
    g.parts[root_to_new[root]].push_back(s);
  }
  return g;
}

std::vector<Cluster> fuse(const std::vector<Cluster>& old, const Grouping& g) {
  std::vector<Cluster> out;
  out.reserve(g.parts.size());
  for (const auto& part : g.parts) {
    if (part.size() == 1) {
      out.push_back(old[part.front()]);
      continue;
    }
    Cluster merged;
    for (std::size_t s : part) merged.insert(merged.end(), old[s].begin(), old[s].end());
    std::sort(merged.begin(), merged.end());
    out.push_back(std::move(merged));
  }
  // Old clusters are sorted by representative and each part lists its slots
  // in ascending order, so the fused list is already in representative order.
  return out;
}

}  // namespace

Partition::Partition(double level, std::vector<Cluster> clusters)
    : level_(level),
      clusters_(std::make_shared<const std::vector<Cluster>>(std::move(clusters))) {}

Partition Partition::singletons(std::size_t n, double level) {
  std::vector<Cluster> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  return Partition(level, std::move(clusters));
}

std::size_t Partition::item_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters()) total += c.size();
  return total;
}

std::vector<std::size_t> Partition::assignment() const {
  std::vector<std::size_t> out(item_count(), 0);
  for (std::size_t c = 0; c < clusters().size(); ++c) {
    for (std::size_t item : clusters()[c]) out[item] = c;
  }
  return out;
}

const Cluster* Partition::find_by_representative(std::size_t rep) const noexcept {
  const auto& cs = clusters();
  auto it = std::lower_bound(cs.begin(), cs.end(), rep,
                             [](const Cluster& c, std::size_t r) { return c.front() < r; });
  if (it == cs.end() || it->front() != rep) return nullptr;
  return &*it;
}

void validate_partition(const Partition& p, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t total = 0;
  std::size_t last_rep = 0;
  for (std::size_t c = 0; c < p.cluster_count(); ++c) {
    const Cluster& cluster = p.clusters()[c];
    if (cluster.empty()) fail(ErrorCategory::invalid_argument, "partition has an empty cluster");
    if (!std::is_sorted(cluster.begin(), cluster.end())) {
      fail(ErrorCategory::invalid_argument, "partition cluster members are not sorted");
    }
    if (c > 0 && cluster.front() <= last_rep) {
      fail(ErrorCategory::invalid_argument, "partition clusters are not in representative order");
    }
    last_rep = cluster.front();
    for (std::size_t item : cluster) {
      if (item >= n || seen[item]) {
        fail(ErrorCategory::invalid_argument,
             "partition item " + std::to_string(item + 1) + " is out of range or repeated");
      }
      seen[item] = true;
      ++total;
    }
  }
  if (total != n) fail(ErrorCategory::invalid_argument, "partition does not cover every item");
}

LinkMatrix cluster_link_matrix(const Partition& partition, const DistanceMatrix& dm,
                               double r, LinkRule rule) {
  const auto& cs = partition.clusters();
  LinkMatrix links(cs.size());
  for (std::size_t a = 0; a < cs.size(); ++a) {
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      bool linked = false;
      for (std::size_t i : cs[a]) {
        for (std::size_t j : cs[b]) {
          if (i < dm.size() && j < dm.size() && is_linked(dm(i, j), r, rule)) {
            linked = true;
            break;
          }
        }
        if (linked) break;
      }
      links.set(a, b, linked);
    }
  }
  return links;
}

Partition merge_step(const Partition& partition, const LinkMatrix& links) {
  const std::size_t k = partition.cluster_count();
  if (links.size() != k) {
    fail(ErrorCategory::invalid_argument, "link matrix size does not match cluster count");
  }
  SlotForest forest(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (links(a, b)) forest.unite(a, b);
    }
  }
  const Grouping g = group(forest, k);
  if (g.parts.size() == k) return partition;
  return Partition(partition.level(), fuse(partition.clusters(), g));
}

ClusterHierarchy run_htc(const DistanceMatrix& dm, const FiltrationGrid& grid,
                         const HtcOptions& options) {
  const std::size_t n = dm.size();
  if (n == 0) fail(ErrorCategory::invalid_argument, "empty distance matrix");
  if (grid.values.empty()) fail(ErrorCategory::invalid_argument, "empty filtration grid");
  for (std::size_t m = 0; m < grid.values.size(); ++m) {
    if (!(grid.values[m] >= 0.0) || (m > 0 && !(grid.values[m] > grid.values[m - 1]))) {
      fail(ErrorCategory::invalid_argument, "filtration values must be nonnegative and increasing");
    }
  }

  ClusterHierarchy h;
  h.grid = grid;
  h.rule = options.rule;
  h.item_count = n;
  h.stats.evaluations_per_level.assign(grid.values.size(), 0);

  auto clusters = Partition::singletons(n).clusters();
  auto current = std::make_shared<const std::vector<Cluster>>(std::move(clusters));

  // Minimum cross distance between current clusters, and its global minimum.
  // While no cluster pair is linked at r the link matrix is all false and the
  // level needs no work.
  std::size_t k = n;
  std::vector<double> cross = dm.dense();
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) closest = std::min(closest, cross[i * n + j]);
  }
  h.stats.distance_reads += n * (n - 1) / 2;

  for (std::size_t m = 0; m < grid.values.size(); ++m) {
    const double r = grid.values[m];
    if (k > 1 && is_linked(closest, r, options.rule)) {
      ++h.stats.evaluated_levels;
      SlotForest forest(k);
      std::size_t evaluations = 0;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
          ++evaluations;
          if (is_linked(cross[a * k + b], r, options.rule)) forest.unite(a, b);
        }
      }
      h.stats.evaluations_per_level[m] = evaluations;
      h.stats.predicate_evaluations += evaluations;

      const Grouping g = group(forest, k);
      const std::size_t next_k = g.parts.size();
      for (const auto& part : g.parts) {
        if (part.size() < 2) continue;
        MergeEvent event;
        event.level = r;
        event.level_index = m;
        for (std::size_t s : part) event.absorbed.push_back((*current)[s].front());
        event.result = event.absorbed.front();
        h.merges.push_back(std::move(event));
      }
      current = std::make_shared<const std::vector<Cluster>>(fuse(*current, g));

      if (next_k > 1) {
        std::vector<double> next(next_k * next_k, std::numeric_limits<double>::infinity());
        for (std::size_t a = 0; a < next_k; ++a) next[a * next_k + a] = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
          const std::size_t na = g.new_index[a];
          for (std::size_t b = a + 1; b < k; ++b) {
            const std::size_t nb = g.new_index[b];
            if (na == nb) continue;
            double& slot = next[std::min(na, nb) * next_k + std::max(na, nb)];
            slot = std::min(slot, cross[a * k + b]);
          }
        }
        h.stats.distance_reads += k * (k - 1) / 2;
        closest = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < next_k; ++a) {
          for (std::size_t b = a + 1; b < next_k; ++b) {
            const double v = next[a * next_k + b];
            next[b * next_k + a] = v;
            closest = std::min(closest, v);
          }
        }
        cross = std::move(next);
      } else {
        cross.clear();
      }
      k = next_k;
    }
    h.levels.emplace_back(r, current);
    if (k == 1) break;
  }
  return h;
}

std::size_t betti0(const ClusterHierarchy& h, double r) {
  const auto& values = h.grid.values;
  if (values.empty() || h.levels.empty()) fail(ErrorCategory::invalid_argument, "empty hierarchy");
  if (!(r >= 0.0) || r > h.grid.r_max) {
    fail(ErrorCategory::invalid_argument, "filtration value outside [0, r_max]");
  }
  const auto it = std::upper_bound(values.begin(), values.end(), r);
  const std::size_t m = static_cast<std::size_t>(it - values.begin()) - 1;
  const std::size_t idx = std::min(m, h.levels.size() - 1);
  return h.levels[idx].cluster_count();
}

Barcode barcode(const ClusterHierarchy& h) {
  Barcode out;
  out.intervals.resize(h.item_count);
  for (std::size_t i = 0; i < h.item_count; ++i) out.intervals[i].representative = i;
  for (const auto& event : h.merges) {
    for (std::size_t rep : event.absorbed) {
      if (rep != event.result) out.intervals[rep].death = event.level;
    }
  }
  return out;
}

std::vector<OutlierEntry> outlier_ranking(const ClusterHierarchy& h) {
  std::vector<OutlierEntry> out;
  for (const auto& event : h.merges) {
    std::vector<OutlierEntry> fused;
    for (std::size_t rep : event.absorbed) {
      OutlierEntry entry;
      entry.merge_level = event.level;
      if (event.level_index == 0) {
        entry.items = {rep};
      } else {
        const Cluster* c = h.levels[event.level_index - 1].find_by_representative(rep);
        entry.items = c != nullptr ? *c : Cluster{rep};
      }
      fused.push_back(std::move(entry));
    }
    // A participant strictly larger than all others is the one absorbing the
    // rest; it does not join a larger cluster and is not listed.
    std::size_t largest = 0;
    std::size_t largest_count = 0;
    for (const auto& e : fused) {
      if (e.items.size() > largest) {
        largest = e.items.size();
        largest_count = 1;
      } else if (e.items.size() == largest) {
        ++largest_count;
      }
    }
    for (auto& e : fused) {
      if (largest_count == 1 && e.items.size() == largest) continue;
      out.push_back(std::move(e));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const OutlierEntry& a, const OutlierEntry& b) {
    if (a.merge_level != b.merge_level) return a.merge_level > b.merge_level;
    return a.items.front() < b.items.front();
  });
  return out;
}

Dendrogram export_dendrogram(const ClusterHierarchy& h) {
  Dendrogram tree(h.item_count);
  // Current tree node for each live representative.
  std::unordered_map<std::size_t, std::size_t> node_of;
  for (std::size_t i = 0; i < h.item_count; ++i) node_of[i] = i;
  for (const auto& event : h.merges) {
    std::vector<std::size_t> children;
    children.reserve(event.absorbed.size());
    for (std::size_t rep : event.absorbed) {
      children.push_back(node_of.at(rep));
      node_of.erase(rep);
    }
    node_of[event.result] = tree.add_node(event.level, std::move(children));
  }
  return tree;
}

}  // namespace htc
