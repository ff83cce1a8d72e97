#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "htc/baselines.hpp"
#include "htc/error.hpp"

namespace htc {

std::string_view linkage_name(Linkage l) noexcept {
  switch (l) {
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::weighted: return "weighted";
    case Linkage::single: return "single";
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view name) {
  for (Linkage l : kAllLinkages) {
    if (linkage_name(l) == name) return l;
  }
  fail(ErrorCategory::invalid_argument, "unknown linkage '" + std::string(name) + "'");
}

Dendrogram hc_agglomerative(const DistanceMatrix& dm, Linkage linkage) {
  const std::size_t n = dm.size();
  if (n < 2) fail(ErrorCategory::invalid_argument, "agglomerative clustering needs at least two items");

  // Slot i holds the cluster whose smallest member is i, so scanning slots in
  // order breaks ties by smallest representatives.
  std::vector<double> d = dm.dense();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> node(n);
  for (std::size_t i = 0; i < n; ++i) node[i] = i;

  Dendrogram tree(n);
  double last_height = 0.0;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = n;
    std::size_t best_b = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (active[b] && (best_a == n || d[a * n + b] < best)) {
          best = d[a * n + b];
          best_a = a;
          best_b = b;
        }
      }
    }

    const std::size_t a = best_a;
    const std::size_t b = best_b;
    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    for (std::size_t q = 0; q < n; ++q) {
      if (!active[q] || q == a || q == b) continue;
      const double da = d[a * n + q];
      const double db = d[b * n + q];
      double merged = 0.0;
      switch (linkage) {
        case Linkage::single: merged = std::min(da, db); break;
        case Linkage::complete: merged = std::max(da, db); break;
        case Linkage::average: merged = (na * da + nb * db) / (na + nb); break;
        case Linkage::weighted: merged = 0.5 * (da + db); break;
      }
      d[a * n + q] = merged;
      d[q * n + a] = merged;
    }
    active[b] = false;
    size[a] += size[b];

    // Rounding in the averaged linkages can dip a merge a few ulps below
    // the previous one.
    last_height = std::max(last_height, best);
    node[a] = tree.add_node(last_height, {node[a], node[b]});
  }
  return tree;
}

double cophenetic_correlation(const DistanceMatrix& dm, const Dendrogram& dend) {
  const std::size_t n = dm.size();
  if (dend.leaf_count() != n) fail(ErrorCategory::invalid_argument, "dendrogram leaf count mismatch");
  if (n < 3) fail(ErrorCategory::invalid_argument, "cophenetic correlation needs at least three items");
  const DistanceMatrix coph = dend.cophenetic();

  const double pairs = static_cast<double>(n * (n - 1) / 2);
  double mean_d = 0.0;
  double mean_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!std::isfinite(coph(i, j))) {
        fail(ErrorCategory::degenerate, "dendrogram does not join every pair of items");
      }
      mean_d += dm(i, j);
      mean_c += coph(i, j);
    }
  }
  mean_d /= pairs;
  mean_c /= pairs;

  double sdd = 0.0;
  double scc = 0.0;
  double sdc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = dm(i, j) - mean_d;
      const double y = coph(i, j) - mean_c;
      sdd += x * x;
      scc += y * y;
      sdc += x * y;
    }
  }
  if (!(sdd > 0.0) || !(scc > 0.0)) {
    fail(ErrorCategory::degenerate, "degenerate: zero variance in distances or cophenetic heights");
  }
  return std::clamp(sdc / std::sqrt(sdd * scc), -1.0, 1.0);
}

LinkageChoice select_best_linkage(const DistanceMatrix& dm) {
  if (dm.size() < 3) fail(ErrorCategory::invalid_argument, "linkage selection needs at least three items");
  std::optional<LinkageChoice> best;
  std::optional<Error> last_error;
  for (Linkage l : kAllLinkages) {
    try {
      const double c = cophenetic_correlation(dm, hc_agglomerative(dm, l));
      if (!best || c > best->coefficient) best = LinkageChoice{l, c};
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::degenerate) throw;
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  return *best;
}

}  // namespace htc

namespace htc {

std::vector<std::size_t> cut_dendrogram(const Dendrogram& dend, std::size_t k) {
  const std::size_t n = dend.leaf_count();
  if (k < 1 || k > n) fail(ErrorCategory::invalid_argument, "cluster count must lie in [1, n]");

  // Any leaf below each node, and a leaf-level union-find.
  std::vector<std::size_t> leaf_of(n + dend.nodes().size());
  for (std::size_t i = 0; i < n; ++i) leaf_of[i] = i;
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::size_t trees = n;
  for (std::size_t idx = 0; idx < dend.nodes().size() && trees > k; ++idx) {
    const auto& node = dend.nodes()[idx];
    leaf_of[n + idx] = leaf_of[node.children.front()];
    const std::size_t root = find(leaf_of[node.children.front()]);
    for (std::size_t c : node.children) {
      const std::size_t other = find(leaf_of[c]);
      if (other != root) parent[other] = root;
    }
    trees -= node.children.size() - 1;
  }

  std::vector<std::size_t> ids(n, n);
  std::vector<std::size_t> out(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (ids[root] == n) ids[root] = next++;
    out[i] = ids[root];
  }
  return out;
}

}  // namespace htc
