#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

#include "htc/dendrogram.hpp"
#include "htc/distance_matrix.hpp"
#include "htc/filtration.hpp"

namespace htc {

// Sorted, 0-based item indices. The representative is the smallest member.
using Cluster = std::vector<std::size_t>;

// Clusters at one filtration value, sorted by representative. The cluster
// list is immutable and shared between consecutive levels that do not
// change, so copies are cheap.
class Partition {
 public:
  Partition() = default;
  Partition(double level, std::vector<Cluster> clusters);
  Partition(double level, std::shared_ptr<const std::vector<Cluster>> clusters)
      : level_(level), clusters_(std::move(clusters)) {}

  static Partition singletons(std::size_t n, double level = 0.0);

  double level() const noexcept { return level_; }
  const std::vector<Cluster>& clusters() const noexcept { return *clusters_; }
  std::size_t cluster_count() const noexcept { return clusters_ ? clusters_->size() : 0; }
  std::size_t item_count() const noexcept;

  std::size_t representative(std::size_t cluster) const noexcept {
    return (*clusters_)[cluster].front();
  }

  // Cluster id per item.
  std::vector<std::size_t> assignment() const;

  // Cluster whose representative is rep, or nullptr.
  const Cluster* find_by_representative(std::size_t rep) const noexcept;

  // Same clusters (shared, not copied) at another filtration value.
  Partition at_level(double level) const { return Partition(level, clusters_); }

  bool shares_clusters_with(const Partition& other) const noexcept {
    return clusters_ == other.clusters_;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.level_ == b.level_ && a.clusters() == b.clusters();
  }

 private:
  double level_ = 0.0;
  std::shared_ptr<const std::vector<Cluster>> clusters_ =
      std::make_shared<const std::vector<Cluster>>();
};

// Checks disjointness, coverage of {0..n-1}, nonempty sorted clusters and
// representative order. Throws on violation.
void validate_partition(const Partition& p, std::size_t n);

struct MergeEvent {
  double level = 0.0;
  std::size_t level_index = 0;
  std::vector<std::size_t> absorbed;  // representatives, ascending
  std::size_t result = 0;             // representative of the union

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

// Work counters for one run. Predicate evaluations are entries of the
// cluster-link matrix actually computed; distance reads cover the
// bookkeeping of cross-cluster minimum distances.
struct HtcStats {
  std::size_t predicate_evaluations = 0;
  std::size_t distance_reads = 0;
  std::vector<std::size_t> evaluations_per_level;  // one per grid value
  std::size_t evaluated_levels = 0;
};

struct ClusterHierarchy {
  FiltrationGrid grid;
  LinkRule rule = LinkRule::inclusive;
  std::size_t item_count = 0;
  std::vector<Partition> levels;
  std::vector<MergeEvent> merges;
  HtcStats stats;
};

struct HtcOptions {
  LinkRule rule = LinkRule::inclusive;
};

// L(a,b) = some cross pair of members is linked at r.
LinkMatrix cluster_link_matrix(const Partition& partition, const DistanceMatrix& dm,
                               double r, LinkRule rule = LinkRule::inclusive);

// Connected components of the cluster graph given by links. The output keeps
// the input level.
Partition merge_step(const Partition& partition, const LinkMatrix& links);

// Runs the filtration. levels[m] is the component partition at
// grid.values[m]; the run stops after the first single-cluster level.
ClusterHierarchy run_htc(const DistanceMatrix& dm, const FiltrationGrid& grid,
                         const HtcOptions& options = {});

// Cluster count at the largest grid value <= r.
std::size_t betti0(const ClusterHierarchy& h, double r);

struct BarInterval {
  std::size_t representative = 0;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();

  friend bool operator==(const BarInterval&, const BarInterval&) = default;
};

struct Barcode {
  std::vector<BarInterval> intervals;  // indexed by item
};

Barcode barcode(const ClusterHierarchy& h);

struct OutlierEntry {
  Cluster items;
  double merge_level = 0.0;
};

// Clusters that join a strictly larger cluster, latest merges first, ties by
// representative. At each merge every participant is listed except a unique
// largest one, which absorbs the others.
std::vector<OutlierEntry> outlier_ranking(const ClusterHierarchy& h);

Dendrogram export_dendrogram(const ClusterHierarchy& h);

}  // namespace htc
