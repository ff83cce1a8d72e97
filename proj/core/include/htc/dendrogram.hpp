#pragma once

#include <cstddef>
#include <vector>

#include "htc/distance_matrix.hpp"

namespace htc {

// Internal node of a merge tree. Node ids 0..leaf_count-1 are leaves; the
// k-th internal node has id leaf_count + k.
struct DendrogramNode {
  double height = 0.0;
  std::vector<std::size_t> children;
  std::size_t size = 0;  // leaves below

  friend bool operator==(const DendrogramNode&, const DendrogramNode&) = default;
};

// Merge tree shared by agglomerative clustering (binary nodes) and HTC
// export (multiway nodes when several clusters fuse at one level). Nodes are
// stored in nondecreasing height order. A tree that never reaches a single
// root is a forest; leaves in different trees have infinite cophenetic
// distance.
class Dendrogram {
 public:
  Dendrogram() = default;
  explicit Dendrogram(std::size_t leaf_count) : leaf_count_(leaf_count) {}

  std::size_t leaf_count() const noexcept { return leaf_count_; }
  const std::vector<DendrogramNode>& nodes() const noexcept { return nodes_; }

  // Appends an internal node and returns its id. Children must be existing
  // roots and height must not be below the last node's height.
  std::size_t add_node(double height, std::vector<std::size_t> children);

  bool is_complete() const noexcept;

  // Matrix of merge heights at which pairs first share a subtree.
  DistanceMatrix cophenetic() const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

 private:
  std::size_t leaf_count_ = 0;
  std::vector<DendrogramNode> nodes_;
  std::vector<bool> consumed_;
};

}  // namespace htc
