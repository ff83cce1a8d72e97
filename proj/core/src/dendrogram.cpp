#include "htc/dendrogram.hpp"

#include <limits>
#include <string>

#include "htc/error.hpp"

namespace htc {

std::size_t Dendrogram::add_node(double height, std::vector<std::size_t> children) {
  if (children.size() < 2) fail(ErrorCategory::invalid_argument, "dendrogram node needs two children");
  if (!nodes_.empty() && height < nodes_.back().height) {
    fail(ErrorCategory::invalid_argument, "dendrogram heights must be nondecreasing");
  }
  const std::size_t id = leaf_count_ + nodes_.size();
  consumed_.resize(id + 1, false);
  std::size_t size = 0;
  for (std::size_t c : children) {
    if (c >= id || consumed_[c]) {
      fail(ErrorCategory::invalid_argument, "dendrogram child " + std::to_string(c) + " is not a root");
    }
    consumed_[c] = true;
    size += c < leaf_count_ ? 1 : nodes_[c - leaf_count_].size;
  }
  nodes_.push_back({height, std::move(children), size});
  return id;
}

bool Dendrogram::is_complete() const noexcept {
  if (leaf_count_ <= 1) return true;
  return !nodes_.empty() && nodes_.back().size == leaf_count_;
}

DistanceMatrix Dendrogram::cophenetic() const {
  const std::size_t n = leaf_count_;
  std::vector<double> dense(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) dense[i * n + i] = 0.0;

  std::vector<std::vector<std::size_t>> leaves(n + nodes_.size());
  for (std::size_t i = 0; i < n; ++i) leaves[i] = {i};
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto& node = nodes_[k];
    auto& merged = leaves[n + k];
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      for (std::size_t b = a + 1; b < node.children.size(); ++b) {
        for (std::size_t i : leaves[node.children[a]]) {
          for (std::size_t j : leaves[node.children[b]]) {
            dense[i * n + j] = node.height;
            dense[j * n + i] = node.height;
          }
        }
      }
    }
    for (std::size_t c : node.children) {
      merged.insert(merged.end(), leaves[c].begin(), leaves[c].end());
      leaves[c].clear();
      leaves[c].shrink_to_fit();
    }
  }

  DistanceMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, dense[i * n + j]);
  }
  return out;
}

}  // namespace htc
