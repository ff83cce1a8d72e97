#include "htc/distance_matrix.hpp"

#include <cmath>
#include <string>

#include "htc/error.hpp"

namespace htc {

namespace {

std::string cell(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

DistanceMatrix DistanceMatrix::from_dense(std::size_t n, std::vector<double> values,
                                          double symmetry_tol) {
  if (values.size() != n * n) {
    fail(ErrorCategory::invalid_argument,
         "distance matrix needs " + std::to_string(n * n) + " entries, got " +
             std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i * n + j];
      if (!std::isfinite(v)) {
        fail(ErrorCategory::invalid_argument, "non-finite distance at " + cell(i, j));
      }
      if (v < 0.0) {
        fail(ErrorCategory::invalid_argument, "negative distance at " + cell(i, j));
      }
    }
    if (values[i * n + i] > symmetry_tol) {
      fail(ErrorCategory::invalid_argument, "nonzero diagonal at " + cell(i, i));
    }
  }

  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = values[i * n + j];
      const double b = values[j * n + i];
      if (std::abs(a - b) > symmetry_tol) {
        fail(ErrorCategory::invalid_argument, "asymmetric distances at " + cell(i, j));
      }
      dm.set(i, j, a == b ? a : 0.5 * (a + b));
    }
  }
  return dm;
}

void DistanceMatrix::set_labels(std::vector<std::string> labels) {
  if (labels.size() != n_) {
    fail(ErrorCategory::invalid_argument, "label count does not match item count");
  }
  labels_ = std::move(labels);
}

double DistanceMatrix::max_distance() const noexcept {
  double best = 0.0;
  for (double v : data_) best = v > best ? v : best;
  return best;
}

std::optional<double> DistanceMatrix::min_positive_distance() const noexcept {
  std::optional<double> best;
  for (double v : data_) {
    if (v > 0.0 && (!best || v < *best)) best = v;
  }
  return best;
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    fail(ErrorCategory::invalid_argument, "scale factor must be positive and finite");
  }
  DistanceMatrix out = *this;
  for (double& v : out.data_) v *= factor;
  return out;
}

DistanceMatrix DistanceMatrix::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != n_) {
    fail(ErrorCategory::invalid_argument, "permutation size does not match item count");
  }
  DistanceMatrix out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      out.data_[a * n_ + b] = data_[order[a] * n_ + order[b]];
    }
  }
  if (labels_) {
    std::vector<std::string> relabeled(n_);
    for (std::size_t a = 0; a < n_; ++a) relabeled[a] = (*labels_)[order[a]];
    out.labels_ = std::move(relabeled);
  }
  return out;
}

}  // namespace htc
