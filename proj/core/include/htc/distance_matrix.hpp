#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace htc {

// Symmetric n x n matrix of nonnegative dissimilarities with zero diagonal.
// The triangle inequality is not required.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  // All-zero n x n matrix.
  explicit DistanceMatrix(std::size_t n);

  // Validates a dense row-major buffer. Entries asymmetric by more than
  // symmetry_tol are rejected; smaller asymmetries are averaged away.
  static DistanceMatrix from_dense(std::size_t n, std::vector<double> values,
                                   double symmetry_tol = 1e-9);

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * n_ + j] = value;
    data_[j * n_ + i] = value;
  }

  const std::vector<double>& dense() const noexcept { return data_; }

  const std::optional<std::vector<std::string>>& labels() const noexcept {
    return labels_;
  }
  void set_labels(std::vector<std::string> labels);

  // Largest entry, and smallest strictly positive entry (nullopt if none).
  double max_distance() const noexcept;
  std::optional<double> min_positive_distance() const noexcept;

  // Returns a copy with every entry multiplied by factor > 0.
  DistanceMatrix scaled(double factor) const;

  // Returns the matrix of items reordered so that new item k is old item
  // order[k].
  DistanceMatrix permuted(const std::vector<std::size_t>& order) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
  std::optional<std::vector<std::string>> labels_;
};

}  // namespace htc
