#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "htc/distance_matrix.hpp"

namespace htc {

// Which pairs count as linked at scale r. Inclusive (d <= r) is the default;
// strict (d < r) is kept for comparison with strict-neighbourhood methods.
enum class LinkRule { inclusive, strict };

inline bool is_linked(double d, double r, LinkRule rule) noexcept {
  return rule == LinkRule::inclusive ? d <= r : d < r;
}

inline constexpr std::size_t kDefaultMaxSteps = 10000;

// Increasing filtration scales. The uniform grid has values[m] = m * step with
// values[steps] == r_max. The exact grid uses every distinct pairwise
// distance instead, so step is only nominal there.
struct FiltrationGrid {
  double r_max = 0.0;
  double r_min = 0.0;
  std::size_t steps = 0;
  double step = 0.0;
  std::vector<double> values;
  bool exact = false;

  friend bool operator==(const FiltrationGrid&, const FiltrationGrid&) = default;
};

FiltrationGrid build_filtration_grid(const DistanceMatrix& dm,
                                     std::size_t max_steps = kDefaultMaxSteps);

FiltrationGrid build_exact_grid(const DistanceMatrix& dm);

// Dense square boolean matrix.
class LinkMatrix {
 public:
  LinkMatrix() = default;
  explicit LinkMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept {
    return bits_[i * n_ + j] != 0;
  }
  void set(std::size_t i, std::size_t j, bool v) noexcept {
    bits_[i * n_ + j] = v ? 1 : 0;
    bits_[j * n_ + i] = v ? 1 : 0;
  }

  friend bool operator==(const LinkMatrix&, const LinkMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

// P(i,j) = is_linked(d(i,j), r) for i != j; the diagonal is false.
LinkMatrix point_link_matrix(const DistanceMatrix& dm, double r,
                             LinkRule rule = LinkRule::inclusive);

}  // namespace htc
