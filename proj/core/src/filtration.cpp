#include "htc/filtration.hpp"

#include <algorithm>
#include <cmath>

#include "htc/error.hpp"

namespace htc {

namespace {

void require_cloud(const DistanceMatrix& dm) {
  if (dm.size() < 2) {
    fail(ErrorCategory::invalid_argument, "filtration needs at least two items");
  }
}

}  // namespace

FiltrationGrid build_filtration_grid(const DistanceMatrix& dm, std::size_t max_steps) {
  require_cloud(dm);
  if (max_steps == 0) fail(ErrorCategory::invalid_argument, "max_steps must be positive");
  const auto r_min = dm.min_positive_distance();
  if (!r_min) fail(ErrorCategory::degenerate, "degenerate cloud: all distances are zero");

  FiltrationGrid grid;
  grid.r_max = dm.max_distance();
  grid.r_min = *r_min;
  const double ratio = std::floor(grid.r_max / grid.r_min);
  grid.steps = ratio >= static_cast<double>(max_steps)
                   ? max_steps
                   : std::max<std::size_t>(1, static_cast<std::size_t>(ratio));
  grid.step = grid.r_max / static_cast<double>(grid.steps);
  grid.values.resize(grid.steps + 1);
  for (std::size_t m = 0; m < grid.steps; ++m) {
    grid.values[m] = static_cast<double>(m) * grid.step;
  }
  grid.values[grid.steps] = grid.r_max;
  return grid;
}

FiltrationGrid build_exact_grid(const DistanceMatrix& dm) {
  require_cloud(dm);
  const std::size_t n = dm.size();
  std::vector<double> values;
  values.reserve(n * (n - 1) / 2 + 1);
  values.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dm(i, j) > 0.0) values.push_back(dm(i, j));
    }
  }
  if (values.size() == 1) fail(ErrorCategory::degenerate, "degenerate cloud: all distances are zero");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  FiltrationGrid grid;
  grid.exact = true;
  grid.r_max = values.back();
  grid.r_min = values[1];
  grid.steps = values.size() - 1;
  grid.step = grid.r_max / static_cast<double>(grid.steps);
  grid.values = std::move(values);
  return grid;
}

LinkMatrix point_link_matrix(const DistanceMatrix& dm, double r, LinkRule rule) {
  if (r < 0.0) fail(ErrorCategory::invalid_argument, "filtration value must be nonnegative");
  const std::size_t n = dm.size();
  LinkMatrix links(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      links.set(i, j, is_linked(dm(i, j), r, rule));
    }
  }
  return links;
}

}  // namespace htc
