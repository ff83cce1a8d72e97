#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace htc {

// n items (rows) in dim features (columns).
struct PointCloud {
  Eigen::MatrixXd coords;
  std::optional<std::vector<std::string>> labels;

  std::size_t size() const noexcept { return static_cast<std::size_t>(coords.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords.cols()); }
};

// Throws unless n >= 1, dim >= 1, all coordinates finite and labels (if any)
// match n.
void validate_point_cloud(const PointCloud& pc);

}  // namespace htc
