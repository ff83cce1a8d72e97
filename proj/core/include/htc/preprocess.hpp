#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace htc {

// Per-feature location and scale taken from a reference cohort.
struct NormalizationReference {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
  std::string source;
};

// Column means and sample standard deviations (n - 1 denominator) of a
// cohort with at least two rows.
NormalizationReference reference_from_cohort(const Eigen::MatrixXd& cohort,
                                             std::string source = "cohort");

struct NormalizedData {
  Eigen::MatrixXd values;
  std::vector<std::size_t> kept_columns;     // input column per output column
  std::vector<std::size_t> dropped_columns;  // zero-spread columns
};

// (x - mean) / (factor * stddev) per column. Columns whose reference spread
// is zero are dropped and reported.
NormalizedData zscore_normalize(const Eigen::MatrixXd& data, const NormalizationReference& ref,
                                double factor = 3.0);

struct ImageMatrix {
  Eigen::MatrixXd pixels;
  int max_value = 255;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(pixels.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(pixels.cols()); }
};

void validate_image(const ImageMatrix& img);

// Best rank-k approximation U_k S_k V_k^T; 1 <= k <= min(rows, cols).
ImageMatrix svd_compress(const ImageMatrix& img, std::size_t k);

// Singular values in decreasing order.
Eigen::VectorXd singular_values(const ImageMatrix& img);

struct LineDefect {
  enum class Orientation { row, column };
  Orientation orientation = Orientation::row;
  std::size_t index = 0;      // first row/column of the band, 0-based
  std::size_t thickness = 1;
  double intensity = 0.0;
};

// Overwrites the band with the defect intensity; throws if it leaves the image.
ImageMatrix inject_line(const ImageMatrix& img, const LineDefect& defect);

// k = 10, 15, ..., 150.
std::vector<std::size_t> default_compression_schedule();

// Drops schedule entries above max_rank.
std::vector<std::size_t> restrict_schedule(const std::vector<std::size_t>& schedule,
                                           std::size_t max_rank);

struct ImageSeries {
  std::vector<ImageMatrix> images;
  std::vector<std::string> names;
};

struct SeriesOptions {
  std::vector<std::size_t> schedule = default_compression_schedule();
  std::optional<LineDefect> defect;
  // 0-based position in the series of the compressed image that gets a copy
  // with the defect; defaults to the last compressed image.
  std::optional<std::size_t> defect_target;
};

// Original, one compressed image per schedule entry, then (with a defect)
// the defect target with the line and the original with the line.
ImageSeries generate_image_series(const ImageMatrix& img, const SeriesOptions& options = {});

}  // namespace htc
