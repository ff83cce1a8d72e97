#include <Eigen/SVD>
#include <algorithm>
#include <string>

#include "htc/error.hpp"
#include "htc/parallel.hpp"
#include "htc/preprocess.hpp"

namespace htc {

ImageMatrix inject_line(const ImageMatrix& img, const LineDefect& defect) {
  validate_image(img);
  const bool rows = defect.orientation == LineDefect::Orientation::row;
  const std::size_t extent = rows ? img.rows() : img.cols();
  if (defect.thickness == 0 || defect.index >= extent || defect.thickness > extent - defect.index) {
    fail(ErrorCategory::invalid_argument, "line defect does not fit inside the image");
  }
  ImageMatrix out = img;
  const auto first = static_cast<Eigen::Index>(defect.index);
  const auto count = static_cast<Eigen::Index>(defect.thickness);
  if (rows) {
    out.pixels.middleRows(first, count).setConstant(defect.intensity);
  } else {
    out.pixels.middleCols(first, count).setConstant(defect.intensity);
  }
  return out;
}

std::vector<std::size_t> default_compression_schedule() {
  std::vector<std::size_t> ks;
  for (std::size_t q = 0; q <= 28; ++q) ks.push_back(10 + 5 * q);
  return ks;
}

std::vector<std::size_t> restrict_schedule(const std::vector<std::size_t>& schedule,
                                           std::size_t max_rank) {
  std::vector<std::size_t> out;
  std::copy_if(schedule.begin(), schedule.end(), std::back_inserter(out),
               [&](std::size_t k) { return k >= 1 && k <= max_rank; });
  return out;
}

ImageSeries generate_image_series(const ImageMatrix& img, const SeriesOptions& options) {
  validate_image(img);
  const std::size_t rank_limit = std::min(img.rows(), img.cols());
  for (std::size_t k : options.schedule) {
    if (k < 1 || k > rank_limit) {
      fail(ErrorCategory::invalid_argument,
           "schedule entry k=" + std::to_string(k) + " outside [1, " + std::to_string(rank_limit) + "]");
    }
  }

  ImageSeries series;
  series.images.push_back(img);
  series.names.push_back("original");

  // One decomposition serves every truncation.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(img.pixels, Eigen::ComputeThinU | Eigen::ComputeThinV);
  std::vector<ImageMatrix> compressed(options.schedule.size());
  parallel_for(options.schedule.size(), [&](std::size_t s) {
    const auto kk = static_cast<Eigen::Index>(options.schedule[s]);
    compressed[s].max_value = img.max_value;
    compressed[s].pixels = svd.matrixU().leftCols(kk) * svd.singularValues().head(kk).asDiagonal() *
                           svd.matrixV().leftCols(kk).transpose();
  });
  for (std::size_t s = 0; s < compressed.size(); ++s) {
    series.images.push_back(std::move(compressed[s]));
    series.names.push_back("k=" + std::to_string(options.schedule[s]));
  }

  if (options.defect) {
    const std::size_t target = options.defect_target.value_or(series.images.size() - 1);
    if (target >= series.images.size()) {
      fail(ErrorCategory::invalid_argument, "defect target is outside the series");
    }
    ImageMatrix with_line = inject_line(series.images[target], *options.defect);
    series.names.push_back(series.names[target] + "+line");
    series.images.push_back(std::move(with_line));
    series.images.push_back(inject_line(img, *options.defect));
    series.names.push_back("original+line");
  }
  return series;
}

}  // namespace htc
