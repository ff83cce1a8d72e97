#include <Eigen/SVD>
#include <algorithm>
#include <string>

#include "htc/error.hpp"
#include "htc/preprocess.hpp"

namespace htc {

void validate_image(const ImageMatrix& img) {
  if (img.pixels.rows() < 1 || img.pixels.cols() < 1) {
    fail(ErrorCategory::invalid_argument, "image must have at least one row and column");
  }
  if (!img.pixels.allFinite()) fail(ErrorCategory::invalid_argument, "image has non-finite pixels");
}

Eigen::VectorXd singular_values(const ImageMatrix& img) {
  validate_image(img);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(img.pixels);
  return svd.singularValues();
}

ImageMatrix svd_compress(const ImageMatrix& img, std::size_t k) {
  validate_image(img);
  const std::size_t rank_limit = std::min(img.rows(), img.cols());
  if (k < 1 || k > rank_limit) {
    fail(ErrorCategory::invalid_argument,
         "k must lie in [1, " + std::to_string(rank_limit) + "], got " + std::to_string(k));
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(img.pixels, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);
  ImageMatrix out;
  out.max_value = img.max_value;
  out.pixels = svd.matrixU().leftCols(kk) * svd.singularValues().head(kk).asDiagonal() *
               svd.matrixV().leftCols(kk).transpose();
  return out;
}

}  // namespace htc
