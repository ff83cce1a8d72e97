#include <cmath>
#include <string>

#include "htc/error.hpp"
#include "htc/preprocess.hpp"

namespace htc {

NormalizationReference reference_from_cohort(const Eigen::MatrixXd& cohort, std::string source) {
  if (cohort.rows() < 2 || cohort.cols() < 1) {
    fail(ErrorCategory::invalid_argument, "reference cohort needs at least two rows");
  }
  if (!cohort.allFinite()) fail(ErrorCategory::invalid_argument, "reference cohort has non-finite values");
  NormalizationReference ref;
  ref.source = std::move(source);
  ref.mean = cohort.colwise().mean().transpose();
  ref.stddev.resize(cohort.cols());
  const double denom = static_cast<double>(cohort.rows() - 1);
  for (Eigen::Index m = 0; m < cohort.cols(); ++m) {
    const double ss = (cohort.col(m).array() - ref.mean(m)).square().sum();
    ref.stddev(m) = std::sqrt(ss / denom);
  }
  return ref;
}

NormalizedData zscore_normalize(const Eigen::MatrixXd& data, const NormalizationReference& ref,
                                double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    fail(ErrorCategory::invalid_argument, "normalization factor must be positive");
  }
  if (ref.mean.size() != ref.stddev.size() || data.cols() != ref.mean.size()) {
    fail(ErrorCategory::invalid_argument,
         "data has " + std::to_string(data.cols()) + " columns but the reference has " +
             std::to_string(ref.mean.size()));
  }
  NormalizedData out;
  for (Eigen::Index m = 0; m < data.cols(); ++m) {
    if (ref.stddev(m) > 0.0 && std::isfinite(ref.stddev(m))) {
      out.kept_columns.push_back(static_cast<std::size_t>(m));
    } else {
      out.dropped_columns.push_back(static_cast<std::size_t>(m));
    }
  }
  out.values.resize(data.rows(), static_cast<Eigen::Index>(out.kept_columns.size()));
  for (std::size_t c = 0; c < out.kept_columns.size(); ++c) {
    const auto m = static_cast<Eigen::Index>(out.kept_columns[c]);
    const double scale = factor * ref.stddev(m);
    out.values.col(static_cast<Eigen::Index>(c)) = (data.col(m).array() - ref.mean(m)) / scale;
  }
  return out;
}

}  // namespace htc
