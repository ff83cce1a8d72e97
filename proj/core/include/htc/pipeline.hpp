#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "htc/baselines.hpp"
#include "htc/distance_matrix.hpp"
#include "htc/filtration.hpp"
#include "htc/point_cloud.hpp"
#include "htc/preprocess.hpp"

namespace htc {

enum class InputKind { points, distances, images };
enum class Metric { euclidean, fermat, wasserstein };

Metric parse_metric(std::string_view name);

struct RunConfig {
  InputKind input_kind = InputKind::points;
  std::filesystem::path input;                // points or distance CSV
  std::vector<std::filesystem::path> images;  // raster inputs

  std::optional<Metric> metric;  // defaults by input kind
  double alpha = 2.0;
  std::optional<std::size_t> fermat_knn;
  int p = 1;
  double tol = 1e-6;
  double pixel_step = 1.0;

  std::size_t max_steps = kDefaultMaxSteps;
  bool exact = false;
  bool strict_links = false;

  std::optional<std::filesystem::path> normalize_ref;
  double factor = 3.0;

  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
};

// Throws invalid_argument when inputs and metric options do not fit together.
void validate_config(const RunConfig& cfg);

struct PreparedInput {
  std::optional<PointCloud> points;  // after normalization, if any
  DistanceMatrix distances;
  std::vector<std::string> labels;   // empty when the input has none
  std::vector<std::string> notes;    // human-readable remarks (dropped columns, ...)
};

// Ingest, optional normalization, then the chosen metric.
PreparedInput prepare_input(const RunConfig& cfg);

struct RunSummary {
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> notes;
};

// HTC: hierarchy.json, barcode.csv, dendrogram.csv, betti.csv, outliers.csv.
RunSummary run_pipeline(const RunConfig& cfg);

// barcode.csv and betti.csv only.
RunSummary run_barcode(const RunConfig& cfg);

// distances.csv
RunSummary run_distance(const RunConfig& cfg);

RunSummary run_kmeans(const RunConfig& cfg, std::size_t k, std::size_t max_iter);
RunSummary run_hc(const RunConfig& cfg, std::optional<Linkage> linkage,
                  std::optional<std::size_t> clusters);
RunSummary run_dbscan(const RunConfig& cfg, double eps, std::size_t min_pts);

RunSummary run_compress(const std::filesystem::path& image, std::size_t k,
                        const std::filesystem::path& output);
RunSummary run_series(const std::filesystem::path& image, const SeriesOptions& options,
                      const std::filesystem::path& out_dir);

}  // namespace htc
