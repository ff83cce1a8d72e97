#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "htc/baselines.hpp"
#include "htc/dendrogram.hpp"
#include "htc/distance_matrix.hpp"
#include "htc/hierarchy.hpp"
#include "htc/point_cloud.hpp"
#include "htc/preprocess.hpp"

namespace htc::io {

// Exports use 1-based item indices throughout and the literal "inf" for an
// infinite value.

// Shortest decimal text that parses back to exactly x.
std::string format_number(double x);

// ------------------------------------------------------------------ CSV

// One row per item, numeric feature columns, optional header row and
// optional leading label column.
PointCloud load_points_csv(const std::filesystem::path& path);
PointCloud parse_points_csv(std::string_view text);
void write_points_csv(const PointCloud& pc, const std::filesystem::path& path,
                      const std::vector<std::string>& column_names = {});

// Square numeric CSV (same header/label conventions). Asymmetry above 1e-9
// and negative entries are errors.
DistanceMatrix load_distance_csv(const std::filesystem::path& path);
DistanceMatrix parse_distance_csv(std::string_view text);
void write_distance_csv(const DistanceMatrix& dm, const std::filesystem::path& path);

// representative,birth,death sorted by death descending.
std::string barcode_csv(const Barcode& b);
void export_barcode(const Barcode& b, const std::filesystem::path& path);
Barcode parse_barcode_csv(std::string_view text);

// node,height,size,children; leaves are nodes 1..N.
std::string dendrogram_csv(const Dendrogram& d);
void export_dendrogram(const Dendrogram& d, const std::filesystem::path& path);
Dendrogram parse_dendrogram_csv(std::string_view text);

// r,b0 for every grid value.
std::string betti_csv(const ClusterHierarchy& h);

std::string outliers_csv(const std::vector<OutlierEntry>& ranking,
                         const std::vector<std::string>* labels = nullptr);

// item,label,cluster with NOISE for unassigned items; cluster ids 1-based.
std::string assignments_csv(const std::vector<std::size_t>& assignments, std::size_t noise_value,
                            const std::vector<std::string>* labels = nullptr);

// ------------------------------------------------------------------ PGM

// Reads plain (P2) or raw (P5) graymaps; P3/P6 pixmaps are converted to gray
// by averaging channels.
ImageMatrix load_pgm(const std::filesystem::path& path);
ImageMatrix parse_pnm(std::string_view bytes);
// Plain PGM; pixels are rounded and clamped to [0, max_value].
std::string pgm_text(const ImageMatrix& img);
void write_pgm(const ImageMatrix& img, const std::filesystem::path& path);

// ------------------------------------------------------------------ JSON

std::string hierarchy_json(const ClusterHierarchy& h,
                           const std::vector<std::string>* labels = nullptr);
void export_hierarchy_json(const ClusterHierarchy& h, const std::filesystem::path& path,
                           const std::vector<std::string>* labels = nullptr);
ClusterHierarchy parse_hierarchy_json(std::string_view text);
ClusterHierarchy load_hierarchy_json(const std::filesystem::path& path);

// ------------------------------------------------------------ file helpers

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace htc::io
