// htc: hierarchical topological clustering from the command line.
//
//   htc run --points cloud.csv --metric euclidean --out-dir out/
//   htc baseline dbscan --points cloud.csv --eps 5 --min-pts 10
//   htc distance wasserstein --images a.pgm b.pgm c.pgm --p 2
//   htc series generate --image photo.pgm --line-row 40 --out-dir series/
//
// Failures print one line, "error: <category>: <message>", and exit nonzero.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "htc/error.hpp"
#include "htc/pipeline.hpp"

namespace {

struct InputFlags {
  std::string points;
  std::string distances;
  std::vector<std::string> images;
  std::string metric;
  double alpha = 2.0;
  std::size_t knn = 0;
  int p = 1;
  double tol = 1e-6;
  double pixel_step = 1.0;
  std::size_t max_steps = htc::kDefaultMaxSteps;
  bool exact = false;
  bool strict_links = false;
  std::string normalize_ref;
  double factor = 3.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

void add_input_flags(CLI::App* cmd, InputFlags& f, bool with_metric) {
  auto* points = cmd->add_option("--points", f.points, "Points CSV (one row per item)");
  auto* distances = cmd->add_option("--distances", f.distances, "Precomputed distance matrix CSV");
  auto* images = cmd->add_option("--images", f.images, "PGM images compared with the wasserstein metric");
  points->excludes(distances)->excludes(images);
  distances->excludes(images);
  if (with_metric) {
    cmd->add_option("--metric", f.metric, "euclidean | fermat | wasserstein")
        ->check(CLI::IsMember({"euclidean", "fermat", "wasserstein"}));
  }
  cmd->add_option("--alpha", f.alpha, "Fermat exponent (>= 1)");
  cmd->add_option("--knn", f.knn, "Restrict Fermat paths to k-nearest-neighbour edges");
  cmd->add_option("--p", f.p, "Wasserstein flux norm (1 or 2)")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--tol", f.tol, "Duality gap tolerance for p = 2");
  cmd->add_option("--pixel-step", f.pixel_step, "Grid step between pixel centres");
  cmd->add_option("--max-steps", f.max_steps, "Cap on filtration grid steps");
  cmd->add_flag("--exact", f.exact, "Use every distinct distance as a filtration value");
  cmd->add_flag("--strict-links", f.strict_links, "Link pairs with d < r instead of d <= r");
  cmd->add_option("--normalize-ref", f.normalize_ref, "Reference cohort CSV for z-score normalization");
  cmd->add_option("--factor", f.factor, "Normalization divisor multiple of the standard deviation");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out-dir", f.out_dir, "Output directory");
}

htc::RunConfig make_config(const InputFlags& f, const std::string& metric_override = {}) {
  htc::RunConfig cfg;
  if (!f.distances.empty()) {
    cfg.input_kind = htc::InputKind::distances;
    cfg.input = f.distances;
  } else if (!f.images.empty()) {
    cfg.input_kind = htc::InputKind::images;
    for (const auto& img : f.images) cfg.images.emplace_back(img);
  } else {
    cfg.input_kind = htc::InputKind::points;
    cfg.input = f.points;
  }
  const std::string& metric = metric_override.empty() ? f.metric : metric_override;
  if (!metric.empty()) cfg.metric = htc::parse_metric(metric);
  cfg.alpha = f.alpha;
  if (f.knn > 0) cfg.fermat_knn = f.knn;
  cfg.p = f.p;
  cfg.tol = f.tol;
  cfg.pixel_step = f.pixel_step;
  cfg.max_steps = f.max_steps;
  cfg.exact = f.exact;
  cfg.strict_links = f.strict_links;
  if (!f.normalize_ref.empty()) cfg.normalize_ref = f.normalize_ref;
  cfg.factor = f.factor;
  cfg.seed = f.seed;
  cfg.out_dir = f.out_dir;
  return cfg;
}

void report(const htc::RunSummary& summary) {
  for (const auto& note : summary.notes) std::cerr << "note: " << note << "\n";
  for (const auto& path : summary.artifacts) std::cout << path.string() << "\n";
}

int exit_code(htc::ErrorCategory c) {
  switch (c) {
    case htc::ErrorCategory::invalid_argument: return 2;
    case htc::ErrorCategory::degenerate: return 3;
    case htc::ErrorCategory::io: return 4;
    case htc::ErrorCategory::parse: return 5;
    case htc::ErrorCategory::convergence: return 6;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical topological clustering toolkit", "htc"};
  app.require_subcommand(1);

  InputFlags run_flags;
  auto* run = app.add_subcommand("run", "Build the cluster hierarchy and export all artifacts");
  add_input_flags(run, run_flags, true);

  InputFlags barcode_flags;
  auto* barcode = app.add_subcommand("barcode", "Export the H0 barcode and Betti curve only");
  add_input_flags(barcode, barcode_flags, true);

  auto* baseline = app.add_subcommand("baseline", "Comparison clustering algorithms");
  baseline->require_subcommand(1);
  InputFlags km_flags;
  std::size_t km_k = 2;
  std::size_t km_iter = 300;
  auto* km = baseline->add_subcommand("kmeans", "Lloyd k-means");
  add_input_flags(km, km_flags, true);
  km->add_option("--k", km_k, "Number of clusters")->required();
  km->add_option("--max-iter", km_iter, "Iteration cap");

  InputFlags hc_flags;
  std::string hc_linkage;
  std::size_t hc_clusters = 0;
  auto* hc = baseline->add_subcommand("hc", "Agglomerative hierarchical clustering");
  add_input_flags(hc, hc_flags, true);
  hc->add_option("--linkage", hc_linkage, "complete | average | weighted | single (default: best cophenetic)")
      ->check(CLI::IsMember({"complete", "average", "weighted", "single"}));
  hc->add_option("--clusters", hc_clusters, "Cut the tree into this many clusters");

  InputFlags db_flags;
  double db_eps = 0.0;
  std::size_t db_min_pts = 0;
  auto* db = baseline->add_subcommand("dbscan", "Density-based clustering with noise");
  add_input_flags(db, db_flags, true);
  db->add_option("--eps", db_eps, "Neighbourhood radius (strict)")->required();
  db->add_option("--min-pts", db_min_pts, "Points needed for a core point, self included")->required();

  auto* distance = app.add_subcommand("distance", "Write a pairwise distance matrix");
  distance->require_subcommand(1);
  std::vector<std::pair<CLI::App*, InputFlags>> distance_cmds;
  distance_cmds.reserve(3);
  for (const char* name : {"euclidean", "fermat", "wasserstein"}) {
    auto* cmd = distance->add_subcommand(name, std::string(name) + " distances");
    distance_cmds.emplace_back(cmd, InputFlags{});
    add_input_flags(cmd, distance_cmds.back().second, false);
  }

  auto* compress = app.add_subcommand("compress", "Image compression");
  compress->require_subcommand(1);
  std::string svd_image;
  std::string svd_out;
  std::size_t svd_k = 0;
  auto* svd = compress->add_subcommand("svd", "Truncated SVD rank-k approximation");
  svd->add_option("--image", svd_image, "Input PGM")->required();
  svd->add_option("--k", svd_k, "Singular values kept")->required();
  svd->add_option("--out", svd_out, "Output PGM")->required();

  auto* series = app.add_subcommand("series", "Image series");
  series->require_subcommand(1);
  std::string series_image;
  std::string series_out = ".";
  std::vector<std::size_t> series_schedule;
  long line_row = -1;
  long line_col = -1;
  std::size_t line_thickness = 1;
  double line_intensity = 0.0;
  std::size_t defect_target = 0;
  auto* generate = series->add_subcommand("generate", "Compressed series with optional line defects");
  generate->add_option("--image", series_image, "Input PGM")->required();
  generate->add_option("--out-dir", series_out, "Output directory");
  generate->add_option("--schedule", series_schedule, "k values (default 10,15,...,150)")->delimiter(',');
  auto* row_opt = generate->add_option("--line-row", line_row, "Row of a horizontal line defect (0-based)");
  auto* col_opt = generate->add_option("--line-col", line_col, "Column of a vertical line defect (0-based)");
  row_opt->excludes(col_opt);
  generate->add_option("--line-thickness", line_thickness, "Line thickness in pixels");
  generate->add_option("--line-intensity", line_intensity, "Line pixel value");
  generate->add_option("--defect-target", defect_target,
                       "1-based series index receiving the line copy (default: last compressed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      report(htc::run_pipeline(make_config(run_flags)));
    } else if (barcode->parsed()) {
      report(htc::run_barcode(make_config(barcode_flags)));
    } else if (km->parsed()) {
      report(htc::run_kmeans(make_config(km_flags), km_k, km_iter));
    } else if (hc->parsed()) {
      std::optional<htc::Linkage> linkage;
      if (!hc_linkage.empty()) linkage = htc::parse_linkage(hc_linkage);
      std::optional<std::size_t> clusters;
      if (hc_clusters > 0) clusters = hc_clusters;
      report(htc::run_hc(make_config(hc_flags), linkage, clusters));
    } else if (db->parsed()) {
      report(htc::run_dbscan(make_config(db_flags), db_eps, db_min_pts));
    } else if (distance->parsed()) {
      for (auto& [cmd, flags] : distance_cmds) {
        if (cmd->parsed()) report(htc::run_distance(make_config(flags, cmd->get_name())));
      }
    } else if (svd->parsed()) {
      report(htc::run_compress(svd_image, svd_k, svd_out));
    } else if (generate->parsed()) {
      htc::SeriesOptions options;
      if (!series_schedule.empty()) options.schedule = series_schedule;
      if (line_row >= 0 || line_col >= 0) {
        htc::LineDefect defect;
        defect.orientation = line_row >= 0 ? htc::LineDefect::Orientation::row
                                           : htc::LineDefect::Orientation::column;
        defect.index = static_cast<std::size_t>(line_row >= 0 ? line_row : line_col);
        defect.thickness = line_thickness;
        defect.intensity = line_intensity;
        options.defect = defect;
        if (defect_target > 0) options.defect_target = defect_target - 1;
      }
      report(htc::run_series(series_image, options, series_out));
    }
  } catch (const htc::Error& e) {
    std::cerr << "error: " << htc::category_name(e.category()) << ": " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return exit_code(htc::ErrorCategory::io);
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
