#include "htc/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <string>

#include "htc/error.hpp"
#include "htc/hierarchy.hpp"
#include "htc/io.hpp"
#include "htc/metrics.hpp"
#include "htc/wasserstein.hpp"

namespace htc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Metric effective_metric(const RunConfig& cfg) {
  if (cfg.metric) return *cfg.metric;
  return cfg.input_kind == InputKind::images ? Metric::wasserstein : Metric::euclidean;
}

GridDistribution to_distribution(const ImageMatrix& img, double step) {
  GridDistribution g;
  g.mass = img.pixels.cwiseMax(0.0);
  g.step = step;
  return g;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCategory::io, "cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());
  return cfg.out_dir;
}

const std::vector<std::string>* labels_or_null(const PreparedInput& in) {
  return in.labels.empty() ? nullptr : &in.labels;
}

fs::path emit(RunSummary& summary, const fs::path& path, std::string_view contents) {
  io::write_file(path, contents);
  summary.artifacts.push_back(path);
  return path;
}

ClusterHierarchy build_hierarchy(const RunConfig& cfg, const DistanceMatrix& dm) {
  const FiltrationGrid grid = cfg.exact ? build_exact_grid(dm) : build_filtration_grid(dm, cfg.max_steps);
  HtcOptions options;
  options.rule = cfg.strict_links ? LinkRule::strict : LinkRule::inclusive;
  return run_htc(dm, grid, options);
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "fermat") return Metric::fermat;
  if (name == "wasserstein") return Metric::wasserstein;
  fail(ErrorCategory::invalid_argument, "unknown metric '" + std::string(name) + "'");
}

void validate_config(const RunConfig& cfg) {
  const Metric metric = effective_metric(cfg);
  switch (cfg.input_kind) {
    case InputKind::points:
      if (cfg.input.empty()) fail(ErrorCategory::invalid_argument, "a points CSV is required");
      if (metric == Metric::wasserstein) {
        fail(ErrorCategory::invalid_argument, "the wasserstein metric needs image inputs");
      }
      break;
    case InputKind::distances:
      if (cfg.input.empty()) fail(ErrorCategory::invalid_argument, "a distance CSV is required");
      if (cfg.metric) fail(ErrorCategory::invalid_argument, "a metric cannot be applied to a distance matrix input");
      if (cfg.normalize_ref) fail(ErrorCategory::invalid_argument, "normalization needs a points input");
      break;
    case InputKind::images:
      if (cfg.images.size() < 2) fail(ErrorCategory::invalid_argument, "at least two images are required");
      if (metric != Metric::wasserstein) fail(ErrorCategory::invalid_argument, "image inputs need the wasserstein metric");
      if (cfg.normalize_ref) fail(ErrorCategory::invalid_argument, "normalization needs a points input");
      break;
  }
  if (!(cfg.alpha >= 1.0)) fail(ErrorCategory::invalid_argument, "alpha must be >= 1");
  if (cfg.p != 1 && cfg.p != 2) fail(ErrorCategory::invalid_argument, "p must be 1 or 2");
  if (!(cfg.tol > 0.0)) fail(ErrorCategory::invalid_argument, "tol must be positive");
  if (!(cfg.pixel_step > 0.0)) fail(ErrorCategory::invalid_argument, "pixel step must be positive");
  if (cfg.max_steps == 0) fail(ErrorCategory::invalid_argument, "max-steps must be positive");
  if (!(cfg.factor > 0.0)) fail(ErrorCategory::invalid_argument, "factor must be positive");
}

PreparedInput prepare_input(const RunConfig& cfg) {
  validate_config(cfg);
  PreparedInput out;
  switch (cfg.input_kind) {
    case InputKind::distances: {
      out.distances = io::load_distance_csv(cfg.input);
      if (out.distances.labels()) out.labels = *out.distances.labels();
      return out;
    }
    case InputKind::images: {
      std::vector<GridDistribution> grids;
      for (const auto& path : cfg.images) {
        grids.push_back(to_distribution(io::load_pgm(path), cfg.pixel_step));
        out.labels.push_back(path.stem().string());
      }
      WassersteinOptions options;
      options.p = cfg.p;
      options.tol = cfg.tol;
      out.distances = wasserstein_matrix(grids, options);
      out.distances.set_labels(out.labels);
      return out;
    }
    case InputKind::points:
      break;
  }

  PointCloud pc = io::load_points_csv(cfg.input);
  if (cfg.normalize_ref) {
    const PointCloud cohort = io::load_points_csv(*cfg.normalize_ref);
    const NormalizationReference ref = reference_from_cohort(cohort.coords, cfg.normalize_ref->string());
    NormalizedData normalized = zscore_normalize(pc.coords, ref, cfg.factor);
    for (std::size_t c : normalized.dropped_columns) {
      out.notes.push_back("dropped column " + std::to_string(c + 1) + ": zero spread in the reference");
    }
    if (normalized.kept_columns.empty()) {
      fail(ErrorCategory::degenerate, "every column has zero spread in the normalization reference");
    }
    pc.coords = std::move(normalized.values);
  }
  if (pc.labels) out.labels = *pc.labels;

  if (effective_metric(cfg) == Metric::fermat) {
    out.distances = fermat_matrix(pc, FermatOptions{cfg.alpha, cfg.fermat_knn});
  } else {
    out.distances = euclidean_matrix(pc);
  }
  out.points = std::move(pc);
  return out;
}

RunSummary run_pipeline(const RunConfig& cfg) {
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);

  const ClusterHierarchy h = build_hierarchy(cfg, in.distances);
  emit(summary, dir / "hierarchy.json", io::hierarchy_json(h, labels_or_null(in)));
  emit(summary, dir / "barcode.csv", io::barcode_csv(barcode(h)));
  emit(summary, dir / "dendrogram.csv", io::dendrogram_csv(export_dendrogram(h)));
  emit(summary, dir / "betti.csv", io::betti_csv(h));
  emit(summary, dir / "outliers.csv", io::outliers_csv(outlier_ranking(h), labels_or_null(in)));
  return summary;
}

RunSummary run_barcode(const RunConfig& cfg) {
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);
  const ClusterHierarchy h = build_hierarchy(cfg, in.distances);
  emit(summary, dir / "barcode.csv", io::barcode_csv(barcode(h)));
  emit(summary, dir / "betti.csv", io::betti_csv(h));
  return summary;
}

RunSummary run_distance(const RunConfig& cfg) {
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);
  io::write_distance_csv(in.distances, dir / "distances.csv");
  summary.artifacts.push_back(dir / "distances.csv");
  return summary;
}

RunSummary run_kmeans(const RunConfig& cfg, std::size_t k, std::size_t max_iter) {
  if (cfg.input_kind != InputKind::points) {
    fail(ErrorCategory::invalid_argument, "k-means needs a points input");
  }
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);

  const KMeansResult r = kmeans(*in.points, k, cfg.seed, max_iter);
  emit(summary, dir / "assignments.csv",
       io::assignments_csv(r.assignments, k, labels_or_null(in)));
  PointCloud centroids;
  centroids.coords = r.centroids;
  io::write_points_csv(centroids, dir / "centroids.csv");
  summary.artifacts.push_back(dir / "centroids.csv");
  json doc = {{"k", k},
              {"seed", r.seed},
              {"objective", r.objective},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"objective_history", r.objective_history}};
  emit(summary, dir / "kmeans.json", doc.dump(1) + "\n");
  return summary;
}

RunSummary run_hc(const RunConfig& cfg, std::optional<Linkage> linkage,
                  std::optional<std::size_t> clusters) {
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);

  json doc;
  json coefficients = json::object();
  if (in.distances.size() >= 3) {
    for (Linkage l : kAllLinkages) {
      try {
        coefficients[std::string(linkage_name(l))] =
            cophenetic_correlation(in.distances, hc_agglomerative(in.distances, l));
      } catch (const Error& e) {
        if (e.category() != ErrorCategory::degenerate) throw;
        coefficients[std::string(linkage_name(l))] = nullptr;
      }
    }
  }
  const Linkage chosen = linkage ? *linkage : select_best_linkage(in.distances).linkage;
  const Dendrogram dend = hc_agglomerative(in.distances, chosen);
  doc["linkage"] = std::string(linkage_name(chosen));
  doc["selected_by"] = linkage ? "user" : "max_cophenetic_correlation";
  doc["cophenetic_correlation"] = std::move(coefficients);
  emit(summary, dir / "dendrogram.csv", io::dendrogram_csv(dend));
  if (clusters) {
    const auto assignment = cut_dendrogram(dend, *clusters);
    emit(summary, dir / "assignments.csv",
         io::assignments_csv(assignment, in.distances.size(), labels_or_null(in)));
    doc["clusters"] = *clusters;
  }
  emit(summary, dir / "hc.json", doc.dump(1) + "\n");
  return summary;
}

RunSummary run_dbscan(const RunConfig& cfg, double eps, std::size_t min_pts) {
  PreparedInput in = prepare_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  RunSummary summary;
  summary.notes = std::move(in.notes);
  const DbscanResult r = dbscan(in.distances, eps, min_pts);
  emit(summary, dir / "assignments.csv",
       io::assignments_csv(r.assignments, DbscanResult::kNoise, labels_or_null(in)));
  std::size_t noise = 0;
  for (std::size_t a : r.assignments) noise += a == DbscanResult::kNoise ? 1 : 0;
  json doc = {{"eps", eps}, {"min_pts", min_pts}, {"clusters", r.cluster_count}, {"noise", noise}};
  emit(summary, dir / "dbscan.json", doc.dump(1) + "\n");
  return summary;
}

RunSummary run_compress(const fs::path& image, std::size_t k, const fs::path& output) {
  const ImageMatrix img = io::load_pgm(image);
  RunSummary summary;
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  io::write_pgm(svd_compress(img, k), output);
  summary.artifacts.push_back(output);
  return summary;
}

RunSummary run_series(const fs::path& image, const SeriesOptions& options, const fs::path& out_dir) {
  const ImageMatrix img = io::load_pgm(image);
  SeriesOptions effective = options;
  const std::size_t rank_limit = std::min(img.rows(), img.cols());
  RunSummary summary;
  const auto restricted = restrict_schedule(options.schedule, rank_limit);
  if (restricted.size() != options.schedule.size()) {
    summary.notes.push_back("schedule restricted to k <= " + std::to_string(rank_limit) + " (" +
                            std::to_string(restricted.size()) + " of " +
                            std::to_string(options.schedule.size()) + " entries kept)");
  }
  effective.schedule = restricted;
  const ImageSeries series = generate_image_series(img, effective);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCategory::io, "cannot create output directory '" + out_dir.string() + "'");
  std::string manifest = "index,file,description\n";
  for (std::size_t s = 0; s < series.images.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "image_%02zu.pgm", s + 1);
    emit(summary, out_dir / name, io::pgm_text(series.images[s]));
    manifest += std::to_string(s + 1) + "," + name + "," + series.names[s] + "\n";
  }
  emit(summary, out_dir / "manifest.csv", manifest);
  return summary;
}

}  // namespace htc
