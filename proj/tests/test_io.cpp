#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <random>
#include <unistd.h>

#include "htc/error.hpp"
#include "htc/hierarchy.hpp"
#include "htc/io.hpp"
#include "htc/metrics.hpp"
#include "htc/pipeline.hpp"
#include "testkit.hpp"

using namespace htc;
namespace fs = std::filesystem;

namespace {

bool throws_category(const std::function<void()>& f, ErrorCategory c) {
  try {
    f();
  } catch (const Error& e) {
    return e.category() == c;
  }
  return false;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("htc_io_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ClusterHierarchy pair_hierarchy() {
  const auto dm = DistanceMatrix::from_dense(2, {0, 4, 4, 0});
  return run_htc(dm, build_filtration_grid(dm));
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(io::format_number(4.0) == "4");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
  testkit::Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const double x = testkit::normal(rng) * std::pow(10.0, testkit::uniform(rng, -20, 20));
    CHECK(std::stod(io::format_number(x)) == x);
  }
}

TEST_CASE("points csv") {
  const auto pc = io::parse_points_csv("0,0\n3,4\n");
  CHECK(pc.size() == 2);
  CHECK(pc.dim() == 2);
  CHECK(pc.coords(1, 1) == 4);
  CHECK_FALSE(pc.labels);

  const auto labelled = io::parse_points_csv("name,x,y\r\nalpha,1,2\r\n\"be,ta\",3,4\r\n");
  REQUIRE(labelled.labels);
  CHECK(*labelled.labels == std::vector<std::string>{"alpha", "be,ta"});
  CHECK(labelled.coords(1, 0) == 3);

  const auto header_only = io::parse_points_csv("x,y\n1,2\n");
  CHECK(header_only.size() == 1);

  CHECK(throws_category([] { io::parse_points_csv(""); }, ErrorCategory::parse));
  CHECK(throws_category([] { io::parse_points_csv("1,2\n3\n"); }, ErrorCategory::parse));
  CHECK(throws_category([] { io::parse_points_csv("1,2\n3,abc\n"); }, ErrorCategory::parse));
  try {
    io::parse_points_csv("1,2\n3,abc\n");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("column 2") != std::string::npos);
  }
  CHECK(throws_category([] { io::load_points_csv("/nonexistent/file.csv"); }, ErrorCategory::io));
}

TEST_CASE("points csv round trip") {
  testkit::Rng rng(52);
  auto pc = testkit::random_cloud(rng, 7, 3, 100.0);
  pc.labels = std::vector<std::string>{"a", "b", "c,d", "e\"f", "g", "h", "i"};
  const auto dir = scratch("points");
  io::write_points_csv(pc, dir / "p.csv");
  const auto back = io::load_points_csv(dir / "p.csv");
  CHECK(back.coords == pc.coords);
  CHECK(back.labels == pc.labels);
}

TEST_CASE("distance csv") {
  CHECK(io::parse_distance_csv("0,4\n4,0\n")(0, 1) == 4);
  CHECK(throws_category([] { io::parse_distance_csv("0,1\n2,0\n"); }, ErrorCategory::invalid_argument));
  CHECK(throws_category([] { io::parse_distance_csv("0,-1\n-1,0\n"); }, ErrorCategory::invalid_argument));
  CHECK(throws_category([] { io::parse_distance_csv("0,1,2\n1,0,3\n"); }, ErrorCategory::parse));

  testkit::Rng rng(53);
  auto dm = euclidean_matrix(testkit::random_cloud(rng, 6, 2));
  dm.set_labels({"u", "v", "w", "x", "y", "z"});
  const auto dir = scratch("dist");
  io::write_distance_csv(dm, dir / "d.csv");
  CHECK(io::load_distance_csv(dir / "d.csv") == dm);
}

TEST_CASE("barcode csv") {
  const auto b = barcode(pair_hierarchy());
  CHECK(io::barcode_csv(b) == "representative,birth,death\n1,0,inf\n2,0,4\n");
  const auto back = io::parse_barcode_csv(io::barcode_csv(b));
  REQUIRE(back.intervals.size() == 2);
  CHECK(back.intervals[0] == b.intervals[0]);
  CHECK(back.intervals[1] == b.intervals[1]);

  testkit::Rng rng(54);
  const auto dm = euclidean_matrix(testkit::random_cloud(rng, 30, 2));
  const auto big = barcode(run_htc(dm, build_filtration_grid(dm)));
  const std::string text = io::barcode_csv(big);
  std::size_t infs = 0, pos = 0;
  while ((pos = text.find("inf", pos)) != std::string::npos) {
    ++infs;
    ++pos;
  }
  CHECK(infs == 1);
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);
  const auto rt = io::parse_barcode_csv(text);
  for (std::size_t i = 0; i < 30; ++i) CHECK(rt.intervals[i] == big.intervals[i]);
}

TEST_CASE("dendrogram csv") {
  testkit::Rng rng(55);
  const auto dm = euclidean_matrix(testkit::random_cloud(rng, 12, 2));
  const auto d = export_dendrogram(run_htc(dm, build_filtration_grid(dm)));
  CHECK(io::parse_dendrogram_csv(io::dendrogram_csv(d)) == d);
  CHECK(io::dendrogram_csv(export_dendrogram(pair_hierarchy())) == "node,height,size,children\n3,4,2,1 2\n");
}

TEST_CASE("hierarchy json") {
  const auto h = pair_hierarchy();
  const auto text = io::hierarchy_json(h);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["levels"].size() == 2);
  CHECK(j["merges"].size() == 1);
  CHECK(j["grid"]["M"] == 1);
  CHECK(j["grid"]["h"] == 4.0);
  CHECK(j["levels"][1]["clusters"][0] == nlohmann::json::array({1, 2}));

  testkit::Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 2, 40);
    const auto dm = euclidean_matrix(testkit::random_cloud(rng, n, 2));
    const auto hh = run_htc(dm, trial % 2 ? build_exact_grid(dm) : build_filtration_grid(dm));
    const auto once = io::parse_hierarchy_json(io::hierarchy_json(hh));
    CHECK(once.levels == hh.levels);
    CHECK(once.merges == hh.merges);
    CHECK(once.grid == hh.grid);
    CHECK(once.item_count == hh.item_count);
    CHECK(io::hierarchy_json(once) == io::hierarchy_json(hh));
    for (std::size_t m = 1; m < once.levels.size(); ++m)
      if (once.levels[m].clusters() == once.levels[m - 1].clusters())
        CHECK(once.levels[m].shares_clusters_with(once.levels[m - 1]));
  }
  CHECK(throws_category([] { io::parse_hierarchy_json("{"); }, ErrorCategory::parse));
  CHECK(throws_category([] { io::parse_hierarchy_json("{\"levels\": 3}"); }, ErrorCategory::parse));
}

TEST_CASE("hierarchy json rejects invalid partitions on write") {
  auto h = pair_hierarchy();
  h.levels[1] = Partition(4.0, std::vector<Cluster>{{0}});
  CHECK(throws_category([&] { io::hierarchy_json(h); }, ErrorCategory::invalid_argument));
}

TEST_CASE("assignments and outliers csv") {
  const std::vector<std::string> labels{"p", "q", "r"};
  CHECK(io::assignments_csv({0, SIZE_MAX, 1}, SIZE_MAX, &labels) ==
        "item,label,cluster\n1,p,1\n2,q,NOISE\n3,r,2\n");
  const auto dm = DistanceMatrix::from_dense(3, {0, 1, 3, 1, 0, 2, 3, 2, 0});
  const auto h = run_htc(dm, build_filtration_grid(dm));
  CHECK(io::outliers_csv(outlier_ranking(h)) ==
        "rank,merge_level,size,representative,members\n1,2,1,3,3\n2,1,1,1,1\n3,1,1,2,2\n");
  CHECK(io::betti_csv(h) == "r,b0\n0,3\n1,2\n2,1\n3,1\n");
}

TEST_CASE("pnm images") {
  const auto img = io::parse_pnm("P2\n# comment\n3 2\n255\n0 10 20\n30 40 255\n");
  CHECK(img.rows() == 2);
  CHECK(img.cols() == 3);
  CHECK(img.pixels(1, 1) == 40);
  CHECK(io::parse_pnm(io::pgm_text(img)).pixels == img.pixels);

  std::string raw = "P5 2 1 255\n";
  raw.push_back(static_cast<char>(7));
  raw.push_back(static_cast<char>(200));
  CHECK(io::parse_pnm(raw).pixels(0, 1) == 200);

  std::string colour = "P6 1 1 255\n";
  colour += std::string{static_cast<char>(30), static_cast<char>(60), static_cast<char>(90)};
  CHECK(io::parse_pnm(colour).pixels(0, 0) == 60);
  CHECK(io::parse_pnm("P3 1 1 255\n0 3 6\n").pixels(0, 0) == 3);

  CHECK(throws_category([] { io::parse_pnm("P7 1 1 255\n0"); }, ErrorCategory::parse));
  CHECK(throws_category([] { io::parse_pnm("P2 2 2 255\n0 1 2\n"); }, ErrorCategory::parse));
  CHECK(throws_category([] { io::parse_pnm("P2 1 1 255\n300\n"); }, ErrorCategory::parse));
}

TEST_CASE("pipeline artifacts") {
  const auto dir = scratch("pipe");
  io::write_file(dir / "demo.csv", "x,y\n0,0\n1,0\n3,0\n");
  RunConfig cfg;
  cfg.input = dir / "demo.csv";
  cfg.metric = Metric::euclidean;
  cfg.out_dir = dir / "out";
  const auto summary = run_pipeline(cfg);
  for (const char* f : {"hierarchy.json", "barcode.csv", "dendrogram.csv", "betti.csv", "outliers.csv"})
    CHECK(fs::exists(cfg.out_dir / f));
  CHECK(summary.artifacts.size() == 5);
  CHECK(io::read_file(cfg.out_dir / "barcode.csv") == "representative,birth,death\n1,0,inf\n3,0,2\n2,0,1\n");

  RunConfig bad = cfg;
  bad.metric = Metric::wasserstein;
  CHECK(throws_category([&] { validate_config(bad); }, ErrorCategory::invalid_argument));
  RunConfig alpha = cfg;
  alpha.alpha = 0.5;
  alpha.metric = Metric::fermat;
  CHECK(throws_category([&] { validate_config(alpha); }, ErrorCategory::invalid_argument));
}

TEST_CASE("pipeline normalization reference") {
  const auto dir = scratch("norm");
  io::write_file(dir / "ref.csv", "a,b,c\n1,5,2\n3,5,4\n5,5,9\n");
  io::write_file(dir / "data.csv", "a,b,c\n1,0,2\n7,1,4\n4,2,0\n");
  RunConfig cfg;
  cfg.input = dir / "data.csv";
  cfg.normalize_ref = dir / "ref.csv";
  cfg.out_dir = dir / "out";
  const auto prepared = prepare_input(cfg);
  REQUIRE(prepared.points);
  CHECK(prepared.points->dim() == 2);
  CHECK(prepared.points->coords(1, 0) == doctest::Approx((7.0 - 3.0) / (3.0 * 2.0)));
  CHECK_FALSE(prepared.notes.empty());
}
