#include <doctest.h>

#include <cmath>
#include <set>

#include "htc/baselines.hpp"
#include "htc/error.hpp"
#include "htc/hierarchy.hpp"
#include "htc/metrics.hpp"
#include "testkit.hpp"

using namespace htc;

namespace {

DistanceMatrix line(const std::vector<double>& xs) { return euclidean_matrix(testkit::line_cloud(xs)); }

bool throws_category(const std::function<void()>& f, ErrorCategory c) {
  try {
    f();
  } catch (const Error& e) {
    return e.category() == c;
  }
  return false;
}

void check_ultrametric(const DistanceMatrix& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) CHECK(c(i, j) <= std::max(c(i, k), c(k, j)) + 1e-12);
}

}  // namespace

TEST_CASE("kmeans examples") {
  const auto pairs = testkit::line_cloud({0, 0.1, 10, 10.1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = kmeans(pairs, 2, seed);
    CHECK(r.assignments[0] == r.assignments[1]);
    CHECK(r.assignments[2] == r.assignments[3]);
    CHECK(r.assignments[0] != r.assignments[2]);
    CHECK(r.objective == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(r.converged);
  }
  const auto all = kmeans(pairs, 4, 3);
  CHECK(all.objective == 0.0);
  const auto one = kmeans(pairs, 1, 3);
  CHECK(one.centroids(0, 0) == doctest::Approx(5.05));
  const double total = std::pow(5.05, 2) + std::pow(4.95, 2) + std::pow(4.95, 2) + std::pow(5.05, 2);
  CHECK(one.objective == doctest::Approx(total));
  CHECK(throws_category([&] { kmeans(pairs, 5, 0); }, ErrorCategory::invalid_argument));
  CHECK(throws_category([&] { kmeans(pairs, 0, 0); }, ErrorCategory::invalid_argument));
}

TEST_CASE("property: kmeans monotone, centroid means, deterministic per seed") {
  testkit::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 5, 80);
    const std::size_t k = testkit::uniform_index(rng, 1, std::min<std::size_t>(n, 8));
    const auto pc = testkit::random_cloud(rng, n, 3);
    const std::uint64_t seed = rng();
    const auto r = kmeans(pc, k, seed);
    for (std::size_t i = 1; i < r.objective_history.size(); ++i)
      CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-12);
    const auto again = kmeans(pc, k, seed);
    CHECK(again.assignments == r.assignments);
    CHECK(again.objective == r.objective);
    if (r.converged) {
      for (std::size_t j = 0; j < k; ++j) {
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(3);
        double count = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (r.assignments[i] == j) {
            sum += pc.coords.row(static_cast<Eigen::Index>(i));
            count += 1;
          }
        REQUIRE(count > 0);
        CHECK((sum / count - r.centroids.row(static_cast<Eigen::Index>(j))).norm() <= 1e-12);
      }
    }
    double objective = 0;
    for (std::size_t i = 0; i < n; ++i)
      objective += (pc.coords.row(static_cast<Eigen::Index>(i)) -
                    r.centroids.row(static_cast<Eigen::Index>(r.assignments[i])))
                       .squaredNorm();
    CHECK(objective == doctest::Approx(r.objective).epsilon(1e-12));
  }
}

TEST_CASE("kmeans keeps k clusters on coincident points") {
  const auto pc = testkit::line_cloud({1, 1, 1, 1, 5});
  const auto r = kmeans(pc, 3, 9);
  std::set<std::size_t> used(r.assignments.begin(), r.assignments.end());
  CHECK(used.size() == 3);
}

TEST_CASE("agglomerative examples") {
  for (Linkage l : kAllLinkages) {
    const auto d = hc_agglomerative(DistanceMatrix::from_dense(2, {0, 3, 3, 0}), l);
    REQUIRE(d.nodes().size() == 1);
    CHECK(d.nodes()[0].height == 3);
  }
  const auto dm = line({0, 1, 3});
  const auto complete = hc_agglomerative(dm, Linkage::complete);
  REQUIRE(complete.nodes().size() == 2);
  CHECK(complete.nodes()[0].height == 1);
  CHECK(complete.nodes()[0].children == std::vector<std::size_t>{0, 1});
  CHECK(complete.nodes()[1].height == 3);
  CHECK(hc_agglomerative(dm, Linkage::average).nodes()[1].height == 2.5);
  CHECK(hc_agglomerative(dm, Linkage::weighted).nodes()[1].height == 2.5);
  CHECK(hc_agglomerative(dm, Linkage::single).nodes()[1].height == 2);
  CHECK(parse_linkage("average") == Linkage::average);
  CHECK(throws_category([] { parse_linkage("ward"); }, ErrorCategory::invalid_argument));
}

TEST_CASE("weighted and average linkage differ on unequal clusters") {
  // {0,1} merge first, then {2} joins at 2.5 (average == weighted here); the
  // last item sees clusters of sizes 3 and 1 where the rules diverge.
  const auto dm = line({0, 1, 3, 10});
  const auto avg = hc_agglomerative(dm, Linkage::average);
  const auto wtd = hc_agglomerative(dm, Linkage::weighted);
  CHECK(avg.nodes()[2].height == doctest::Approx((10.0 + 9.0 + 7.0) / 3.0));
  CHECK(wtd.nodes()[2].height == doctest::Approx(((10.0 + 9.0) / 2.0 + 7.0) / 2.0));
}

TEST_CASE("cophenetic correlation") {
  // Ultrametric input: complete linkage reproduces it.
  const auto ultra = DistanceMatrix::from_dense(4, {0, 1, 4, 4, 1, 0, 4, 4, 4, 4, 0, 2, 4, 4, 2, 0});
  CHECK(cophenetic_correlation(ultra, hc_agglomerative(ultra, Linkage::complete)) == doctest::Approx(1.0).epsilon(1e-12));
  const auto best = select_best_linkage(ultra);
  CHECK(best.linkage == Linkage::complete);
  CHECK(best.coefficient == doctest::Approx(1.0).epsilon(1e-12));

  const auto equilateral = DistanceMatrix::from_dense(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
  CHECK(throws_category([&] { cophenetic_correlation(equilateral, hc_agglomerative(equilateral, Linkage::single)); },
                        ErrorCategory::degenerate));
  CHECK(throws_category([&] { select_best_linkage(equilateral); }, ErrorCategory::degenerate));

  const auto dm = line({0, 1, 3});
  const auto avg = hc_agglomerative(dm, Linkage::average);
  const double oracle = testkit::pearson(testkit::upper_triangle(dm), testkit::upper_triangle(avg.cophenetic()));
  CHECK(std::abs(cophenetic_correlation(dm, avg) - oracle) <= 1e-12);
  // Frozen from the oracle: d = (1,3,2), coph = (1,2.5,2.5).
  CHECK(oracle == doctest::Approx(0.8660254037844386).epsilon(1e-12));
}

TEST_CASE("property: cophenetic matrices, correlation oracle, best linkage") {
  testkit::Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 3, 30);
    const auto dm = euclidean_matrix(testkit::random_cloud(rng, n, 2));
    double best = -2;
    for (Linkage l : kAllLinkages) {
      const auto d = hc_agglomerative(dm, l);
      CHECK(d.nodes().size() == n - 1);
      for (std::size_t k = 1; k < d.nodes().size(); ++k) CHECK(d.nodes()[k].height >= d.nodes()[k - 1].height);
      const auto coph = d.cophenetic();
      check_ultrametric(coph);
      const double c = cophenetic_correlation(dm, d);
      CHECK(std::abs(c - testkit::pearson(testkit::upper_triangle(dm), testkit::upper_triangle(coph))) <= 1e-12);
      CHECK(c >= -1.0);
      CHECK(c <= 1.0);
      best = std::max(best, c);
    }
    CHECK(select_best_linkage(dm).coefficient == best);
  }
}

TEST_CASE("property: single linkage heights equal HTC exact levels") {
  testkit::Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 2, 40);
    const auto dm = euclidean_matrix(testkit::random_cloud(rng, n, 3));
    const auto hc = hc_agglomerative(dm, Linkage::single).cophenetic();
    const auto htc = export_dendrogram(run_htc(dm, build_exact_grid(dm))).cophenetic();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(hc(i, j) == htc(i, j));
  }
}

TEST_CASE("cut dendrogram") {
  const auto d = hc_agglomerative(line({0, 1, 10, 11, 30}), Linkage::single);
  CHECK(cut_dendrogram(d, 3) == std::vector<std::size_t>{0, 0, 1, 1, 2});
  CHECK(cut_dendrogram(d, 1) == std::vector<std::size_t>(5, 0));
  CHECK(cut_dendrogram(d, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(throws_category([&] { cut_dendrogram(d, 6); }, ErrorCategory::invalid_argument));
}

TEST_CASE("dbscan examples") {
  testkit::Rng rng(44);
  PointCloud pc = testkit::random_cloud(rng, 13, 2, 2.0);
  pc.coords.row(12) << 100.0, 0.0;
  const auto dm = euclidean_matrix(pc);
  const auto r = dbscan(dm, 5, 10);
  CHECK(r.cluster_count == 1);
  for (std::size_t i = 0; i < 12; ++i) CHECK(r.assignments[i] == 0);
  CHECK(r.assignments[12] == DbscanResult::kNoise);

  const auto loose = dbscan(dm, 200, 13);
  CHECK(loose.cluster_count == 1);

  const auto ones = dbscan(line({0, 1, 1.5, 5}), 1.0, 1);
  CHECK(ones.assignments == std::vector<std::size_t>{0, 1, 1, 2});
  CHECK(throws_category([&] { dbscan(dm, 0, 3); }, ErrorCategory::invalid_argument));
  CHECK(throws_category([&] { dbscan(dm, 1, 0); }, ErrorCategory::invalid_argument));
}

TEST_CASE("property: dbscan matches brute-force counting") {
  testkit::Rng rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 1, 60);
    const auto dm = euclidean_matrix(testkit::random_cloud(rng, n, 2, 20.0));
    const double eps = testkit::uniform(rng, 0.5, 8.0);
    const std::size_t min_pts = testkit::uniform_index(rng, 1, 8);
    const auto r = dbscan(dm, eps, min_pts);
    const auto o = testkit::dbscan_by_counting(dm, eps, min_pts);
    CHECK(r.core == o.core);
    CHECK(r.assignments == o.cluster);
  }
}

TEST_CASE("property: dbscan with min_pts 1 equals strict HTC components") {
  testkit::Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = testkit::uniform_index(rng, 2, 40);
    const auto dm = euclidean_matrix(testkit::random_cloud(rng, n, 2));
    const auto grid = build_filtration_grid(dm);
    const auto h = run_htc(dm, grid, {LinkRule::strict});
    for (std::size_t m = 1; m < h.levels.size(); ++m) {
      const auto r = dbscan(dm, grid.values[m], 1);
      CHECK(r.cluster_count == h.levels[m].cluster_count());
      CHECK(r.assignments == h.levels[m].assignment());
    }
  }
}
