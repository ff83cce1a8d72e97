#include <doctest.h>

#include <cmath>

#include "htc/error.hpp"
#include "htc/preprocess.hpp"
#include "testkit.hpp"

using namespace htc;

namespace {

Eigen::MatrixXd random_matrix(testkit::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = testkit::uniform(rng);
  return m;
}

bool throws_category(const std::function<void()>& f, ErrorCategory c) {
  try {
    f();
  } catch (const Error& e) {
    return e.category() == c;
  }
  return false;
}

}  // namespace

TEST_CASE("zscore examples") {
  NormalizationReference ref{Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, 1.0), "unit"};
  Eigen::MatrixXd x(1, 1);
  x << 5;
  CHECK(zscore_normalize(x, ref).values(0, 0) == 1.0);
  x << 2;
  CHECK(zscore_normalize(x, ref).values(0, 0) == 0.0);
  CHECK(zscore_normalize(x, ref, 0.5).values(0, 0) == 0.0);
  CHECK(throws_category([&] { zscore_normalize(Eigen::MatrixXd::Ones(1, 2), ref); }, ErrorCategory::invalid_argument));
  CHECK(throws_category([&] { zscore_normalize(x, ref, 0.0); }, ErrorCategory::invalid_argument));
}

TEST_CASE("zscore against the reference cohort") {
  testkit::Rng rng(31);
  Eigen::MatrixXd cohort = random_matrix(rng, 30, 4) * 10.0;
  cohort.col(2).setConstant(7.0);
  const auto ref = reference_from_cohort(cohort);
  const auto z = zscore_normalize(cohort, ref);
  CHECK(z.dropped_columns == std::vector<std::size_t>{2});
  CHECK(z.kept_columns == std::vector<std::size_t>{0, 1, 3});
  REQUIRE(z.values.cols() == 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    const double mean = z.values.col(c).mean();
    const double var = (z.values.col(c).array() - mean).square().sum() / 29.0;
    CHECK(std::abs(mean) <= 1e-12);
    CHECK(std::sqrt(var) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  // Shifting a column by c shifts its output by c / (3 sigma).
  Eigen::MatrixXd shifted = cohort;
  shifted.col(0).array() += 4.5;
  const auto zs = zscore_normalize(shifted, ref);
  for (Eigen::Index r = 0; r < 30; ++r)
    CHECK(zs.values(r, 0) - z.values(r, 0) == doctest::Approx(4.5 / (3 * ref.stddev(0))).epsilon(1e-12));
  CHECK(throws_category([] { reference_from_cohort(Eigen::MatrixXd::Ones(1, 3)); }, ErrorCategory::invalid_argument));
}

TEST_CASE("svd compression") {
  testkit::Rng rng(32);
  SUBCASE("full rank reproduces the input") {
    const ImageMatrix img{random_matrix(rng, 8, 6)};
    const auto full = svd_compress(img, 6);
    CHECK((full.pixels - img.pixels).norm() <= 1e-9 * img.pixels.norm());
  }
  SUBCASE("rank one is exact at k = 1") {
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(7, 1, 7);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, -2, 2);
    const ImageMatrix img{u * v.transpose()};
    CHECK((svd_compress(img, 1).pixels - img.pixels).norm() <= 1e-12 * img.pixels.norm());
  }
  SUBCASE("random 8x6 at k = 3 against eigenvalues of M^T M") {
    const ImageMatrix img{random_matrix(rng, 8, 6)};
    const auto ev = testkit::squared_singular_values(img.pixels);
    const double oracle = std::sqrt(ev.tail(3).sum());
    CHECK(std::abs((svd_compress(img, 3).pixels - img.pixels).norm() - oracle) <= 1e-9);
    const auto sv = singular_values(img);
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(sv(i) * sv(i) == doctest::Approx(ev(i)).epsilon(1e-9));
  }
  SUBCASE("errors") {
    const ImageMatrix img{random_matrix(rng, 4, 3)};
    CHECK(throws_category([&] { svd_compress(img, 0); }, ErrorCategory::invalid_argument));
    CHECK(throws_category([&] { svd_compress(img, 4); }, ErrorCategory::invalid_argument));
  }
}

TEST_CASE("property: Eckart-Young spot check") {
  testkit::Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const ImageMatrix img{random_matrix(rng, 7, 5)};
    const std::size_t k = testkit::uniform_index(rng, 1, 4);
    const double best = (svd_compress(img, k).pixels - img.pixels).norm();
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= 5; ++j) {
      const double err = (svd_compress(img, j).pixels - img.pixels).norm();
      CHECK(err <= previous + 1e-12);
      previous = err;
    }
    for (int s = 0; s < 100; ++s) {
      const Eigen::MatrixXd a = random_matrix(rng, 7, static_cast<Eigen::Index>(k)).array() - 0.5;
      const Eigen::MatrixXd b = random_matrix(rng, static_cast<Eigen::Index>(k), 5).array() - 0.5;
      // Least-squares scale of the random candidate so it is not trivially bad.
      const Eigen::MatrixXd cand = a * b;
      const double scale = (cand.array() * img.pixels.array()).sum() / cand.squaredNorm();
      CHECK((scale * cand - img.pixels).norm() >= best - 1e-12);
    }
  }
}

TEST_CASE("line defects") {
  testkit::Rng rng(34);
  const ImageMatrix img{random_matrix(rng, 6, 5) * 255.0};
  const auto lined = inject_line(img, LineDefect{LineDefect::Orientation::row, 2, 2, 0.0});
  for (Eigen::Index r = 0; r < 6; ++r)
    for (Eigen::Index c = 0; c < 5; ++c) {
      if (r == 2 || r == 3) {
        CHECK(lined.pixels(r, c) == 0.0);
      } else {
        CHECK(lined.pixels(r, c) == img.pixels(r, c));
      }
    }
  const auto col = inject_line(img, LineDefect{LineDefect::Orientation::column, 4, 1, 9.0});
  CHECK(col.pixels.col(4).isConstant(9.0));
  CHECK(col.pixels.leftCols(4) == img.pixels.leftCols(4));
  CHECK(throws_category([&] { inject_line(img, LineDefect{LineDefect::Orientation::row, 5, 2, 0.0}); },
                        ErrorCategory::invalid_argument));
  CHECK(throws_category([&] { inject_line(img, LineDefect{LineDefect::Orientation::column, 5, 1, 0.0}); },
                        ErrorCategory::invalid_argument));
  CHECK(throws_category([&] { inject_line(img, LineDefect{LineDefect::Orientation::row, 0, 0, 0.0}); },
                        ErrorCategory::invalid_argument));
}

TEST_CASE("image series") {
  const auto schedule = default_compression_schedule();
  REQUIRE(schedule.size() == 29);
  for (std::size_t q = 0; q < 29; ++q) CHECK(schedule[q] == 10 + 5 * q);
  CHECK(restrict_schedule(schedule, 24) == std::vector<std::size_t>{10, 15, 20});

  testkit::Rng rng(35);
  const ImageMatrix img{random_matrix(rng, 160, 150) * 255.0};
  SeriesOptions opts;
  opts.defect = LineDefect{LineDefect::Orientation::row, 80, 1, 0.0};
  const auto series = generate_image_series(img, opts);
  REQUIRE(series.images.size() == 32);
  CHECK(series.names.size() == 32);
  CHECK(series.images[0].pixels == img.pixels);
  CHECK(series.images[31].pixels == inject_line(img, *opts.defect).pixels);
  CHECK(series.images[30].pixels == inject_line(series.images[29], *opts.defect).pixels);
  for (std::size_t q = 0; q < 29; ++q)
    CHECK((series.images[q + 1].pixels - svd_compress(img, 10 + 5 * q).pixels).norm() <= 1e-9 * img.pixels.norm());

  SeriesOptions no_defect;
  CHECK(generate_image_series(img, no_defect).images.size() == 30);

  SeriesOptions target = opts;
  target.defect_target = 3;
  CHECK(generate_image_series(img, target).images[30].pixels ==
        inject_line(svd_compress(img, 20), *opts.defect).pixels);

  const ImageMatrix small{random_matrix(rng, 20, 15)};
  CHECK(throws_category([&] { generate_image_series(small); }, ErrorCategory::invalid_argument));
}
