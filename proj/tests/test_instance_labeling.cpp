#include <doctest.h>

#include <algorithm>

#include "zspose/instance_labeling.hpp"
#include "zspose/random.hpp"

using namespace zspose;

namespace {

Eigen::MatrixXd random_rows(int rows, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, dim);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = gaussian(rng);
  return m;
}

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  return ids;
}

}  // namespace

TEST_CASE("similarity is cosine: identical rows score 1, orthogonal rows 0") {
  Eigen::MatrixXd scene_rows(2, 4);
  scene_rows << 1, 0, 0, 0, 0, 2, 0, 0;  // second row has non-unit scale
  Eigen::MatrixXd template_rows(2, 4);
  template_rows << 5, 0, 0, 0, 0, 0, 1, 0;

  const auto scene = make_embeddings(scene_rows, {0, 1});
  const auto templates = make_template_embeddings(template_rows, {11, 22}, 1);
  const SimilarityTensor sim = similarity(scene, templates);

  CHECK(sim.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));  // same direction
  CHECK(sim.at(0, 1, 0) == doctest::Approx(0.0));
  CHECK(sim.at(1, 0, 0) == doctest::Approx(0.0));
  CHECK(sim.at(1, 1, 0) == doctest::Approx(0.0));
}

TEST_CASE("similarity equals the brute-force dot-product oracle") {
  const int m = 3, n = 2, r = 4, c = 8;
  Eigen::MatrixXd scene_rows = random_rows(m, c, 70);
  Eigen::MatrixXd template_rows = random_rows(n * r, c, 71);

  const auto scene = make_embeddings(scene_rows, iota_ids(m));
  const auto templates = make_template_embeddings(template_rows, {5, 9}, r);
  const SimilarityTensor sim = similarity(scene, templates);

  for (int mi = 0; mi < m; ++mi)
    for (int ni = 0; ni < n; ++ni)
      for (int ri = 0; ri < r; ++ri) {
        double dot = 0.0;  // elementwise loop, no linear algebra
        for (int k = 0; k < c; ++k)
          dot += scene.rows(mi, k) * templates.rows(ni * r + ri, k);
        CHECK(sim.at(mi, ni, ri) == doctest::Approx(dot).epsilon(1e-12));
        CHECK(sim.at(mi, ni, ri) <= 1.0 + 1e-12);
        CHECK(sim.at(mi, ni, ri) >= -1.0 - 1e-12);
      }

  Eigen::MatrixXd wrong_dim = random_rows(m, c + 1, 72);
  const auto bad = make_embeddings(wrong_dim, iota_ids(m));
  CHECK_THROWS_AS(similarity(bad, templates), std::invalid_argument);
}

TEST_CASE("assign keeps over-threshold masks with the argmax object") {
  // M=1: object scores {0.9, 0.2}
  Eigen::MatrixXd scene_rows(1, 4);
  scene_rows << 1, 0, 0, 0;
  Eigen::MatrixXd template_rows(4, 4);  // 2 objects x 2 views
  template_rows << 0.9, std::sqrt(1 - 0.81), 0, 0,
                   0.1, 0, std::sqrt(1 - 0.01), 0,
                   0.2, 0, 0, std::sqrt(1 - 0.04),
                   0.05, std::sqrt(1 - 0.0025), 0, 0;

  const auto scene = make_embeddings(scene_rows, {7});
  const auto templates = make_template_embeddings(template_rows, {100, 200}, 2);
  const auto sim = similarity(scene, templates);

  const auto kept = assign(sim, 0.5);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].mask_id == 7);
  CHECK(kept[0].object_id == 100);
  CHECK(kept[0].score == doctest::Approx(0.9).epsilon(1e-12));

  CHECK(assign(sim, 0.95).empty());  // everything below threshold
  CHECK_THROWS_AS(assign(sim, 1.0), std::invalid_argument);
}

TEST_CASE("assign equals an exhaustive max/argmax oracle on a random tensor") {
  const int m = 4, n = 3, r = 2, c = 16;
  const auto scene = make_embeddings(random_rows(m, c, 73), iota_ids(m));
  const auto templates =
      make_template_embeddings(random_rows(n * r, c, 74), {1, 2, 3}, r);
  const auto sim = similarity(scene, templates);
  const double threshold = 0.0;
  const auto got = assign(sim, threshold);

  std::vector<InstanceAssignment> expected;
  for (int mi = 0; mi < m; ++mi) {
    double best = -2.0;
    int best_obj = -1;
    for (int ni = 0; ni < n; ++ni) {
      double object_score = -2.0;
      for (int ri = 0; ri < r; ++ri) object_score = std::max(object_score, sim.at(mi, ni, ri));
      if (object_score > best) {
        best = object_score;
        best_obj = ni;
      }
    }
    if (best > threshold) expected.push_back({mi, sim.object_ids[best_obj], best});
  }
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].mask_id == expected[i].mask_id);
    CHECK(got[i].object_id == expected[i].object_id);
    CHECK(got[i].score == expected[i].score);
  }
}

TEST_CASE("assign is monotone in the threshold and ignores view order") {
  const int m = 5, n = 4, r = 3, c = 8;
  const auto scene = make_embeddings(random_rows(m, c, 75), iota_ids(m));
  Eigen::MatrixXd trows = random_rows(n * r, c, 76);
  const auto templates = make_template_embeddings(trows, {1, 2, 3, 4}, r);
  const auto sim = similarity(scene, templates);

  std::size_t previous = assign(sim, -0.9).size();
  for (double threshold : {-0.5, 0.0, 0.3, 0.6, 0.9}) {
    const std::size_t count = assign(sim, threshold).size();
    CHECK(count <= previous);
    previous = count;
  }

  // permute views within each object: assignments cannot change
  Eigen::MatrixXd permuted(n * r, c);
  for (int ni = 0; ni < n; ++ni)
    for (int ri = 0; ri < r; ++ri) permuted.row(ni * r + (ri + 1) % r) = trows.row(ni * r + ri);
  const auto templates_permuted = make_template_embeddings(permuted, {1, 2, 3, 4}, r);
  const auto a = assign(sim, 0.1);
  const auto b = assign(similarity(scene, templates_permuted), 0.1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mask_id == b[i].mask_id);
    CHECK(a[i].object_id == b[i].object_id);
    CHECK(a[i].score == doctest::Approx(b[i].score).epsilon(1e-12));
  }

  // positive rescaling before normalization changes nothing
  Eigen::MatrixXd scaled = trows * 123.0;
  const auto templates_scaled = make_template_embeddings(scaled, {1, 2, 3, 4}, r);
  const auto c2 = assign(similarity(scene, templates_scaled), 0.1);
  REQUIRE(c2.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].score == doctest::Approx(c2[i].score).epsilon(1e-12));
}

TEST_CASE("filter_masks keeps masks at or above the area threshold") {
  BitMask small(20, 20), boundary(20, 20), large(20, 20);
  int painted = 0;
  for (int y = 0; y < 20 && painted < 199; ++y)
    for (int x = 0; x < 20 && painted < 199; ++x, ++painted) small.set(x, y);
  painted = 0;
  for (int y = 0; y < 20 && painted < 200; ++y)
    for (int x = 0; x < 20 && painted < 200; ++x, ++painted) boundary.set(x, y);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) large.set(x, y);

  const std::vector<BitMask> masks = {small, boundary, large};
  const auto kept = filter_masks(masks, 200);
  REQUIRE(kept.size() == 2);  // 199 px removed, 200 px kept
  CHECK(kept[0].count() == 200);
  CHECK(kept[1].count() == 400);

  CHECK(filter_masks(masks, 0).size() == 3);
  CHECK(filter_mask_indices(masks, 200) == std::vector<int>{1, 2});
}

TEST_CASE("embedding constructors validate their inputs") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2, 3);
  rows(0, 0) = 1.0;  // second row is all zero
  CHECK_THROWS_AS(make_embeddings(rows, {0, 1}), std::invalid_argument);
  rows(1, 1) = 1.0;
  CHECK_THROWS_AS(make_embeddings(rows, {0}), std::invalid_argument);
  CHECK_THROWS_AS(make_template_embeddings(rows, {0}, 3), std::invalid_argument);
}
