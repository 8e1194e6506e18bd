#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "zspose/matching.hpp"
#include "zspose/random.hpp"

using namespace zspose;

namespace {

/// Hierarchy stub with given per-region fine counts and explicit features.
HierarchicalCloud stub_hierarchy(const std::vector<int>& fine_per_region,
                                 const Eigen::MatrixXd& fine_features,
                                 const Eigen::MatrixXd& coarse_features) {
  HierarchicalCloud h;
  int fine_total = 0;
  for (int region = 0; region < static_cast<int>(fine_per_region.size()); ++region) {
    h.coarse_points.points.emplace_back(region * 100.0, 0, 0);
    for (int k = 0; k < fine_per_region[region]; ++k) {
      h.fine_points.points.emplace_back(region * 100.0 + k, 0, 0);
      h.assignment.push_back(region);
      ++fine_total;
    }
  }
  REQUIRE(fine_features.rows() == fine_total);
  REQUIRE(coarse_features.rows() == static_cast<Eigen::Index>(fine_per_region.size()));
  h.fine_features = fine_features;
  h.coarse_features = coarse_features;
  return h;
}

Eigen::MatrixXd random_unit_rows(int rows, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, dim);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = gaussian(rng);
    m.row(i) /= m.row(i).norm();
  }
  return m;
}

}  // namespace

TEST_CASE("coarse_match of a cloud with itself puts the diagonal on top") {
  const Eigen::MatrixXd coarse = random_unit_rows(6, 16, 3);
  const Eigen::MatrixXd fine = random_unit_rows(6, 8, 4);
  const auto h = stub_hierarchy({1, 1, 1, 1, 1, 1}, fine, coarse);

  const auto pairs = coarse_match(h, h, 6);
  REQUIRE(pairs.size() == 6);
  for (const RegionPair& p : pairs) {
    CHECK(p.model_region == p.scene_region);
    CHECK(p.score == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("coarse_match on orthogonal features is deterministic index order") {
  Eigen::MatrixXd model_coarse = Eigen::MatrixXd::Zero(2, 4);
  model_coarse(0, 0) = 1;
  model_coarse(1, 1) = 1;
  Eigen::MatrixXd scene_coarse = Eigen::MatrixXd::Zero(2, 4);
  scene_coarse(0, 2) = 1;
  scene_coarse(1, 3) = 1;
  const Eigen::MatrixXd fine = random_unit_rows(2, 4, 5);
  const auto model = stub_hierarchy({1, 1}, fine, model_coarse);
  const auto scene = stub_hierarchy({1, 1}, fine, scene_coarse);

  const auto pairs = coarse_match(model, scene, 10);  // k capped at 4
  REQUIRE(pairs.size() == 4);
  for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(pairs[i].score == 0.0);
  // all-equal scores fall back to (model, scene) index order
  CHECK(pairs[0].model_region == 0);
  CHECK(pairs[0].scene_region == 0);
  CHECK(pairs[1].scene_region == 1);
  CHECK(pairs[2].model_region == 1);
}

TEST_CASE("coarse_match equals the exhaustive top-k oracle on random features") {
  const int n_model = 7, n_scene = 9, k = 5;
  const Eigen::MatrixXd mc = random_unit_rows(n_model, 12, 6);
  const Eigen::MatrixXd sc = random_unit_rows(n_scene, 12, 7);
  const auto model = stub_hierarchy(std::vector<int>(n_model, 1),
                                    random_unit_rows(n_model, 6, 8), mc);
  const auto scene = stub_hierarchy(std::vector<int>(n_scene, 1),
                                    random_unit_rows(n_scene, 6, 9), sc);

  const auto pairs = coarse_match(model, scene, k);
  REQUIRE(pairs.size() == k);

  // oracle: full sort of every (i, j) score
  std::vector<std::tuple<double, int, int>> all;
  for (int i = 0; i < n_model; ++i)
    for (int j = 0; j < n_scene; ++j) all.emplace_back(-mc.row(i).dot(sc.row(j)), i, j);
  std::sort(all.begin(), all.end());
  for (int r = 0; r < k; ++r) {
    CHECK(pairs[r].model_region == std::get<1>(all[r]));
    CHECK(pairs[r].scene_region == std::get<2>(all[r]));
    CHECK(pairs[r].score == doctest::Approx(-std::get<0>(all[r])).epsilon(1e-12));
  }

  HierarchicalCloud no_features = model;
  no_features.coarse_features.resize(0, 0);
  CHECK_THROWS_AS(coarse_match(no_features, scene, 3), std::invalid_argument);
}

TEST_CASE("fine_match on identical regions returns the identity with high confidence") {
  const int n = 12;
  const Eigen::MatrixXd fine = random_unit_rows(n, 16, 10);
  const auto h = stub_hierarchy({n}, fine, random_unit_rows(1, 8, 11));

  const CorrespondenceSet corr = fine_match(h, h, {{0, 0, 1.0}});
  REQUIRE(corr.size() == static_cast<std::size_t>(n));
  for (const Correspondence& c : corr.pairs) {
    CHECK(c.model_index == c.scene_index);
    CHECK(c.confidence > 0.5);
  }
}

TEST_CASE("fine_match sends pure outliers to the dustbin") {
  // scene features exactly orthogonal to every model feature
  Eigen::MatrixXd model_fine = Eigen::MatrixXd::Zero(4, 8);
  Eigen::MatrixXd scene_fine = Eigen::MatrixXd::Zero(4, 8);
  for (int i = 0; i < 4; ++i) {
    model_fine(i, i) = 1.0;
    scene_fine(i, 4 + i) = 1.0;
  }
  const auto model = stub_hierarchy({4}, model_fine, random_unit_rows(1, 8, 12));
  const auto scene = stub_hierarchy({4}, scene_fine, random_unit_rows(1, 8, 13));

  const CorrespondenceSet corr = fine_match(model, scene, {{0, 0, 0.0}});
  CHECK(corr.empty());
}

TEST_CASE("fine_match recovers a known permutation (exhaustive oracle)") {
  const int n = 50;
  const Eigen::MatrixXd base = random_unit_rows(n, 24, 14);
  // scene region holds the same features under a fixed permutation
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;
  Eigen::MatrixXd scene_fine(n, 24);
  for (int i = 0; i < n; ++i) scene_fine.row(perm[i]) = base.row(i);

  const auto model = stub_hierarchy({n}, base, random_unit_rows(1, 8, 15));
  const auto scene = stub_hierarchy({n}, scene_fine, random_unit_rows(1, 8, 16));

  const CorrespondenceSet corr = fine_match(model, scene, {{0, 0, 1.0}});
  REQUIRE(corr.size() == static_cast<std::size_t>(n));
  for (const Correspondence& c : corr.pairs) CHECK(c.scene_index == perm[c.model_index]);

  // oracle: brute-force mutual argmax over the raw similarity matrix
  const Eigen::MatrixXd sim = base * scene_fine.transpose();
  for (const Correspondence& c : corr.pairs) {
    int row_best = 0;
    sim.row(c.model_index).maxCoeff(&row_best);
    int col_best = 0;
    sim.col(c.scene_index).maxCoeff(&col_best);
    CHECK(row_best == c.scene_index);
    CHECK(col_best == c.model_index);
  }
}

TEST_CASE("fine_match results are invariant to region-pair order and stay in scope") {
  const int per_region = 6;
  const Eigen::MatrixXd model_fine = random_unit_rows(3 * per_region, 16, 17);
  Eigen::MatrixXd scene_fine = random_unit_rows(3 * per_region, 16, 18);
  // make some strong cross-region matches
  scene_fine.topRows(per_region) = model_fine.middleRows(per_region, per_region);

  const auto model =
      stub_hierarchy({per_region, per_region, per_region}, model_fine,
                     random_unit_rows(3, 8, 19));
  const auto scene =
      stub_hierarchy({per_region, per_region, per_region}, scene_fine,
                     random_unit_rows(3, 8, 20));

  const std::vector<RegionPair> pairs = {{1, 0, 0.9}, {0, 1, 0.5}, {2, 2, 0.4}};
  std::vector<RegionPair> shuffled = {{2, 2, 0.4}, {0, 1, 0.5}, {1, 0, 0.9}};

  const CorrespondenceSet a = fine_match(model, scene, pairs);
  const CorrespondenceSet b = fine_match(model, scene, shuffled);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.pairs[i].model_index == b.pairs[i].model_index);
    CHECK(a.pairs[i].scene_index == b.pairs[i].scene_index);
    CHECK(a.pairs[i].confidence == b.pairs[i].confidence);
  }

  // scope restriction: every correspondence lies inside a requested pair
  std::set<std::pair<int, int>> allowed;
  for (const RegionPair& p : pairs) allowed.insert({p.model_region, p.scene_region});
  for (const Correspondence& c : a.pairs) {
    CHECK(allowed.count({c.model_region, c.scene_region}) == 1);
    CHECK(model.assignment[c.model_index] == c.model_region);
    CHECK(scene.assignment[c.scene_index] == c.scene_region);
  }

  CHECK_THROWS_AS(fine_match(model, scene, {}), std::invalid_argument);
}
