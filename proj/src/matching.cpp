#include "zspose/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "zspose/parallel.hpp"

namespace zspose {

std::vector<RegionPair> coarse_match(const HierarchicalCloud& model,
                                     const HierarchicalCloud& scene, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (model.coarse_features.rows() == 0 || scene.coarse_features.rows() == 0)
    throw std::invalid_argument("coarse features missing; call describe or ingest_features");
  if (model.coarse_features.cols() != scene.coarse_features.cols())
    throw std::invalid_argument("coarse feature dimensions differ");

  const Eigen::MatrixXd scores = model.coarse_features * scene.coarse_features.transpose();

  std::vector<RegionPair> all;
  all.reserve(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (Eigen::Index j = 0; j < scores.cols(); ++j)
      all.push_back({static_cast<int>(i), static_cast<int>(j), scores(i, j)});

  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    [](const RegionPair& a, const RegionPair& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return std::tie(a.model_region, a.scene_region) <
                             std::tie(b.model_region, b.scene_region);
                    });
  all.resize(k);
  return all;
}

namespace {

/// Softmax over scores/temperature; returns probabilities.
std::vector<double> softmax(const std::vector<double>& scores, double temperature) {
  double max_s = scores.front();
  for (double s : scores) max_s = std::max(max_s, s);
  std::vector<double> p(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp((scores[i] - max_s) / temperature);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

/// Argmax with ties resolved toward the dustbin (last slot), then the lower
/// index.
std::size_t argmax_prefer_last(const std::vector<double>& v) {
  std::size_t best = v.size() - 1;  // dustbin
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

CorrespondenceSet fine_match(const HierarchicalCloud& model, const HierarchicalCloud& scene,
                             const std::vector<RegionPair>& pairs, const MatchParams& params) {
  if (pairs.empty()) throw std::invalid_argument("region pair list is empty");
  if (model.fine_features.rows() == 0 || scene.fine_features.rows() == 0)
    throw std::invalid_argument("fine features missing; call describe or ingest_features");

  // Fine membership per coarse region.
  const auto members_of = [](const HierarchicalCloud& h) {
    std::vector<std::vector<int>> members(h.coarse_points.size());
    for (int f = 0; f < static_cast<int>(h.assignment.size()); ++f)
      members[h.assignment[f]].push_back(f);
    return members;
  };
  const auto model_members = members_of(model);
  const auto scene_members = members_of(scene);

  std::vector<std::vector<Correspondence>> per_pair(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t pi) {
    const RegionPair& rp = pairs[pi];
    const auto& ms = model_members[rp.model_region];
    const auto& ss = scene_members[rp.scene_region];
    if (ms.empty() || ss.empty()) return;
    const std::size_t nm = ms.size(), ns = ss.size();

    // cosine similarity augmented with the dustbin slot
    Eigen::MatrixXd sim(nm, ns);
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = 0; b < ns; ++b)
        sim(a, b) = model.fine_features.row(ms[a]).dot(scene.fine_features.row(ss[b]));

    // row direction: each model point over scene points + dustbin
    std::vector<std::vector<double>> row_p(nm);
    for (std::size_t a = 0; a < nm; ++a) {
      std::vector<double> scores(ns + 1);
      for (std::size_t b = 0; b < ns; ++b) scores[b] = sim(a, b);
      scores[ns] = params.dustbin_score;
      row_p[a] = softmax(scores, params.temperature);
    }
    // column direction: each scene point over model points + dustbin
    std::vector<std::vector<double>> col_p(ns);
    for (std::size_t b = 0; b < ns; ++b) {
      std::vector<double> scores(nm + 1);
      for (std::size_t a = 0; a < nm; ++a) scores[a] = sim(a, b);
      scores[nm] = params.dustbin_score;
      col_p[b] = softmax(scores, params.temperature);
    }

    for (std::size_t a = 0; a < nm; ++a) {
      const std::size_t b = argmax_prefer_last(row_p[a]);
      if (b == ns) continue;  // dustbin
      if (argmax_prefer_last(col_p[b]) != a) continue;
      const double confidence = row_p[a][b] * col_p[b][a];
      if (confidence <= params.min_confidence) continue;
      per_pair[pi].push_back(
          {ms[a], ss[b], confidence, rp.model_region, rp.scene_region});
    }
  });

  // Merge across region pairs: one entry per (model, scene) pair, keeping the
  // highest confidence; order-canonicalized so permuting pairs cannot matter.
  std::map<std::pair<int, int>, Correspondence> merged;
  for (const auto& list : per_pair) {
    for (const Correspondence& c : list) {
      const auto key = std::make_pair(c.model_index, c.scene_index);
      auto it = merged.find(key);
      if (it == merged.end() || c.confidence > it->second.confidence ||
          (c.confidence == it->second.confidence &&
           std::tie(c.model_region, c.scene_region) <
               std::tie(it->second.model_region, it->second.scene_region)))
        merged[key] = c;
    }
  }

  CorrespondenceSet out;
  out.pairs.reserve(merged.size());
  for (const auto& [key, c] : merged) out.pairs.push_back(c);
  return out;
}

}  // namespace zspose
