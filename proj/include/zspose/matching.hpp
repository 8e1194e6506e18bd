#pragma once

#include <cstddef>
#include <vector>

#include "zspose/hierarchy.hpp"

namespace zspose {

/// Candidate visible-region pair between model and scene coarse points.
struct RegionPair {
  int model_region = -1;
  int scene_region = -1;
  double score = 0.0;  // cosine similarity, [-1, 1]
};

/// Weighted fine-point correspondence with its region provenance.
struct Correspondence {
  int model_index = -1;
  int scene_index = -1;
  double confidence = 0.0;  // (0, 1]
  int model_region = -1;
  int scene_region = -1;
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

struct MatchParams {
  double dustbin_score = 0.0;   // cosine score of the mismatch slot
  double temperature = 0.1;     // dual-softmax temperature
  double min_confidence = 0.05; // joint responsibility cutoff
};

/// Top-k coarse region pairs by cosine similarity, ordered by descending
/// score then by (model, scene) index; k is capped at #model x #scene.
/// Throws when either side lacks coarse features.
std::vector<RegionPair> coarse_match(const HierarchicalCloud& model,
                                     const HierarchicalCloud& scene, std::size_t k);

/// Point correspondences within the given region pairs: a dustbin row/column
/// absorbs unmatched points, a dual-direction softmax scores candidates, and
/// mutual argmax pairs above min_confidence survive. Output is deduplicated
/// and sorted by (model index, scene index); an empty set is a legal result.
CorrespondenceSet fine_match(const HierarchicalCloud& model, const HierarchicalCloud& scene,
                             const std::vector<RegionPair>& pairs,
                             const MatchParams& params = {});

}  // namespace zspose
