#pragma once

#include <Eigen/Core>

#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// Unit-norm embedding rows for scene instances; ids are mask ids.
struct EmbeddingMatrix {
  Eigen::MatrixXd rows;
  std::vector<int> ids;
};

/// Template embeddings, object-major: row (n * views + r) is view r of the
/// n-th object in object_ids.
struct TemplateEmbeddings {
  Eigen::MatrixXd rows;
  std::vector<int> object_ids;
  int views = 0;
};

/// Normalizes rows in place; throws on a zero row or id/row count mismatch.
EmbeddingMatrix make_embeddings(Eigen::MatrixXd rows, std::vector<int> mask_ids);
TemplateEmbeddings make_template_embeddings(Eigen::MatrixXd rows, std::vector<int> object_ids,
                                            int views);

/// Cosine similarity tensor C with shape (masks M, objects N, views R).
struct SimilarityTensor {
  int m = 0, n = 0, r = 0;
  std::vector<double> values;  // m-major, then n, then r
  std::vector<int> mask_ids;
  std::vector<int> object_ids;

  double at(int mi, int ni, int ri) const {
    return values[(static_cast<std::size_t>(mi) * n + ni) * r + ri];
  }
};

struct InstanceAssignment {
  int mask_id = -1;
  int object_id = -1;
  double score = 0.0;
};

/// C[m,n,r] = <scene row m, template row (n,r)>; rows are unit-norm so this
/// is the cosine similarity. Throws on feature dimension mismatch.
SimilarityTensor similarity(const EmbeddingMatrix& scene, const TemplateEmbeddings& templates);

/// Per-mask object score = max over views; a mask is kept when its best
/// object score exceeds the threshold, labeled by argmax over objects (ties
/// to the lower object id).
std::vector<InstanceAssignment> assign(const SimilarityTensor& sim, double threshold);

/// Keeps masks with pixel count >= min_area, order preserved.
std::vector<BitMask> filter_masks(const std::vector<BitMask>& masks, std::size_t min_area);

/// Index-preserving variant used when masks carry external ids.
std::vector<int> filter_mask_indices(const std::vector<BitMask>& masks, std::size_t min_area);

}  // namespace zspose
