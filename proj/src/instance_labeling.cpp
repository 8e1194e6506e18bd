#include "zspose/instance_labeling.hpp"

#include <stdexcept>

namespace zspose {

namespace {

void normalize_rows(Eigen::MatrixXd& rows, const char* what) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (!(norm > 0.0))
      throw std::invalid_argument(std::string(what) + ": row " + std::to_string(i) +
                                  " has zero norm");
    rows.row(i) /= norm;
  }
}

}  // namespace

EmbeddingMatrix make_embeddings(Eigen::MatrixXd rows, std::vector<int> mask_ids) {
  if (rows.rows() != static_cast<Eigen::Index>(mask_ids.size()))
    throw std::invalid_argument("embedding rows and mask ids differ in count");
  normalize_rows(rows, "scene embeddings");
  return {std::move(rows), std::move(mask_ids)};
}

TemplateEmbeddings make_template_embeddings(Eigen::MatrixXd rows, std::vector<int> object_ids,
                                            int views) {
  if (views < 1) throw std::invalid_argument("template views must be >= 1");
  if (rows.rows() != static_cast<Eigen::Index>(object_ids.size()) * views)
    throw std::invalid_argument("template rows must equal #objects * views");
  normalize_rows(rows, "template embeddings");
  return {std::move(rows), std::move(object_ids), views};
}

SimilarityTensor similarity(const EmbeddingMatrix& scene, const TemplateEmbeddings& templates) {
  if (scene.rows.cols() != templates.rows.cols())
    throw std::invalid_argument("embedding feature dimensions differ");

  SimilarityTensor t;
  t.m = static_cast<int>(scene.rows.rows());
  t.n = static_cast<int>(templates.object_ids.size());
  t.r = templates.views;
  t.mask_ids = scene.ids;
  t.object_ids = templates.object_ids;
  t.values.resize(static_cast<std::size_t>(t.m) * t.n * t.r);

  const Eigen::MatrixXd dots = scene.rows * templates.rows.transpose();  // M x (N*R)
  for (int mi = 0; mi < t.m; ++mi)
    for (int ni = 0; ni < t.n; ++ni)
      for (int ri = 0; ri < t.r; ++ri)
        t.values[(static_cast<std::size_t>(mi) * t.n + ni) * t.r + ri] =
            dots(mi, ni * t.r + ri);
  return t;
}

std::vector<InstanceAssignment> assign(const SimilarityTensor& sim, double threshold) {
  if (!(threshold > -1.0) || !(threshold < 1.0))
    throw std::invalid_argument("threshold must lie in (-1, 1)");

  std::vector<InstanceAssignment> out;
  for (int mi = 0; mi < sim.m; ++mi) {
    int best_object = -1;
    double best_score = -2.0;
    for (int ni = 0; ni < sim.n; ++ni) {
      double object_score = -2.0;  // max over template views
      for (int ri = 0; ri < sim.r; ++ri) object_score = std::max(object_score, sim.at(mi, ni, ri));
      if (object_score > best_score) {
        best_score = object_score;
        best_object = ni;
      }
    }
    if (best_object >= 0 && best_score > threshold)
      out.push_back({sim.mask_ids[mi], sim.object_ids[best_object], best_score});
  }
  return out;
}

std::vector<int> filter_mask_indices(const std::vector<BitMask>& masks, std::size_t min_area) {
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(masks.size()); ++i)
    if (masks[i].count() >= min_area) kept.push_back(i);
  return kept;
}

std::vector<BitMask> filter_masks(const std::vector<BitMask>& masks, std::size_t min_area) {
  std::vector<BitMask> out;
  for (int i : filter_mask_indices(masks, min_area)) out.push_back(masks[i]);
  return out;
}

}  // namespace zspose
