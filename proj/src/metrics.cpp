#include "zspose/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

#include "zspose/renderer.hpp"

namespace zspose {

namespace {

/// Visibility of a rendered surface against the test depth: the pixel is
/// visible when the render is not occluded by measured geometry (within
/// delta) or the measurement is missing.
BitMask visibility_mask(const RenderedDepth& rendered, const DepthImage& test_depth,
                        double delta) {
  BitMask v(rendered.depth.width(), rendered.depth.height());
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) {
      if (!rendered.object_mask.at(x, y)) continue;
      const double measured = test_depth.at(x, y);
      if (measured <= 0.0 || rendered.depth.at(x, y) - measured < delta) v.set(x, y);
    }
  return v;
}

}  // namespace

std::vector<double> vsd_multi(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
                              const DepthImage& test_depth, const std::vector<double>& taus,
                              double delta) {
  if (test_depth.data.size() !=
      static_cast<std::size_t>(test_depth.width()) * test_depth.height())
    throw std::invalid_argument("test depth size does not match intrinsics");
  const RenderedDepth render_pred = render_depth(mesh, pred, test_depth.intrinsics);
  const RenderedDepth render_gt = render_depth(mesh, gt, test_depth.intrinsics);

  const BitMask visib_pred = visibility_mask(render_pred, test_depth, delta);
  const BitMask visib_gt = visibility_mask(render_gt, test_depth, delta);

  std::vector<std::size_t> mismatched(taus.size(), 0);
  std::size_t union_count = 0;
  for (int y = 0; y < test_depth.height(); ++y)
    for (int x = 0; x < test_depth.width(); ++x) {
      const bool in_pred = visib_pred.at(x, y);
      const bool in_gt = visib_gt.at(x, y);
      if (!in_pred && !in_gt) continue;
      ++union_count;
      if (in_pred && in_gt) {
        const double diff = std::abs(render_pred.depth.at(x, y) - render_gt.depth.at(x, y));
        for (std::size_t t = 0; t < taus.size(); ++t)
          if (!(diff < taus[t])) ++mismatched[t];
      } else {
        for (std::size_t t = 0; t < taus.size(); ++t) ++mismatched[t];
      }
    }

  std::vector<double> errors(taus.size(), 1.0);
  if (union_count > 0)
    for (std::size_t t = 0; t < taus.size(); ++t)
      errors[t] = static_cast<double>(mismatched[t]) / static_cast<double>(union_count);
  return errors;
}

double vsd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
           const DepthImage& test_depth, double tau, double delta) {
  return vsd_multi(pred, gt, mesh, test_depth, {tau}, delta).front();
}

double mssd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw std::invalid_argument("mesh has no vertices");
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& sym : mesh.symmetries.transforms) {
    const Pose gt_sym = gt * sym;
    double worst = 0.0;
    for (const Vec3& v : mesh.vertices)
      worst = std::max(worst, (pred * v - gt_sym * v).norm());
    best = std::min(best, worst);
  }
  return best;
}

double mspd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
            const CameraIntrinsics& cam) {
  if (mesh.vertices.empty()) throw std::invalid_argument("mesh has no vertices");
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& sym : mesh.symmetries.transforms) {
    const Pose gt_sym = gt * sym;
    double worst = 0.0;
    for (const Vec3& v : mesh.vertices) {
      const Vec3 p = pred * v;
      const Vec3 q = gt_sym * v;
      if (p.z() <= 0.0 || q.z() <= 0.0)
        throw std::invalid_argument("vertex behind camera in mspd");
      worst = std::max(worst, (cam.project(p) - cam.project(q)).norm());
    }
    best = std::min(best, worst);
  }
  return best;
}

ThresholdGrids ThresholdGrids::bop_defaults() {
  ThresholdGrids g;
  for (int i = 1; i <= 10; ++i) {
    g.vsd_tau_fractions.push_back(0.05 * i);
    g.vsd_thresholds.push_back(0.05 * i);
    g.mssd_fractions.push_back(0.05 * i);
    g.mspd_pixel_factors.push_back(5.0 * i);
  }
  return g;
}

ArReport pose_ar(const std::vector<PoseErrorRecord>& records,
                 const std::map<int, double>& diameters, int image_width,
                 std::size_t total_gt, const ThresholdGrids& grids,
                 const std::map<int, std::size_t>& per_object_gt) {
  for (const PoseErrorRecord& rec : records) {
    if (!diameters.count(rec.object_id))
      throw std::invalid_argument("missing diameter for object " +
                                  std::to_string(rec.object_id));
    if (rec.e_vsd.size() != grids.vsd_tau_fractions.size())
      throw std::invalid_argument("vsd error list does not match the tau grid");
  }

  ArReport report;
  report.n_records = records.size();
  report.n_ground_truth = total_gt;
  if (total_gt == 0) return report;

  const double px_unit = static_cast<double>(image_width) / 640.0;
  const auto recall = [&](auto&& correct) {
    std::size_t hits = 0;
    for (const PoseErrorRecord& rec : records)
      if (correct(rec)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(total_gt);
  };

  double vsd_sum = 0.0;
  for (std::size_t ti = 0; ti < grids.vsd_tau_fractions.size(); ++ti)
    for (double theta : grids.vsd_thresholds)
      vsd_sum += recall([&](const PoseErrorRecord& r) { return r.e_vsd[ti] < theta; });
  report.ar_vsd =
      vsd_sum / static_cast<double>(grids.vsd_tau_fractions.size() * grids.vsd_thresholds.size());

  double mssd_sum = 0.0;
  for (double frac : grids.mssd_fractions)
    mssd_sum += recall([&](const PoseErrorRecord& r) {
      return r.e_mssd < frac * diameters.at(r.object_id);
    });
  report.ar_mssd = mssd_sum / static_cast<double>(grids.mssd_fractions.size());

  double mspd_sum = 0.0;
  for (double factor : grids.mspd_pixel_factors)
    mspd_sum += recall([&](const PoseErrorRecord& r) { return r.e_mspd < factor * px_unit; });
  report.ar_mspd = mspd_sum / static_cast<double>(grids.mspd_pixel_factors.size());

  report.ar = (report.ar_vsd + report.ar_mssd + report.ar_mspd) / 3.0;

  // Per-object breakdown; denominators come from per_object_gt when known.
  std::map<int, std::vector<const PoseErrorRecord*>> by_object;
  for (const PoseErrorRecord& rec : records) by_object[rec.object_id].push_back(&rec);
  for (const auto& [obj, gt_count] : per_object_gt)
    if (!by_object.count(obj) && gt_count > 0) report.per_object_ar[obj] = 0.0;
  for (const auto& [obj, recs] : by_object) {
    const auto it = per_object_gt.find(obj);
    const double denom = static_cast<double>(
        it != per_object_gt.end() && it->second > 0 ? it->second : recs.size());
    double sum = 0.0;
    std::size_t cells = 0;
    const double d = diameters.at(obj);
    for (std::size_t ti = 0; ti < grids.vsd_tau_fractions.size(); ++ti)
      for (double theta : grids.vsd_thresholds) {
        std::size_t hits = 0;
        for (const auto* r : recs)
          if (r->e_vsd[ti] < theta) ++hits;
        sum += static_cast<double>(hits) / denom;
        ++cells;
      }
    for (double frac : grids.mssd_fractions) {
      std::size_t hits = 0;
      for (const auto* r : recs)
        if (r->e_mssd < frac * d) ++hits;
      sum += static_cast<double>(hits) / denom;
      ++cells;
    }
    for (double factor : grids.mspd_pixel_factors) {
      std::size_t hits = 0;
      for (const auto* r : recs)
        if (r->e_mspd < factor * px_unit) ++hits;
      sum += static_cast<double>(hits) / denom;
      ++cells;
    }
    report.per_object_ar[obj] = sum / static_cast<double>(cells);
  }
  return report;
}

double mask_iou(const BitMask& a, const BitMask& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("mask dimensions differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const bool va = a.data[i] != 0, vb = b.data[i] != 0;
    if (va && vb) ++inter;
    if (va || vb) ++uni;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

/// 101-point interpolated average precision from (score-desc) TP flags.
double interpolated_ap(const std::vector<std::pair<double, bool>>& detections,
                       std::size_t n_gt) {
  if (n_gt == 0) return 0.0;
  std::vector<double> precision, recall;
  std::size_t tp = 0, fp = 0;
  for (const auto& [score, is_tp] : detections) {
    if (is_tp)
      ++tp;
    else
      ++fp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  // precision envelope from the right
  for (int i = static_cast<int>(precision.size()) - 2; i >= 0; --i)
    precision[i] = std::max(precision[i], precision[i + 1]);

  double ap_sum = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double r = static_cast<double>(i) / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    ap_sum += it == recall.end() ? 0.0 : precision[it - recall.begin()];
  }
  return ap_sum / 101.0;
}

}  // namespace

SegReport seg_ap(const std::vector<ScoredMask>& predictions,
                 const std::vector<GroundTruthMask>& ground_truth,
                 int max_detections_per_image) {
  // Keep at most max_detections top-scoring predictions per image.
  std::vector<int> order(predictions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const ScoredMask& pa = predictions[a];
    const ScoredMask& pb = predictions[b];
    if (pa.score != pb.score) return pa.score > pb.score;
    return std::tie(pa.scene_id, pa.image_id, a) < std::tie(pb.scene_id, pb.image_id, b);
  });
  std::map<std::pair<int, int>, int> per_image_kept;
  std::vector<int> kept;
  for (int idx : order) {
    int& used = per_image_kept[{predictions[idx].scene_id, predictions[idx].image_id}];
    if (used >= max_detections_per_image) continue;
    ++used;
    kept.push_back(idx);
  }

  std::set<int> classes;
  for (const auto& g : ground_truth) classes.insert(g.object_id);

  std::vector<double> thresholds;
  for (int i = 0; i < 10; ++i) thresholds.push_back(0.50 + 0.05 * i);

  SegReport report;
  report.per_threshold_ap.assign(thresholds.size(), 0.0);
  std::map<int, double> per_class_ap_sum;
  double ap_total = 0.0, ar_total = 0.0;
  std::size_t cells = 0;

  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double iou_thr = thresholds[t];
    double ap_classes = 0.0, ar_classes = 0.0;
    for (int cls : classes) {
      // GT of this class, grouped by image
      std::map<std::pair<int, int>, std::vector<int>> gt_by_image;
      std::size_t n_gt = 0;
      for (int gi = 0; gi < static_cast<int>(ground_truth.size()); ++gi)
        if (ground_truth[gi].object_id == cls) {
          gt_by_image[{ground_truth[gi].scene_id, ground_truth[gi].image_id}].push_back(gi);
          ++n_gt;
        }

      std::set<int> matched;
      std::vector<std::pair<double, bool>> detections;  // score desc order
      for (int idx : kept) {
        const ScoredMask& pred = predictions[idx];
        if (pred.object_id != cls) continue;
        const auto it = gt_by_image.find({pred.scene_id, pred.image_id});
        bool is_tp = false;
        if (it != gt_by_image.end()) {
          double best_iou = iou_thr;
          int best_gt = -1;
          for (int gi : it->second) {
            if (matched.count(gi)) continue;
            const double iou = mask_iou(pred.mask, ground_truth[gi].mask);
            if (iou >= best_iou) {
              best_iou = iou;
              best_gt = gi;
            }
          }
          if (best_gt >= 0) {
            matched.insert(best_gt);
            is_tp = true;
          }
        }
        detections.emplace_back(pred.score, is_tp);
      }

      const double ap = interpolated_ap(detections, n_gt);
      const double max_recall =
          n_gt == 0 ? 0.0 : static_cast<double>(matched.size()) / static_cast<double>(n_gt);
      ap_classes += ap;
      ar_classes += max_recall;
      per_class_ap_sum[cls] += ap;
    }
    const double n_classes = static_cast<double>(classes.size());
    report.per_threshold_ap[t] = classes.empty() ? 0.0 : ap_classes / n_classes;
    ap_total += report.per_threshold_ap[t];
    ar_total += classes.empty() ? 0.0 : ar_classes / n_classes;
    ++cells;
  }

  report.ap = ap_total / static_cast<double>(cells);
  report.ar = ar_total / static_cast<double>(cells);
  for (const auto& [cls, sum] : per_class_ap_sum)
    report.per_object_ap[cls] = sum / static_cast<double>(thresholds.size());
  return report;
}

}  // namespace zspose
