#pragma once

#include <map>
#include <string>
#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// Visible Surface Discrepancy parameters: misalignment tolerances (one
/// error value per tau), visibility tolerance, and correctness thresholds.
struct VsdParams {
  std::vector<double> taus;               // mm
  double delta = 15.0;                    // mm
  std::vector<double> thresholds;         // correctness cutoffs on the error
};

/// Per-pixel depth discrepancy over the union of visibility masks; in [0, 1].
/// Visibility: rendered pixels whose depth beats the test depth within delta,
/// or where the test depth is invalid. An empty union scores 1 (worst case).
double vsd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
           const DepthImage& test_depth, double tau, double delta);

/// Shares the two renders across all taus.
std::vector<double> vsd_multi(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
                              const DepthImage& test_depth, const std::vector<double>& taus,
                              double delta);

/// Maximum symmetry-aware surface distance: min over the stored symmetries of
/// the max vertex displacement between the two posings. mm.
double mssd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh);

/// Projection-space analog of mssd, in pixels. Throws when any vertex lands
/// at z <= 0 under either pose.
double mspd(const Pose& pred, const Pose& gt, const TriangleMesh& mesh,
            const CameraIntrinsics& cam);

/// Pose errors of one matched (prediction, ground truth) pair.
struct PoseErrorRecord {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  std::vector<double> e_vsd;  // one entry per vsd tau
  double e_mssd = 0.0;        // mm
  double e_mspd = 0.0;        // px
};

/// Recall threshold grids; defaults follow the BOP convention and every entry
/// can be overridden.
struct ThresholdGrids {
  std::vector<double> vsd_tau_fractions;    // of object diameter
  std::vector<double> vsd_thresholds;       // on the vsd error value
  std::vector<double> mssd_fractions;       // of object diameter
  std::vector<double> mspd_pixel_factors;   // x (image_width / 640) px

  static ThresholdGrids bop_defaults();
};

struct ArReport {
  double ar = 0.0;
  double ar_vsd = 0.0;
  double ar_mssd = 0.0;
  double ar_mspd = 0.0;
  std::size_t n_records = 0;
  std::size_t n_ground_truth = 0;
  std::map<int, double> per_object_ar;
};

/// Mean recall over the three grids; total_gt counts every ground-truth
/// annotation (unmatched ones lower the recall). Records must carry one
/// e_vsd entry per tau fraction, and every object id needs a diameter.
/// per_object_gt, when given, sets the per-object recall denominators for the
/// breakdown (objects default to their own record count).
ArReport pose_ar(const std::vector<PoseErrorRecord>& records,
                 const std::map<int, double>& diameters, int image_width,
                 std::size_t total_gt,
                 const ThresholdGrids& grids = ThresholdGrids::bop_defaults(),
                 const std::map<int, std::size_t>& per_object_gt = {});

/// Segmentation inputs: masks tagged with image key, object class, and (for
/// predictions) a confidence score.
struct ScoredMask {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  double score = 0.0;
  BitMask mask;
};

struct GroundTruthMask {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  BitMask mask;
};

struct SegReport {
  double ap = 0.0;       // mean over IoU .50:.05:.95 and classes
  double ar = 0.0;       // AR@100, mean over thresholds and classes
  std::map<int, double> per_object_ap;
  std::vector<double> per_threshold_ap;
};

/// COCO-style evaluation: greedy score-ordered matching within each class and
/// image, 101-point interpolated AP per IoU threshold, AR@max_detections.
SegReport seg_ap(const std::vector<ScoredMask>& predictions,
                 const std::vector<GroundTruthMask>& ground_truth,
                 int max_detections_per_image = 100);

double mask_iou(const BitMask& a, const BitMask& b);

}  // namespace zspose
