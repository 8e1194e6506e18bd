#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zspose/geometry.hpp"
#include "zspose/hierarchy.hpp"
#include "zspose/instance_labeling.hpp"
#include "zspose/matching.hpp"
#include "zspose/metrics.hpp"
#include "zspose/registration.hpp"

namespace zspose {

/// Knobs of the estimation pipeline. Voxel/radius values are fractions of the
/// per-object circumradius so they track object scale.
struct PipelineConfig {
  std::size_t views = 72;
  double similarity_threshold = 0.5;
  std::size_t min_mask_area = 200;
  std::size_t model_samples = 4096;
  double fine_voxel_factor = 1.0 / 25.0;
  double coarse_voxel_factor = 1.0 / 5.0;
  double descriptor_radius_factor = 2.0;  // x the voxel size
  double inlier_radius_factor = 0.1;
  std::size_t coarse_k = 64;
  MatchParams match;
  std::uint64_t seed = 0;
};

/// One pose estimate of the pipeline.
struct SceneEstimate {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  double score = 0.0;
  Pose pose;
  double runtime = 0.0;  // seconds
};

/// A target object prepared for matching: sampled cloud, described hierarchy,
/// circumradius prior.
struct ObjectModel {
  int id = -1;
  TriangleMesh mesh;
  double diameter = 0.0;
  PointCloud samples;
  HierarchicalCloud hierarchy;
  double radius = 0.0;  // circumradius of the sampled cloud
};

ObjectModel prepare_model(int id, TriangleMesh mesh, const PipelineConfig& config);

/// Inputs of one image (already loaded from disk).
struct ImageInputs {
  int scene_id = 0;
  int image_id = 0;
  DepthImage depth;
  std::vector<BitMask> masks;   // parallel to mask_ids
  std::vector<int> mask_ids;
  EmbeddingMatrix embeddings;   // rows keyed by mask id
};

/// Runs labeling + pose estimation for one image. Masks whose assignment
/// falls below the threshold, that back-project to nothing, or whose
/// registration degenerates are skipped with a warning.
std::vector<SceneEstimate> estimate_image(const ImageInputs& inputs,
                                          const TemplateEmbeddings& templates,
                                          const std::map<int, ObjectModel>& models,
                                          const PipelineConfig& config,
                                          std::vector<std::string>* warnings = nullptr);

/// Dataset drivers (paths follow the BOP-like layout in the README).
std::vector<SceneEstimate> run_estimate(const std::string& dataset_dir,
                                        const std::string& masks_dir,
                                        const std::string& embeddings_dir,
                                        const std::string& models_dir,
                                        const PipelineConfig& config,
                                        std::vector<std::string>* warnings = nullptr);

void write_results(const std::string& csv_path, const std::vector<SceneEstimate>& estimates,
                   bool report_time = false);

struct SynthParams {
  int n_scenes = 1;
  int objects_per_scene = 0;  // 0 = random 1..4 per scene
  std::uint64_t seed = 0;
  int image_width = 640;
  int image_height = 480;
  double focal = 550.0;
};

/// Renders synthetic desk scenes of the given models: depth PNGs, ground
/// truth, exact visible masks, and one-hot embeddings, all in the pipeline's
/// own formats. Byte-identical output for a fixed seed.
void synth_scenes(const std::string& models_dir, const std::string& out_dir,
                  const SynthParams& params);

/// Renders template views (depth) and the view-set JSON per model.
void run_render_templates(const std::string& models_dir, std::size_t views,
                          const std::string& out_dir);

/// Scores a results CSV against dataset ground truth and writes a JSON
/// report; returns the aggregate numbers.
ArReport run_eval_pose(const std::string& results_csv, const std::string& dataset_dir,
                       const std::string& models_dir, const std::string& report_path,
                       const ThresholdGrids& grids = ThresholdGrids::bop_defaults());

/// Scores predicted masks against ground-truth masks (mask-directory layout)
/// and writes a JSON report.
SegReport run_eval_seg(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& report_path);

}  // namespace zspose
