#pragma once

#include <map>
#include <string>
#include <vector>

#include "zspose/geometry.hpp"
#include "zspose/instance_labeling.hpp"

namespace zspose {

/// Per-image camera record from scene_camera.json:
/// {"<im_id>": {"cam_K": [fx 0 cx 0 fy cy 0 0 1], "depth_scale": s}}.
struct SceneCameraEntry {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  double depth_scale = 1.0;

  CameraIntrinsics with_size(int width, int height) const {
    return {fx, fy, cx, cy, width, height};
  }
};

std::map<int, SceneCameraEntry> load_scene_camera(const std::string& path);
void save_scene_camera(const std::string& path,
                       const std::map<int, SceneCameraEntry>& cameras);

/// Ground-truth annotation from scene_gt.json:
/// {"<im_id>": [{"obj_id": n, "R": [9 row-major], "t": [3 mm]}]}.
struct GroundTruthEntry {
  int obj_id = -1;
  Pose pose;
};

std::map<int, std::vector<GroundTruthEntry>> load_scene_gt(const std::string& path);
void save_scene_gt(const std::string& path,
                   const std::map<int, std::vector<GroundTruthEntry>>& gt);

/// models_info.json: {"<obj_id>": {"diameter": mm, "symmetries": [...]}}
/// with the same symmetry encoding as the mesh sidecar.
struct ModelInfo {
  double diameter = 0.0;
  SymmetrySet symmetries;
};

std::map<int, ModelInfo> load_models_info(const std::string& path);
void save_models_info(const std::string& path, const std::map<int, ModelInfo>& info);

/// One results-CSV line: scene_id,im_id,obj_id,score,R,t,time with R as 9
/// space-separated row-major floats and t as 3 floats (mm).
struct ResultRow {
  int scene_id = 0;
  int im_id = 0;
  int obj_id = 0;
  double score = 0.0;
  Pose pose;
  double time = -1.0;  // seconds; -1 = not reported
};

void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> load_results_csv(const std::string& path);

/// Per-image mask directory index ("index.json"): an ordered list of entries;
/// the list position is the mask id referenced by embeddings and results.
struct MaskIndexEntry {
  std::string file;
  int obj_id = -1;      // optional ground-truth/prediction label
  double score = -1.0;  // optional prediction confidence
};

void save_mask_index(const std::string& path, const std::vector<MaskIndexEntry>& entries);
std::vector<MaskIndexEntry> load_mask_index(const std::string& path);

/// Embedding sidecars (JSON next to the .zspf file): scene files carry
/// {"mask_ids": [...]} and template files {"object_ids": [...], "views": R}.
void save_scene_embeddings(const std::string& zspf_path, const EmbeddingMatrix& emb);
EmbeddingMatrix load_scene_embeddings(const std::string& zspf_path);
void save_template_embeddings(const std::string& zspf_path, const TemplateEmbeddings& emb);
TemplateEmbeddings load_template_embeddings(const std::string& zspf_path);

/// Numerically named subdirectories of a dataset root (scene ids).
std::vector<int> list_scene_ids(const std::string& dataset_root);

std::string scene_dir(const std::string& root, int scene_id);
std::string image_name(int im_id);  // zero-padded 6 digits
std::string model_path(const std::string& models_dir, int obj_id);

}  // namespace zspose
