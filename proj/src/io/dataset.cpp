#include "zspose/io/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "zspose/io/zspf.hpp"

namespace zspose {

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

Pose pose_from_json(const nlohmann::json& entry) {
  Mat3 r;
  const auto& rr = entry.at("R");
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r(i, k) = rr.at(i * 3 + k).get<double>();
  const auto& tt = entry.at("t");
  return {r, Vec3(tt.at(0).get<double>(), tt.at(1).get<double>(), tt.at(2).get<double>())};
}

nlohmann::json pose_to_json(const Pose& pose) {
  nlohmann::json r = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r.push_back(pose.rotation.m(i, k));
  return {{"R", r},
          {"t", {pose.translation.x(), pose.translation.y(), pose.translation.z()}}};
}

/// Full-precision float -> shortest round-trip text.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::map<int, SceneCameraEntry> load_scene_camera(const std::string& path) {
  const nlohmann::json j = read_json(path);
  std::map<int, SceneCameraEntry> out;
  for (const auto& [key, value] : j.items()) {
    SceneCameraEntry e;
    const auto& k = value.at("cam_K");
    e.fx = k.at(0).get<double>();
    e.cx = k.at(2).get<double>();
    e.fy = k.at(4).get<double>();
    e.cy = k.at(5).get<double>();
    e.depth_scale = value.value("depth_scale", 1.0);
    out[std::stoi(key)] = e;
  }
  return out;
}

void save_scene_camera(const std::string& path,
                       const std::map<int, SceneCameraEntry>& cameras) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [im_id, e] : cameras) {
    j[std::to_string(im_id)] = {
        {"cam_K", {e.fx, 0.0, e.cx, 0.0, e.fy, e.cy, 0.0, 0.0, 1.0}},
        {"depth_scale", e.depth_scale}};
  }
  write_json(path, j);
}

std::map<int, std::vector<GroundTruthEntry>> load_scene_gt(const std::string& path) {
  const nlohmann::json j = read_json(path);
  std::map<int, std::vector<GroundTruthEntry>> out;
  for (const auto& [key, list] : j.items()) {
    std::vector<GroundTruthEntry>& entries = out[std::stoi(key)];
    for (const auto& item : list)
      entries.push_back({item.at("obj_id").get<int>(), pose_from_json(item)});
  }
  return out;
}

void save_scene_gt(const std::string& path,
                   const std::map<int, std::vector<GroundTruthEntry>>& gt) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [im_id, entries] : gt) {
    nlohmann::json list = nlohmann::json::array();
    for (const GroundTruthEntry& e : entries) {
      nlohmann::json item = pose_to_json(e.pose);
      item["obj_id"] = e.obj_id;
      list.push_back(item);
    }
    j[std::to_string(im_id)] = list;
  }
  write_json(path, j);
}

std::map<int, ModelInfo> load_models_info(const std::string& path) {
  const nlohmann::json j = read_json(path);
  std::map<int, ModelInfo> out;
  for (const auto& [key, value] : j.items()) {
    ModelInfo info;
    info.diameter = value.at("diameter").get<double>();
    if (value.contains("symmetries")) {
      for (const auto& entry : value.at("symmetries")) {
        const Pose pose = pose_from_json(entry);
        if (pose.rotation.m.isApprox(Mat3::Identity(), 1e-12) &&
            pose.translation.norm() < 1e-12)
          continue;
        info.symmetries.add(pose);
      }
    }
    out[std::stoi(key)] = info;
  }
  return out;
}

void save_models_info(const std::string& path, const std::map<int, ModelInfo>& info) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [obj_id, mi] : info) {
    nlohmann::json syms = nlohmann::json::array();
    for (const Pose& p : mi.symmetries.transforms) syms.push_back(pose_to_json(p));
    j[std::to_string(obj_id)] = {{"diameter", mi.diameter}, {"symmetries", syms}};
  }
  write_json(path, j);
}

void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "scene_id,im_id,obj_id,score,R,t,time\n";
  for (const ResultRow& r : rows) {
    f << r.scene_id << "," << r.im_id << "," << r.obj_id << "," << format_double(r.score)
      << ",";
    for (int i = 0; i < 9; ++i) {
      if (i) f << " ";
      f << format_double(r.pose.rotation.m(i / 3, i % 3));
    }
    f << ",";
    for (int i = 0; i < 3; ++i) {
      if (i) f << " ";
      f << format_double(r.pose.translation(i));
    }
    f << "," << format_double(r.time) << "\n";
  }
}

std::vector<ResultRow> load_results_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<ResultRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line.rfind("scene_id", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw std::runtime_error(path + ": malformed CSV line: " + line);
    ResultRow r;
    r.scene_id = std::stoi(fields[0]);
    r.im_id = std::stoi(fields[1]);
    r.obj_id = std::stoi(fields[2]);
    r.score = std::stod(fields[3]);
    {
      std::istringstream rs(fields[4]);
      for (int i = 0; i < 9; ++i) rs >> r.pose.rotation.m(i / 3, i % 3);
      if (!rs) throw std::runtime_error(path + ": malformed rotation: " + line);
    }
    {
      std::istringstream ts(fields[5]);
      for (int i = 0; i < 3; ++i) ts >> r.pose.translation(i);
      if (!ts) throw std::runtime_error(path + ": malformed translation: " + line);
    }
    r.time = std::stod(fields[6]);
    rows.push_back(r);
  }
  return rows;
}

void save_mask_index(const std::string& path, const std::vector<MaskIndexEntry>& entries) {
  nlohmann::json list = nlohmann::json::array();
  for (const MaskIndexEntry& e : entries) {
    nlohmann::json item{{"file", e.file}};
    if (e.obj_id >= 0) item["obj_id"] = e.obj_id;
    if (e.score >= 0.0) item["score"] = e.score;
    list.push_back(item);
  }
  write_json(path, nlohmann::json{{"masks", list}});
}

std::vector<MaskIndexEntry> load_mask_index(const std::string& path) {
  const nlohmann::json j = read_json(path);
  std::vector<MaskIndexEntry> out;
  for (const auto& item : j.at("masks")) {
    MaskIndexEntry e;
    e.file = item.at("file").get<std::string>();
    e.obj_id = item.value("obj_id", -1);
    e.score = item.value("score", -1.0);
    out.push_back(e);
  }
  return out;
}

namespace {

std::string sidecar_path(const std::string& zspf_path) {
  const auto dot = zspf_path.find_last_of('.');
  return (dot == std::string::npos ? zspf_path : zspf_path.substr(0, dot)) + ".json";
}

}  // namespace

void save_scene_embeddings(const std::string& zspf_path, const EmbeddingMatrix& emb) {
  save_feature_file(zspf_path, emb.rows);
  write_json(sidecar_path(zspf_path), nlohmann::json{{"mask_ids", emb.ids}});
}

EmbeddingMatrix load_scene_embeddings(const std::string& zspf_path) {
  Eigen::MatrixXd rows = load_feature_file(zspf_path);
  const nlohmann::json j = read_json(sidecar_path(zspf_path));
  std::vector<int> ids = j.at("mask_ids").get<std::vector<int>>();
  return make_embeddings(std::move(rows), std::move(ids));
}

void save_template_embeddings(const std::string& zspf_path, const TemplateEmbeddings& emb) {
  save_feature_file(zspf_path, emb.rows);
  write_json(sidecar_path(zspf_path),
             nlohmann::json{{"object_ids", emb.object_ids}, {"views", emb.views}});
}

TemplateEmbeddings load_template_embeddings(const std::string& zspf_path) {
  Eigen::MatrixXd rows = load_feature_file(zspf_path);
  const nlohmann::json j = read_json(sidecar_path(zspf_path));
  std::vector<int> ids = j.at("object_ids").get<std::vector<int>>();
  const int views = j.at("views").get<int>();
  return make_template_embeddings(std::move(rows), std::move(ids), views);
}

std::vector<int> list_scene_ids(const std::string& dataset_root) {
  namespace fs = std::filesystem;
  std::vector<int> ids;
  if (!fs::is_directory(dataset_root))
    throw std::runtime_error("dataset root not found: " + dataset_root);
  for (const auto& entry : fs::directory_iterator(dataset_root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() ||
        !std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isdigit(c); }))
      continue;
    ids.push_back(std::stoi(name));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string scene_dir(const std::string& root, int scene_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", scene_id);
  return root + "/" + buf;
}

std::string image_name(int im_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", im_id);
  return buf;
}

std::string model_path(const std::string& models_dir, int obj_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "obj_%06d.ply", obj_id);
  return models_dir + "/" + buf;
}

}  // namespace zspose
