#include "zspose/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "zspose/io/dataset.hpp"
#include "zspose/io/ply.hpp"
#include "zspose/io/png.hpp"
#include "zspose/mean_shift.hpp"
#include "zspose/parallel.hpp"
#include "zspose/random.hpp"
#include "zspose/renderer.hpp"
#include "zspose/view_sampling.hpp"

namespace zspose {

namespace fs = std::filesystem;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings) warnings->push_back(message);
}

}  // namespace

ObjectModel prepare_model(int id, TriangleMesh mesh, const PipelineConfig& config) {
  ObjectModel model;
  model.id = id;
  model.diameter = mesh_diameter(mesh);
  model.samples = sample_surface(
      mesh, config.model_samples,
      config.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(id + 1));
  model.radius = circumradius(model.samples);
  const double fine = model.radius * config.fine_voxel_factor;
  const double coarse = model.radius * config.coarse_voxel_factor;
  model.hierarchy = build_hierarchy(model.samples, fine, coarse);
  describe(model.hierarchy, fine * config.descriptor_radius_factor,
           coarse * config.descriptor_radius_factor,
           NormalOrientation::away_from_centroid);
  model.mesh = std::move(mesh);
  return model;
}

std::vector<SceneEstimate> estimate_image(const ImageInputs& inputs,
                                          const TemplateEmbeddings& templates,
                                          const std::map<int, ObjectModel>& models,
                                          const PipelineConfig& config,
                                          std::vector<std::string>* warnings) {
  std::vector<SceneEstimate> estimates;
  if (inputs.masks.empty()) return estimates;
  if (inputs.masks.size() != inputs.mask_ids.size())
    throw std::invalid_argument("mask list and mask ids differ in length");

  // Area filter, then keep only embeddings of surviving masks.
  const std::vector<int> kept = filter_mask_indices(inputs.masks, config.min_mask_area);
  if (kept.empty()) return estimates;

  std::map<int, const BitMask*> mask_by_id;
  std::vector<int> kept_ids;
  for (int idx : kept) {
    mask_by_id[inputs.mask_ids[idx]] = &inputs.masks[idx];
    kept_ids.push_back(inputs.mask_ids[idx]);
  }
  std::map<int, int> row_of_mask;
  for (std::size_t r = 0; r < inputs.embeddings.ids.size(); ++r)
    row_of_mask[inputs.embeddings.ids[r]] = static_cast<int>(r);

  Eigen::MatrixXd rows(kept_ids.size(), inputs.embeddings.rows.cols());
  for (std::size_t i = 0; i < kept_ids.size(); ++i) {
    const auto it = row_of_mask.find(kept_ids[i]);
    if (it == row_of_mask.end())
      throw std::runtime_error("no embedding row for mask id " + std::to_string(kept_ids[i]));
    rows.row(static_cast<Eigen::Index>(i)) = inputs.embeddings.rows.row(it->second);
  }
  const EmbeddingMatrix scene_emb = make_embeddings(std::move(rows), kept_ids);

  const SimilarityTensor sim = similarity(scene_emb, templates);
  const std::vector<InstanceAssignment> assignments =
      assign(sim, config.similarity_threshold);

  for (const InstanceAssignment& a : assignments) {
    const auto model_it = models.find(a.object_id);
    if (model_it == models.end()) {
      warn(warnings, "no model loaded for object " + std::to_string(a.object_id));
      continue;
    }
    const ObjectModel& model = model_it->second;
    const auto start = std::chrono::steady_clock::now();

    const PointCloud raw = project_depth(inputs.depth, *mask_by_id.at(a.mask_id));
    if (raw.empty()) {
      warn(warnings, "mask " + std::to_string(a.mask_id) + ": no valid depth pixels");
      continue;
    }

    try {
      // model-prior sampling: bandwidth = object circumradius
      const ClusterResult clusters = mean_shift(raw, model.radius);
      const PointCloud foreground = select_foreground(raw, clusters);

      const double fine = model.radius * config.fine_voxel_factor;
      const double coarse = model.radius * config.coarse_voxel_factor;
      HierarchicalCloud scene_h = build_hierarchy(foreground, fine, coarse);
      describe(scene_h, fine * config.descriptor_radius_factor,
               coarse * config.descriptor_radius_factor, NormalOrientation::toward_origin);

      const auto pairs = coarse_match(model.hierarchy, scene_h, config.coarse_k);
      const CorrespondenceSet corr =
          fine_match(model.hierarchy, scene_h, pairs, config.match);
      if (corr.empty()) {
        warn(warnings, "mask " + std::to_string(a.mask_id) + ": no correspondences");
        continue;
      }

      RegisterParams reg;
      reg.inlier_radius = model.radius * config.inlier_radius_factor;
      const RegistrationResult result = register_clouds(model.hierarchy, scene_h, corr, reg);

      SceneEstimate est;
      est.scene_id = inputs.scene_id;
      est.image_id = inputs.image_id;
      est.object_id = a.object_id;
      est.score = result.score;
      est.pose = result.pose;
      est.runtime = seconds_since(start);
      estimates.push_back(est);
    } catch (const std::invalid_argument& e) {
      warn(warnings, "mask " + std::to_string(a.mask_id) + " (object " +
                         std::to_string(a.object_id) + ") skipped: " + e.what());
    }
  }
  return estimates;
}

namespace {

struct ImageJob {
  int scene_id = 0;
  int im_id = 0;
  std::string depth_path;
  SceneCameraEntry camera;
  std::string mask_dir;
  std::string embedding_path;
};

ImageInputs load_image_inputs(const ImageJob& job) {
  ImageInputs in;
  in.scene_id = job.scene_id;
  in.image_id = job.im_id;
  in.depth = load_depth_png(job.depth_path, job.camera.with_size(0, 0), job.camera.depth_scale);

  const auto index = load_mask_index(job.mask_dir + "/index.json");
  for (std::size_t k = 0; k < index.size(); ++k) {
    in.masks.push_back(load_mask_png(job.mask_dir + "/" + index[k].file));
    in.mask_ids.push_back(static_cast<int>(k));
  }
  in.embeddings = load_scene_embeddings(job.embedding_path);
  return in;
}

}  // namespace

std::vector<SceneEstimate> run_estimate(const std::string& dataset_dir,
                                        const std::string& masks_dir,
                                        const std::string& embeddings_dir,
                                        const std::string& models_dir,
                                        const PipelineConfig& config,
                                        std::vector<std::string>* warnings) {
  const TemplateEmbeddings templates =
      load_template_embeddings(embeddings_dir + "/templates.zspf");

  // Prepare every object the templates reference.
  std::vector<int> object_ids = templates.object_ids;
  std::vector<ObjectModel> prepared(object_ids.size());
  parallel_for(object_ids.size(), [&](std::size_t i) {
    prepared[i] =
        prepare_model(object_ids[i], load_ply(model_path(models_dir, object_ids[i])), config);
  });
  std::map<int, ObjectModel> models;
  for (ObjectModel& m : prepared) models[m.id] = std::move(m);

  std::vector<ImageJob> jobs;
  for (int scene_id : list_scene_ids(dataset_dir)) {
    const std::string sdir = scene_dir(dataset_dir, scene_id);
    const auto cameras = load_scene_camera(sdir + "/scene_camera.json");
    for (const auto& [im_id, camera] : cameras) {
      ImageJob job;
      job.scene_id = scene_id;
      job.im_id = im_id;
      job.depth_path = sdir + "/depth/" + image_name(im_id) + ".png";
      job.camera = camera;
      job.mask_dir = scene_dir(masks_dir, scene_id) + "/" + image_name(im_id);
      job.embedding_path = scene_dir(embeddings_dir, scene_id) + "/" + image_name(im_id) + ".zspf";
      jobs.push_back(job);
    }
  }

  std::vector<std::vector<SceneEstimate>> per_job(jobs.size());
  std::vector<std::vector<std::string>> per_job_warnings(jobs.size());
  std::vector<std::string> per_job_error(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    try {
      const ImageInputs inputs = load_image_inputs(jobs[j]);
      per_job[j] = estimate_image(inputs, templates, models, config, &per_job_warnings[j]);
    } catch (const std::exception& e) {
      per_job_error[j] = e.what();
    }
  });
  for (const std::string& err : per_job_error)
    if (!err.empty()) throw std::runtime_error(err);

  std::vector<SceneEstimate> all;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (const SceneEstimate& e : per_job[j]) all.push_back(e);
    if (warnings)
      for (const std::string& w : per_job_warnings[j]) warnings->push_back(w);
  }
  std::stable_sort(all.begin(), all.end(), [](const SceneEstimate& a, const SceneEstimate& b) {
    return std::tie(a.scene_id, a.image_id, a.object_id) <
           std::tie(b.scene_id, b.image_id, b.object_id);
  });
  return all;
}

void write_results(const std::string& csv_path, const std::vector<SceneEstimate>& estimates,
                   bool report_time) {
  std::vector<ResultRow> rows;
  rows.reserve(estimates.size());
  for (const SceneEstimate& e : estimates) {
    ResultRow r;
    r.scene_id = e.scene_id;
    r.im_id = e.image_id;
    r.obj_id = e.object_id;
    r.score = e.score;
    r.pose = e.pose;
    // wall-clock time breaks run-to-run reproducibility of the CSV, so it is
    // opt-in; -1 marks "not reported"
    r.time = report_time ? e.runtime : -1.0;
    rows.push_back(r);
  }
  save_results_csv(csv_path, rows);
}

namespace {

struct LoadedModel {
  int id = -1;
  TriangleMesh mesh;
  Vec3 center = Vec3::Zero();  // vertex centroid
  double radius = 0.0;         // max vertex distance from center
};

std::vector<int> list_model_ids(const std::string& models_dir) {
  std::vector<int> ids;
  if (!fs::is_directory(models_dir))
    throw std::runtime_error("models directory not found: " + models_dir);
  for (const auto& entry : fs::directory_iterator(models_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("obj_", 0) == 0 && name.size() == 14 && name.substr(10) == ".ply")
      ids.push_back(std::stoi(name.substr(4, 6)));
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw std::runtime_error("no obj_*.ply models in " + models_dir);
  return ids;
}

LoadedModel load_model(const std::string& models_dir, int id) {
  LoadedModel m;
  m.id = id;
  m.mesh = load_ply(model_path(models_dir, id));
  const std::string sidecar =
      model_path(models_dir, id).substr(0, model_path(models_dir, id).size() - 4) +
      "_symmetries.json";
  if (fs::exists(sidecar)) m.mesh.symmetries = load_symmetries_json(sidecar);
  for (const Vec3& v : m.mesh.vertices) m.center += v;
  m.center /= static_cast<double>(m.mesh.vertices.size());
  for (const Vec3& v : m.mesh.vertices) m.radius = std::max(m.radius, (v - m.center).norm());
  return m;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace

void synth_scenes(const std::string& models_dir, const std::string& out_dir,
                  const SynthParams& params) {
  if (params.n_scenes < 1) throw std::invalid_argument("need at least one scene");

  const std::vector<int> model_ids = list_model_ids(models_dir);
  std::vector<LoadedModel> models;
  for (int id : model_ids) models.push_back(load_model(models_dir, id));

  const double depth_scale = 0.1;  // 0.1 mm quantization
  CameraIntrinsics cam;
  cam.fx = cam.fy = params.focal;
  cam.width = params.image_width;
  cam.height = params.image_height;
  cam.cx = (params.image_width - 1) / 2.0;
  cam.cy = (params.image_height - 1) / 2.0;

  fs::create_directories(out_dir);

  // Copy the model set into the dataset so it is self-contained.
  fs::create_directories(out_dir + "/models");
  std::map<int, ModelInfo> models_info;
  const std::string source_info = models_dir + "/models_info.json";
  if (fs::exists(source_info)) models_info = load_models_info(source_info);
  for (const LoadedModel& m : models) {
    fs::copy_file(model_path(models_dir, m.id), model_path(out_dir + "/models", m.id),
                  fs::copy_options::overwrite_existing);
    if (!models_info.count(m.id)) {
      ModelInfo info;
      info.diameter = mesh_diameter(m.mesh);
      info.symmetries = m.mesh.symmetries;
      models_info[m.id] = info;
    }
  }
  save_models_info(out_dir + "/models/models_info.json", models_info);

  // One-hot template embeddings, one view per object.
  TemplateEmbeddings templates;
  templates.views = 1;
  templates.object_ids = model_ids;
  templates.rows = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(model_ids.size()),
                                             static_cast<Eigen::Index>(model_ids.size()));
  fs::create_directories(out_dir + "/embeddings");
  save_template_embeddings(out_dir + "/embeddings/templates.zspf", templates);

  for (int scene = 0; scene < params.n_scenes; ++scene) {
    Rng rng(params.seed * 1000003ull + static_cast<std::uint64_t>(scene));

    int want = params.objects_per_scene > 0
                   ? params.objects_per_scene
                   : 1 + static_cast<int>(uniform_index(rng, 4));
    want = std::min<int>(want, static_cast<int>(models.size()));

    // random distinct subset
    std::vector<int> pick(models.size());
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = static_cast<int>(i);
    for (std::size_t i = pick.size(); i > 1; --i)
      std::swap(pick[i - 1], pick[uniform_index(rng, i)]);
    pick.resize(want);
    std::sort(pick.begin(), pick.end());

    // Rejection-place objects so that neither 3D bounding spheres nor their
    // projections overlap; everything stays fully visible.
    struct Placed {
      int model_index;
      Pose pose;
      Vec3 position;  // centroid in camera space
      double pixel_radius;
      Eigen::Vector2d pixel_center;
    };
    std::vector<Placed> placed;
    for (int mi : pick) {
      const LoadedModel& m = models[mi];
      bool ok = false;
      for (int attempt = 0; attempt < 256 && !ok; ++attempt) {
        const double z = uniform_range(rng, 600.0, 900.0);
        const double pr = cam.fx * m.radius / z;
        const double margin = pr + 8.0;
        if (2 * margin >= cam.width || 2 * margin >= cam.height) continue;
        const Eigen::Vector2d pc(uniform_range(rng, margin, cam.width - margin),
                                 uniform_range(rng, margin, cam.height - margin));
        const Vec3 pos((pc.x() - cam.cx) * z / cam.fx, (pc.y() - cam.cy) * z / cam.fy, z);
        bool clash = false;
        for (const Placed& other : placed) {
          const LoadedModel& om = models[other.model_index];
          if ((pos - other.position).norm() < m.radius + om.radius + 10.0 ||
              (pc - other.pixel_center).norm() < pr + other.pixel_radius + 5.0) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
        const Rotation r = random_rotation(rng);
        placed.push_back({mi, Pose(r, pos - r * m.center), pos, pr, pc});
        ok = true;
      }
      // an impossible fit just drops the object from this scene
    }

    // Per-object renders, then a composed z-buffer for exact visible masks.
    std::vector<RenderedDepth> renders;
    renders.reserve(placed.size());
    for (const Placed& p : placed)
      renders.push_back(render_depth(models[p.model_index].mesh, p.pose, cam));

    DepthImage composed(cam);
    std::vector<int> owner(composed.data.size(), -1);
    for (std::size_t oi = 0; oi < renders.size(); ++oi) {
      for (std::size_t px = 0; px < composed.data.size(); ++px) {
        const double z = renders[oi].depth.data[px];
        if (z <= 0.0) continue;
        if (composed.data[px] == 0.0 || z < composed.data[px]) {
          composed.data[px] = z;
          owner[px] = static_cast<int>(oi);
        }
      }
    }

    const std::string sdir = scene_dir(out_dir, scene);
    fs::create_directories(sdir + "/depth");
    const std::string mdir = scene_dir(out_dir + "/masks", scene) + "/" + image_name(0);
    fs::create_directories(mdir);
    fs::create_directories(scene_dir(out_dir + "/embeddings", scene));

    save_depth_png(sdir + "/depth/" + image_name(0) + ".png", composed, depth_scale);

    SceneCameraEntry cam_entry;
    cam_entry.fx = cam.fx;
    cam_entry.fy = cam.fy;
    cam_entry.cx = cam.cx;
    cam_entry.cy = cam.cy;
    cam_entry.depth_scale = depth_scale;
    save_scene_camera(sdir + "/scene_camera.json", {{0, cam_entry}});

    std::map<int, std::vector<GroundTruthEntry>> gt;
    std::vector<MaskIndexEntry> mask_index;
    Eigen::MatrixXd emb_rows(placed.size(), models.size());
    emb_rows.setZero();
    std::vector<int> emb_ids;
    for (std::size_t oi = 0; oi < placed.size(); ++oi) {
      const Placed& p = placed[oi];
      BitMask visible(cam.width, cam.height);
      std::size_t visible_count = 0;
      for (std::size_t px = 0; px < owner.size(); ++px)
        if (owner[px] == static_cast<int>(oi)) {
          visible.data[px] = 1;
          ++visible_count;
        }
      if (visible_count == 0) continue;

      gt[0].push_back({models[p.model_index].id, p.pose});
      const std::string mask_file = std::to_string(mask_index.size()) + ".png";
      save_mask_png(mdir + "/" + mask_file, visible);
      mask_index.push_back({mask_file, models[p.model_index].id, -1.0});
      emb_rows(static_cast<Eigen::Index>(mask_index.size() - 1), p.model_index) = 1.0;
      emb_ids.push_back(static_cast<int>(mask_index.size() - 1));
    }
    save_scene_gt(sdir + "/scene_gt.json", gt);
    save_mask_index(mdir + "/index.json", mask_index);
    emb_rows.conservativeResize(static_cast<Eigen::Index>(emb_ids.size()), Eigen::NoChange);
    save_scene_embeddings(scene_dir(out_dir + "/embeddings", scene) + "/" + image_name(0) + ".zspf",
                          make_embeddings(emb_rows, emb_ids));
  }
}

void run_render_templates(const std::string& models_dir, std::size_t views,
                          const std::string& out_dir) {
  const std::vector<Rotation> rotations = sample_so3(views);

  // wide template camera: everything within 3 circumradii stays in frame
  CameraIntrinsics cam;
  cam.width = cam.height = 512;
  cam.fx = cam.fy = 300.0;
  cam.cx = cam.cy = 255.5;
  const double depth_scale = 0.1;

  for (int id : list_model_ids(models_dir)) {
    const LoadedModel m = load_model(models_dir, id);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "obj_%06d", id);
    const std::string obj_dir = out_dir + "/" + buf;
    fs::create_directories(obj_dir);

    ViewSet set;
    set.rotations = rotations;
    set.distance = 3.0 * m.radius;
    save_views_json(obj_dir + "/views.json", set.rotations);
    save_depth_metadata(obj_dir + "/metadata.json", cam, depth_scale);

    const std::vector<Pose> poses = template_poses(set, m.center);
    std::vector<RenderedDepth> renders(poses.size());
    parallel_for(poses.size(), [&](std::size_t v) {
      renders[v] = render_depth(m.mesh, poses[v], cam);
    });
    for (std::size_t v = 0; v < poses.size(); ++v)
      save_depth_png(obj_dir + "/" + image_name(static_cast<int>(v)) + ".png",
                     renders[v].depth, depth_scale);
  }
}

ArReport run_eval_pose(const std::string& results_csv, const std::string& dataset_dir,
                       const std::string& models_dir, const std::string& report_path,
                       const ThresholdGrids& grids) {
  const std::vector<ResultRow> rows = load_results_csv(results_csv);

  const auto models_info = load_models_info(models_dir + "/models_info.json");
  std::map<int, TriangleMesh> meshes;
  std::map<int, double> diameters;
  for (const auto& [id, info] : models_info) {
    TriangleMesh mesh = load_ply(model_path(models_dir, id));
    mesh.symmetries = info.symmetries;
    meshes[id] = std::move(mesh);
    diameters[id] = info.diameter;
  }

  // Group predictions by (scene, image, object), high scores first.
  std::map<std::tuple<int, int, int>, std::vector<const ResultRow*>> grouped;
  for (const ResultRow& r : rows) grouped[{r.scene_id, r.im_id, r.obj_id}].push_back(&r);
  for (auto& [key, preds] : grouped)
    std::stable_sort(preds.begin(), preds.end(),
                     [](const ResultRow* a, const ResultRow* b) { return a->score > b->score; });

  std::vector<PoseErrorRecord> records;
  std::size_t total_gt = 0;
  std::map<int, std::size_t> per_object_gt;
  int image_width = 640;

  for (int scene_id : list_scene_ids(dataset_dir)) {
    const std::string sdir = scene_dir(dataset_dir, scene_id);
    const auto cameras = load_scene_camera(sdir + "/scene_camera.json");
    const auto gt = load_scene_gt(sdir + "/scene_gt.json");
    for (const auto& [im_id, entries] : gt) {
      const auto cam_it = cameras.find(im_id);
      if (cam_it == cameras.end())
        throw std::runtime_error("no camera for image " + std::to_string(im_id) + " in " + sdir);
      const DepthImage depth =
          load_depth_png(sdir + "/depth/" + image_name(im_id) + ".png",
                         cam_it->second.with_size(0, 0), cam_it->second.depth_scale);
      image_width = depth.width();

      // ground truth grouped by object id for greedy matching
      std::map<int, std::vector<const GroundTruthEntry*>> gt_by_object;
      for (const GroundTruthEntry& e : entries) {
        gt_by_object[e.obj_id].push_back(&e);
        ++total_gt;
        ++per_object_gt[e.obj_id];
      }

      for (const auto& [obj_id, gt_list] : gt_by_object) {
        const auto mesh_it = meshes.find(obj_id);
        if (mesh_it == meshes.end())
          throw std::runtime_error("no model for object " + std::to_string(obj_id));
        const TriangleMesh& mesh = mesh_it->second;
        const double diameter = diameters.at(obj_id);

        const auto pred_it = grouped.find({scene_id, im_id, obj_id});
        if (pred_it == grouped.end()) continue;

        std::vector<double> taus;
        for (double f : grids.vsd_tau_fractions) taus.push_back(f * diameter);

        std::vector<bool> gt_used(gt_list.size(), false);
        for (const ResultRow* pred : pred_it->second) {
          // best remaining ground truth by surface distance
          int best_gt = -1;
          double best_err = std::numeric_limits<double>::infinity();
          for (std::size_t g = 0; g < gt_list.size(); ++g) {
            if (gt_used[g]) continue;
            const double err = mssd(pred->pose, gt_list[g]->pose, mesh);
            if (err < best_err) {
              best_err = err;
              best_gt = static_cast<int>(g);
            }
          }
          if (best_gt < 0) break;  // every ground truth already matched
          gt_used[best_gt] = true;

          PoseErrorRecord rec;
          rec.scene_id = scene_id;
          rec.image_id = im_id;
          rec.object_id = obj_id;
          rec.e_mssd = best_err;
          rec.e_vsd =
              vsd_multi(pred->pose, gt_list[best_gt]->pose, mesh, depth, taus, 15.0);
          try {
            rec.e_mspd = mspd(pred->pose, gt_list[best_gt]->pose, mesh, depth.intrinsics);
          } catch (const std::invalid_argument&) {
            rec.e_mspd = std::numeric_limits<double>::infinity();
          }
          records.push_back(std::move(rec));
        }
      }
    }
  }

  const ArReport report =
      pose_ar(records, diameters, image_width, total_gt, grids, per_object_gt);

  nlohmann::json per_object = nlohmann::json::object();
  for (const auto& [obj, ar] : report.per_object_ar) per_object[std::to_string(obj)] = ar;
  write_json_file(report_path,
                  nlohmann::json{{"ar", report.ar},
                                 {"ar_vsd", report.ar_vsd},
                                 {"ar_mssd", report.ar_mssd},
                                 {"ar_mspd", report.ar_mspd},
                                 {"n_ground_truth", report.n_ground_truth},
                                 {"n_matched_records", report.n_records},
                                 {"n_predictions", rows.size()},
                                 {"per_object_ar", per_object}});
  return report;
}

namespace {

std::vector<std::pair<int, int>> list_mask_images(const std::string& root) {
  std::vector<std::pair<int, int>> keys;
  for (int scene_id : list_scene_ids(root)) {
    const std::string sdir = scene_dir(root, scene_id);
    for (const auto& entry : fs::directory_iterator(sdir)) {
      if (!entry.is_directory()) continue;
      const std::string name = entry.path().filename().string();
      if (name.size() == 6 &&
          std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isdigit(c); }))
        keys.emplace_back(scene_id, std::stoi(name));
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

SegReport run_eval_seg(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& report_path) {
  std::vector<ScoredMask> predictions;
  for (const auto& [scene_id, im_id] : list_mask_images(pred_dir)) {
    const std::string dir = scene_dir(pred_dir, scene_id) + "/" + image_name(im_id);
    for (const MaskIndexEntry& e : load_mask_index(dir + "/index.json")) {
      ScoredMask m;
      m.scene_id = scene_id;
      m.image_id = im_id;
      m.object_id = e.obj_id;
      m.score = e.score >= 0.0 ? e.score : 1.0;
      m.mask = load_mask_png(dir + "/" + e.file);
      predictions.push_back(std::move(m));
    }
  }

  std::vector<GroundTruthMask> ground_truth;
  for (const auto& [scene_id, im_id] : list_mask_images(gt_dir)) {
    const std::string dir = scene_dir(gt_dir, scene_id) + "/" + image_name(im_id);
    for (const MaskIndexEntry& e : load_mask_index(dir + "/index.json")) {
      GroundTruthMask m;
      m.scene_id = scene_id;
      m.image_id = im_id;
      m.object_id = e.obj_id;
      m.mask = load_mask_png(dir + "/" + e.file);
      ground_truth.push_back(std::move(m));
    }
  }

  const SegReport report = seg_ap(predictions, ground_truth);

  nlohmann::json per_object = nlohmann::json::object();
  for (const auto& [obj, ap] : report.per_object_ap) per_object[std::to_string(obj)] = ap;
  write_json_file(report_path, nlohmann::json{{"ap", report.ap},
                                              {"ar", report.ar},
                                              {"per_threshold_ap", report.per_threshold_ap},
                                              {"per_object_ap", per_object}});
  return report;
}

}  // namespace zspose
