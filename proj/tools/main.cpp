#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "zspose/io/dataset.hpp"
#include "zspose/io/ply.hpp"
#include "zspose/pipeline.hpp"
#include "zspose/procedural.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Zero-shot 6D pose estimation toolkit"};
  app.require_subcommand(1);

  // render-templates
  auto* render = app.add_subcommand("render-templates", "Render template depth views per model");
  std::string render_models, render_out;
  std::size_t render_views = 72;
  render->add_option("--models", render_models, "Model directory (obj_*.ply)")->required();
  render->add_option("--views", render_views, "Number of template views");
  render->add_option("--out", render_out, "Output directory")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate object poses over a dataset");
  std::string est_dataset, est_masks, est_embeddings, est_models, est_out;
  zspose::PipelineConfig config;
  bool est_report_time = false;
  estimate->add_option("--dataset", est_dataset, "Dataset root")->required();
  estimate->add_option("--masks", est_masks, "Instance mask directory")->required();
  estimate->add_option("--embeddings", est_embeddings, "Embedding directory")->required();
  estimate->add_option("--models", est_models, "Model directory")->required();
  estimate->add_option("--threshold", config.similarity_threshold, "Similarity threshold");
  estimate->add_option("--min-mask-area", config.min_mask_area, "Minimum mask area, px");
  estimate->add_option("--model-samples", config.model_samples, "Surface samples per model");
  estimate->add_option("--coarse-k", config.coarse_k, "Coarse region pairs to keep");
  estimate->add_option("--seed", config.seed, "Sampling seed");
  estimate->add_flag("--measure-time", est_report_time,
                     "Write wall-clock runtimes to the CSV (breaks reproducibility)");
  estimate->add_option("--out", est_out, "Results CSV path")->required();

  // eval-pose
  auto* eval_pose = app.add_subcommand("eval-pose", "Score a results CSV against ground truth");
  std::string ep_results, ep_dataset, ep_report, ep_models;
  eval_pose->add_option("--results", ep_results, "Results CSV")->required();
  eval_pose->add_option("--dataset", ep_dataset, "Dataset root")->required();
  eval_pose->add_option("--models", ep_models, "Model directory (default: <dataset>/models)");
  eval_pose->add_option("--report", ep_report, "Report JSON path")->required();

  // eval-seg
  auto* eval_seg = app.add_subcommand("eval-seg", "Score predicted masks against ground truth");
  std::string es_pred, es_gt, es_report;
  eval_seg->add_option("--pred", es_pred, "Predicted mask directory")->required();
  eval_seg->add_option("--gt", es_gt, "Ground-truth mask directory")->required();
  eval_seg->add_option("--report", es_report, "Report JSON path")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic scenes from models");
  std::string sy_models, sy_out;
  zspose::SynthParams sy_params;
  synth->add_option("--models", sy_models, "Model directory")->required();
  synth->add_option("--scenes", sy_params.n_scenes, "Number of scenes")->required();
  synth->add_option("--objects-per-scene", sy_params.objects_per_scene,
                    "Objects per scene (0 = random 1-4)");
  synth->add_option("--seed", sy_params.seed, "Generator seed");
  synth->add_option("--out", sy_out, "Output dataset directory")->required();

  // make-models
  auto* make = app.add_subcommand("make-models", "Write a small procedural model set");
  std::string mm_out;
  int mm_count = 3;
  std::uint64_t mm_seed = 7;
  make->add_option("--out", mm_out, "Output directory")->required();
  make->add_option("--count", mm_count, "Number of models");
  make->add_option("--seed", mm_seed, "Shape seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // validation failure
  }

  if (render->parsed()) {
    zspose::run_render_templates(render_models, render_views, render_out);
    return 0;
  }
  if (estimate->parsed()) {
    std::vector<std::string> warnings;
    const auto estimates =
        zspose::run_estimate(est_dataset, est_masks, est_embeddings, est_models, config,
                             &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    zspose::write_results(est_out, estimates, est_report_time);
    std::cout << estimates.size() << " estimates -> " << est_out << "\n";
    return 0;
  }
  if (eval_pose->parsed()) {
    if (ep_models.empty()) ep_models = ep_dataset + "/models";
    const auto report = zspose::run_eval_pose(ep_results, ep_dataset, ep_models, ep_report);
    std::printf("AR %.4f (VSD %.4f, MSSD %.4f, MSPD %.4f) over %zu GT\n", report.ar,
                report.ar_vsd, report.ar_mssd, report.ar_mspd, report.n_ground_truth);
    return 0;
  }
  if (eval_seg->parsed()) {
    const auto report = zspose::run_eval_seg(es_pred, es_gt, es_report);
    std::printf("AP %.4f, AR@100 %.4f\n", report.ap, report.ar);
    return 0;
  }
  if (synth->parsed()) {
    zspose::synth_scenes(sy_models, sy_out, sy_params);
    std::cout << "wrote " << sy_params.n_scenes << " scenes to " << sy_out << "\n";
    return 0;
  }
  if (make->parsed()) {
    namespace fs = std::filesystem;
    fs::create_directories(mm_out);
    std::map<int, zspose::ModelInfo> info;
    for (int i = 0; i < mm_count; ++i) {
      const int id = i + 1;
      const double radius = 35.0 + 10.0 * (i % 3);
      const auto mesh = zspose::make_bump_blob(radius, 3, 8, mm_seed + i);
      zspose::save_ply(zspose::model_path(mm_out, id), mesh);
      zspose::ModelInfo mi;
      mi.diameter = zspose::mesh_diameter(mesh);
      info[id] = mi;
    }
    zspose::save_models_info(mm_out + "/models_info.json", info);
    std::cout << "wrote " << mm_count << " models to " << mm_out << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
