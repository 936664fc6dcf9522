/*
 * Copyright 2026 The seqview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "seqview/checkpoint.hpp"
#include "seqview/config.hpp"
#include "seqview/error.hpp"
#include "seqview/experiment.hpp"
#include "seqview/gradcheck.hpp"
#include "seqview/image.hpp"
#include "seqview/metrics.hpp"
#include "seqview/render.hpp"
#include "seqview/scene.hpp"
#include "seqview/training.hpp"

namespace seqview::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

Scene open_scene(const std::string& source, double near, double far) {
  if (source == "toy") {
    Scene scene = toy_scene();
    scene.near = near;
    scene.far = far;
    return scene;
  }
  return load_blender_dataset(source, near, far);
}

struct TrainArgs {
  std::string config;
  std::string out;
  std::string log;
  std::string scene = "toy";
  std::string resume;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const RunConfig config = load_run_config(a.config);
  const Scene scene = open_scene(a.scene, config.train.near, config.train.far);

  NeRFAModel model;
  TrainState state;
  if (a.resume.empty()) {
    model = NeRFAModel::create(config.model);
    state.adam = AdamState::for_parameters(model.parameters());
  } else {
    LoadedCheckpoint ckpt = load_checkpoint(a.resume);
    if (!(ckpt.config.model == config.model)) {
      throw ConfigError("resume checkpoint was trained with a different model config");
    }
    if (!ckpt.state) throw FormatError("resume checkpoint has no optimizer state");
    model = std::move(ckpt.model);
    state = std::move(*ckpt.state);
  }

  const TrainLog log = train(model, scene, config.train, state);
  save_checkpoint(model, config, &state, a.out);
  const fs::path log_path = a.log.empty() ? fs::path(a.out + ".csv") : fs::path(a.log);
  log.write_csv(log_path);

  if (!log.records.empty()) {
    const TrainRecord& last = log.records.back();
    out << "step " << last.step << "  loss " << fixed(last.loss, 6) << "  train psnr "
        << fixed(last.psnr, 3) << " dB\n";
  }
  out << "checkpoint " << a.out << "\nlog " << log_path.string() << "\n";
  return kExitOk;
}

struct RenderArgs {
  std::string ckpt;
  std::string scene = "toy";
  std::optional<std::size_t> views;
  std::string outdir = ".";
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const LoadedCheckpoint ckpt = load_checkpoint(a.ckpt);
  const Scene scene = open_scene(a.scene, ckpt.config.train.near, ckpt.config.train.far);
  const std::size_t n = a.views.value_or(scene.views.size());
  if (n > scene.views.size()) {
    throw BoundsError("requested " + std::to_string(n) + " views but the scene has " +
                      std::to_string(scene.views.size()));
  }
  fs::create_directories(a.outdir);
  const RenderSettings settings = render_settings(ckpt.config.train);
  for (std::size_t i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "view_%03zu.png", i);
    const fs::path path = fs::path(a.outdir) / name;
    write_image(render_view(ckpt.model, scene.views[i].camera, settings), path);
    out << path.string() << "\n";
  }
  return kExitOk;
}

struct EvalArgs {
  std::string ckpt;
  std::string scene = "toy";
  std::string split = "all";
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const LoadedCheckpoint ckpt = load_checkpoint(a.ckpt);
  const Scene scene = open_scene(a.scene, ckpt.config.train.near, ckpt.config.train.far);
  const RenderSettings settings = render_settings(ckpt.config.train);

  out << "view  split  psnr     ssim\n";
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    const View& view = scene.views[i];
    if (a.split != "all" && a.split != split_name(view.split)) continue;
    const Image img = render_view(ckpt.model, view.camera, settings);
    const double p = psnr(img, view.image);
    const double s = ssim(img, view.image);
    psnr_sum += p;
    ssim_sum += s;
    ++count;
    char line[96];
    std::snprintf(line, sizeof(line), "%4zu  %-5s  %7.3f  %.4f\n", i,
                  std::string(split_name(view.split)).c_str(), p, s);
    out << line;
  }
  if (count == 0) throw ConfigError("split '" + a.split + "' selects no views");
  const double n = static_cast<double>(count);
  out << "mean         " << fixed(psnr_sum / n, 3) << "  " << fixed(ssim_sum / n, 4) << "\n";
  return kExitOk;
}

struct AblateArgs {
  std::string config;
  std::optional<std::size_t> iterations;
};

int cmd_ablate(const AblateArgs& a, std::ostream& out) {
  RunConfig base = a.config.empty() ? toy_run_config() : load_run_config(a.config);
  if (a.iterations) base.train.iterations = *a.iterations;
  base.train.validate();
  const auto rows = run_ablation(base, toy_scene(), ablation_variants());
  out << format_ablation_table(rows);
  return kExitOk;
}

int cmd_gradcheck(double tolerance, std::ostream& out) {
  bool ok = true;
  for (const auto& r : run_gradient_suite(tolerance)) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-4s %-26s %.3e  (%s)\n", r.passed ? "ok" : "FAIL",
                  r.name.c_str(), r.rel_error, r.worst_leaf.c_str());
    out << line;
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitNumerical;
}

struct MaddsArgs {
  std::vector<std::size_t> n_p{2, 4, 8, 16, 32, 64, 128};
  std::size_t n_r = 64;
  std::size_t d = 64;
  std::size_t layers = 1;
};

int cmd_madds(const MaddsArgs& a, std::ostream& out) {
  ModelConfig config;
  config.d = a.d;
  config.heads = 1;
  config.layers = a.layers;
  config.validate();
  out << "n_p  n_r  global               ray                  pixel        global/ray\n";
  for (std::size_t np : a.n_p) {
    const MaddCounters c = count_madds(config, np, a.n_r);
    char line[160];
    std::snprintf(line, sizeof(line), "%-4zu %-4zu %-20llu %-20llu %-12llu %llu\n", np, a.n_r,
                  static_cast<unsigned long long>(c.global),
                  static_cast<unsigned long long>(c.ray),
                  static_cast<unsigned long long>(c.pixel),
                  static_cast<unsigned long long>(c.ray == 0 ? 0 : c.global / c.ray));
    out << line;
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e)) {
    return kExitIo;
  }
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequence-to-sequence view synthesis engine", "seqview"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a config file");
  train_cmd->add_option("--config", train_args.config, "Run config file")->required();
  train_cmd->add_option("--out", train_args.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", train_args.log, "Training log CSV (default <out>.csv)");
  train_cmd->add_option("--scene", train_args.scene, "'toy' or a Blender dataset directory");
  train_cmd->add_option("--resume", train_args.resume, "Continue from a checkpoint");

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render scene views to PNG files");
  render_cmd->add_option("--ckpt", render_args.ckpt, "Checkpoint path")->required();
  render_cmd->add_option("--scene", render_args.scene, "'toy' or a Blender dataset directory");
  render_cmd->add_option("--views", render_args.views, "Render the first N views")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--outdir", render_args.outdir, "Output directory");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "PSNR and SSIM per view");
  eval_cmd->add_option("--ckpt", eval_args.ckpt, "Checkpoint path")->required();
  eval_cmd->add_option("--scene", eval_args.scene, "'toy' or a Blender dataset directory");
  eval_cmd->add_option("--split", eval_args.split, "train, val, test or all")
      ->check(CLI::IsMember({"train", "val", "test", "all"}));

  AblateArgs ablate_args;
  auto* ablate_cmd = app.add_subcommand("ablate", "Train every variant on the toy scene");
  ablate_cmd->add_option("--config", ablate_args.config, "Base run config (default: toy)");
  ablate_cmd->add_option("--iterations", ablate_args.iterations, "Override iteration count")
      ->check(CLI::PositiveNumber);

  double tolerance = 1e-4;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient suite");
  grad_cmd->add_option("--tolerance", tolerance, "Relative error bound")
      ->check(CLI::PositiveNumber);

  MaddsArgs madds_args;
  auto* madds_cmd = app.add_subcommand("madds", "Attention multiply-add counts per stage");
  madds_cmd->add_option("--n-p", madds_args.n_p, "Rays per batch");
  madds_cmd->add_option("--n-r", madds_args.n_r, "Samples per ray")->check(CLI::PositiveNumber);
  madds_cmd->add_option("--d", madds_args.d, "Feature width")->check(CLI::PositiveNumber);
  madds_cmd->add_option("--layers", madds_args.layers, "Blocks per stage")
      ->check(CLI::PositiveNumber);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      app.get_subcommands([&](const CLI::App* sub) { return sub->check_name(args[0]); })
          .empty()) {
    err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, out);
    if (*render_cmd) return cmd_render(render_args, out);
    if (*eval_cmd) return cmd_eval(eval_args, out);
    if (*ablate_cmd) return cmd_ablate(ablate_args, out);
    if (*grad_cmd) return cmd_gradcheck(tolerance, out);
    if (*madds_cmd) return cmd_madds(madds_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace seqview::cli
