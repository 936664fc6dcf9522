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

#include "seqview/training.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "seqview/error.hpp"
#include "seqview/metrics.hpp"
#include "seqview/ops.hpp"
#include "seqview/random.hpp"

namespace seqview {

namespace {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Colors of the sampled pixels, [n, 3].
Tensor gather_colors(const Image& image, const std::vector<PixelId>& pixels) {
  std::vector<double> out(pixels.size() * 3);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) out[i * 3 + c] = image.at(pixels[i].row, pixels[i].col, c);
  }
  return Tensor({pixels.size(), 3}, std::move(out));
}

std::vector<PixelId> sample_pixels(const Image& image, std::size_t count, Rng& rng) {
  const std::size_t total = image.height * image.width;
  std::vector<PixelId> pixels;
  pixels.reserve(count);
  if (count <= total) {
    // Partial Fisher-Yates: distinct pixels.
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + rng.index(total - i)]);
      pixels.push_back({pool[i] / image.width, pool[i] % image.width});
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t k = rng.index(total);
      pixels.push_back({k / image.width, k % image.width});
    }
  }
  return pixels;
}

}  // namespace

void TrainConfig::validate() const {
  if (n_p < 1) throw ConfigError("n_p must be at least 1");
  if (n_r < 1) throw ConfigError("n_r must be at least 1");
  if (!(lr0 > 0.0)) throw ConfigError("lr0 must be positive");
  if (!(decay >= 0.0)) throw ConfigError("decay must be nonnegative");
  if (!(near >= 0.0) || !(near < far)) throw ConfigError("need 0 <= near < far");
  if (eval_every < 1) throw ConfigError("eval_every must be at least 1");
}

AdamState AdamState::for_parameters(const ParameterList& params) {
  AdamState state;
  for (const auto& p : params) {
    state.m.emplace_back(p.tensor.numel(), 0.0);
    state.v.emplace_back(p.tensor.numel(), 0.0);
  }
  return state;
}

std::string TrainLog::to_csv() const {
  std::string out = "step,loss,lr,psnr\n";
  for (const auto& r : records) {
    out += std::to_string(r.step) + "," + format_real(r.loss) + "," + format_real(r.lr) + "," +
           format_real(r.psnr) + "\n";
  }
  return out;
}

void TrainLog::write_csv(const std::filesystem::path& path) const {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_csv();
    if (!out) throw IoError("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write " + path.string() + ": " + ec.message());
}

Tensor l2_loss(const Tensor& colors, const Tensor& target) {
  if (colors.shape() != target.shape() || colors.rank() != 2 || colors.dim(1) != 3) {
    throw ShapeError("l2_loss: predictions " + shape_string(colors.shape()) + " vs targets " +
                     shape_string(target.shape()));
  }
  Tensor diff = sub(colors, target);
  return scale(sum_all(mul(diff, diff)), 1.0 / static_cast<double>(colors.dim(0)));
}

void adam_step(const ParameterList& params, AdamState& state, double lr) {
  if (state.m.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state has " + std::to_string(state.m.size()) +
                     " slots for " + std::to_string(params.size()) + " parameters");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(AdamState::beta1, t);
  const double correction2 = 1.0 - std::pow(AdamState::beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor tensor = params[i].tensor;
    auto values = tensor.mutable_values();
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (m.size() != values.size()) {
      throw ShapeError("adam_step: moment size mismatch for " + params[i].name);
    }
    const bool has_grad = tensor.has_grad();
    const auto grad = tensor.grad();
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double g = has_grad ? grad[j] : 0.0;
      m[j] = AdamState::beta1 * m[j] + (1.0 - AdamState::beta1) * g;
      v[j] = AdamState::beta2 * v[j] + (1.0 - AdamState::beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      values[j] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::eps);
    }
  }
}

double lr_schedule(double lr0, double decay, std::size_t step) {
  return lr0 * std::exp(-decay * static_cast<double>(step));
}

RenderSettings render_settings(const TrainConfig& config) {
  return {config.near, config.far, config.n_r, config.n_p};
}

double mean_psnr(const NeRFAModel& model, const Scene& scene, const std::vector<std::size_t>& views,
                 const RenderSettings& settings) {
  if (views.empty()) return 0.0;
  double total = 0.0;
  for (auto idx : views) {
    const auto& view = scene.views.at(idx);
    total += psnr(render_view(model, view.camera, settings), view.image);
  }
  return total / static_cast<double>(views.size());
}

TrainLog train(NeRFAModel& model, const Scene& scene, const TrainConfig& config,
               TrainState& state) {
  config.validate();
  scene.validate();
  const ParameterList params = model.parameters();
  if (state.adam.m.empty()) state.adam = AdamState::for_parameters(params);
  if (state.adam.m.size() != params.size() || state.adam.v.size() != params.size()) {
    throw ContractError("optimizer state has " + std::to_string(state.adam.m.size()) +
                        " moments for " + std::to_string(params.size()) + " parameters");
  }
  const auto train_views = scene.indices(Split::train);
  const RenderSettings eval_settings = render_settings(config);

  TrainLog log;
  for (std::size_t step = state.step; step < config.iterations; ++step) {
    Rng rng(mix_seed(config.seed, step));
    const View& view = scene.views[train_views[rng.index(train_views.size())]];
    const auto pixels = sample_pixels(view.image, config.n_p, rng);
    const RayPointBatch batch =
        sample_ray_points(generate_rays(view.camera, pixels), config.near, config.far, config.n_r,
                          Sampling::jittered(rng.next_u64()));

    for (const auto& p : params) {
      Tensor t = p.tensor;
      t.zero_grad();
    }
    const Tensor loss = l2_loss(forward(model, batch), gather_colors(view.image, pixels));
    const double loss_value = loss.item();
    if (!std::isfinite(loss_value)) {
      throw NumericalError("non-finite loss at step " + std::to_string(step));
    }
    backward(loss);
    const double lr = lr_schedule(config.lr0, config.decay, step);
    adam_step(params, state.adam, lr);
    state.step = step + 1;

    if (state.step % config.eval_every == 0 || state.step == config.iterations) {
      log.records.push_back(
          {state.step, loss_value, lr, mean_psnr(model, scene, train_views, eval_settings)});
    }
  }
  return log;
}

TrainLog train(NeRFAModel& model, const Scene& scene, const TrainConfig& config) {
  TrainState state;
  return train(model, scene, config, state);
}

}  // namespace seqview
