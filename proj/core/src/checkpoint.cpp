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

#include "seqview/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "seqview/error.hpp"

namespace seqview {

namespace {

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void section(const std::string& name, std::span<const double> values) {
    u32(static_cast<std::uint32_t>(name.size()));
    bytes(name.data(), name.size());
    u64(values.size());
    for (double v : values) u64(std::bit_cast<std::uint64_t>(v));
  }
  const std::vector<char>& data() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> data) : buf_(std::move(data)) {}

  bool at_end() const { return pos_ == buf_.size(); }
  std::size_t remaining() const { return buf_.size() - pos_; }

  void need(std::size_t n, const char* field) const {
    if (remaining() < n) {
      throw FormatError(std::string("checkpoint truncated while reading ") + field);
    }
  }
  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* field) {
    need(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
    return v;
  }
  std::string text(std::size_t n, const char* field) {
    need(n, field);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }

 private:
  unsigned char byte() { return static_cast<unsigned char>(buf_[pos_++]); }

  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void save_checkpoint(const NeRFAModel& model, const RunConfig& config, const TrainState* state,
                     const std::filesystem::path& path) {
  if (!(config.model == model.config)) {
    throw ContractError("checkpoint config does not describe the model being saved");
  }
  Writer w;
  w.bytes(kCheckpointMagic, 4);
  w.u32(kCheckpointVersion);
  const std::string text = to_text(config);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text.data(), text.size());

  const ParameterList params = model.parameters();
  for (const auto& p : params) w.section(p.name, p.tensor.values());
  const double step = state ? static_cast<double>(state->step) : 0.0;
  w.section("train.step", std::span<const double>(&step, 1));
  if (state && !state->adam.m.empty()) {
    if (state->adam.m.size() != params.size()) {
      throw ContractError("optimizer state does not match model parameters");
    }
    const double adam_step = static_cast<double>(state->adam.step);
    w.section("adam.step", std::span<const double>(&adam_step, 1));
    for (std::size_t i = 0; i < params.size(); ++i) {
      w.section("adam.m." + params[i].name, state->adam.m[i]);
      w.section("adam.v." + params[i].name, state->adam.v[i]);
    }
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    if (!out) throw IoError("cannot write checkpoint " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write checkpoint " + path.string() + ": " + ec.message());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  Reader r(read_file(path));
  if (r.text(4, "magic") != std::string(kCheckpointMagic, 4)) {
    throw FormatError("checkpoint magic is not NRFA");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t config_len = r.u32("config length");
  const std::string config_text = r.text(config_len, "config text");
  RunConfig config;
  try {
    config = parse_run_config(config_text);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint config text is invalid: ") + e.what());
  }

  std::map<std::string, std::vector<double>> sections;
  while (!r.at_end()) {
    const std::uint32_t name_len = r.u32("section name length");
    const std::string name = r.text(name_len, "section name");
    const std::uint64_t count = r.u64("section element count");
    if (count > r.remaining() / 8) {
      throw FormatError("section '" + name + "' element count " + std::to_string(count) +
                        " exceeds the remaining file size");
    }
    std::vector<double> values(count);
    for (auto& v : values) v = std::bit_cast<double>(r.u64("section data"));
    if (!sections.emplace(name, std::move(values)).second) {
      throw FormatError("duplicate checkpoint section '" + name + "'");
    }
  }

  // Expected layout comes from the config alone; nothing is handed out
  // until every section checks out.
  NeRFAModel model = NeRFAModel::create(config.model);
  const ParameterList params = model.parameters();
  auto expect = [&](const std::string& name, std::size_t count) -> std::vector<double>& {
    auto it = sections.find(name);
    if (it == sections.end()) throw FormatError("checkpoint is missing section '" + name + "'");
    if (it->second.size() != count) {
      throw FormatError("section '" + name + "' has " + std::to_string(it->second.size()) +
                        " elements, expected " + std::to_string(count));
    }
    return it->second;
  };
  std::size_t consumed = 0;
  for (const auto& p : params) {
    expect(p.name, p.tensor.numel());
    ++consumed;
  }
  const double step = expect("train.step", 1)[0];
  ++consumed;
  const bool has_adam = sections.count("adam.step") > 0;
  if (has_adam) {
    expect("adam.step", 1);
    ++consumed;
    for (const auto& p : params) {
      expect("adam.m." + p.name, p.tensor.numel());
      expect("adam.v." + p.name, p.tensor.numel());
      consumed += 2;
    }
  }
  if (consumed != sections.size()) throw FormatError("checkpoint has unexpected sections");

  for (const auto& p : params) {
    Tensor t = p.tensor;
    const auto& src = sections[p.name];
    std::copy(src.begin(), src.end(), t.mutable_values().begin());
  }
  LoadedCheckpoint out{config, std::move(model), std::nullopt};
  if (has_adam) {
    TrainState state;
    state.step = static_cast<std::size_t>(step);
    state.adam.step = static_cast<std::uint64_t>(sections["adam.step"][0]);
    for (const auto& p : params) {
      state.adam.m.push_back(std::move(sections["adam.m." + p.name]));
      state.adam.v.push_back(std::move(sections["adam.v." + p.name]));
    }
    out.state = std::move(state);
  }
  return out;
}

}  // namespace seqview
