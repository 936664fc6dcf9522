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

#include "seqview/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "seqview/error.hpp"

namespace seqview {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                      "'");
  }
  return out;
}

std::string real_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

AttentionMode parse_attention_mode(std::string_view value) {
  if (value == "projected") return AttentionMode::projected;
  if (value == "literal") return AttentionMode::literal;
  throw ConfigError("invalid value '" + std::string(value) + "' for key 'attention_mode'");
}

}  // namespace

std::string_view attention_mode_name(AttentionMode mode) {
  return mode == AttentionMode::literal ? "literal" : "projected";
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto& m = cfg.model;
    auto& t = cfg.train;
    if (key == "variant") {
      try {
        m.variant = parse_variant(value);
      } catch (const ConfigError&) {
        throw ConfigError("invalid value '" + std::string(value) + "' for key 'variant'");
      }
    } else if (key == "d") {
      m.d = parse_number<std::size_t>(key, value);
    } else if (key == "heads") {
      m.heads = parse_number<std::size_t>(key, value);
    } else if (key == "layers") {
      m.layers = parse_number<std::size_t>(key, value);
    } else if (key == "freq_pos") {
      m.n_freq_pos = parse_number<std::size_t>(key, value);
    } else if (key == "freq_dir") {
      m.n_freq_dir = parse_number<std::size_t>(key, value);
    } else if (key == "attention_mode") {
      m.attention_mode = parse_attention_mode(value);
    } else if (key == "seed") {
      m.seed = parse_number<std::uint64_t>(key, value);
      t.seed = m.seed;
    } else if (key == "n_p") {
      t.n_p = parse_number<std::size_t>(key, value);
    } else if (key == "n_r") {
      t.n_r = parse_number<std::size_t>(key, value);
    } else if (key == "lr0") {
      t.lr0 = parse_number<double>(key, value);
    } else if (key == "decay") {
      t.decay = parse_number<double>(key, value);
    } else if (key == "iterations") {
      t.iterations = parse_number<std::size_t>(key, value);
    } else if (key == "near") {
      t.near = parse_number<double>(key, value);
    } else if (key == "far") {
      t.far = parse_number<double>(key, value);
    } else if (key == "eval_every") {
      t.eval_every = parse_number<std::size_t>(key, value);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  }
  cfg.model.validate();
  cfg.train.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_text(const RunConfig& config) {
  const auto& m = config.model;
  const auto& t = config.train;
  std::ostringstream os;
  os << "variant = " << variant_name(m.variant) << '\n'
     << "d = " << m.d << '\n'
     << "heads = " << m.heads << '\n'
     << "layers = " << m.layers << '\n'
     << "freq_pos = " << m.n_freq_pos << '\n'
     << "freq_dir = " << m.n_freq_dir << '\n'
     << "attention_mode = " << attention_mode_name(m.attention_mode) << '\n'
     << "seed = " << m.seed << '\n'
     << "n_p = " << t.n_p << '\n'
     << "n_r = " << t.n_r << '\n'
     << "lr0 = " << real_text(t.lr0) << '\n'
     << "decay = " << real_text(t.decay) << '\n'
     << "iterations = " << t.iterations << '\n'
     << "near = " << real_text(t.near) << '\n'
     << "far = " << real_text(t.far) << '\n'
     << "eval_every = " << t.eval_every << '\n';
  return os.str();
}

}  // namespace seqview
