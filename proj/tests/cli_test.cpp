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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "seqview/checkpoint.hpp"
#include "test_util.hpp"

namespace seqview {
namespace {

using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_files(const std::filesystem::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

constexpr const char* kToyConfig = R"(variant = nerfa
d = 8
heads = 2
layers = 1
freq_pos = 2
freq_dir = 1
seed = 5
n_p = 16
n_r = 8
lr0 = 0.002
decay = 0.0005
iterations = 6
eval_every = 3
)";

struct CliFixture : ::testing::Test {
  TempDir dir{"cli"};
  std::string config_path() {
    const auto path = dir / "toy.cfg";
    if (!std::filesystem::exists(path)) std::ofstream(path) << kToyConfig;
    return path.string();
  }
  std::string ckpt() { return (dir / "ckpt").string(); }
};

TEST_F(CliFixture, TrainWritesCheckpointAndLog) {
  const Result r = run({"train", "--config", config_path(), "--out", ckpt()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(ckpt()));
  ASSERT_TRUE(std::filesystem::exists(ckpt() + ".csv"));
  std::ifstream log(ckpt() + ".csv");
  std::string header, line;
  std::getline(log, header);
  EXPECT_EQ(header, "step,loss,lr,psnr");
  std::size_t rows = 0;
  while (std::getline(log, line)) rows += !line.empty();
  EXPECT_EQ(rows, 2u);
}

TEST_F(CliFixture, TrainingTwiceIsBitwiseIdentical) {
  ASSERT_EQ(run({"train", "--config", config_path(), "--out", ckpt()}).code, 0);
  const auto other = (dir / "again").string();
  ASSERT_EQ(run({"train", "--config", config_path(), "--out", other, "--log", other + ".log"}).code, 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(ckpt()), slurp(other));
  EXPECT_EQ(slurp(ckpt() + ".csv"), slurp(other + ".log"));
}

TEST_F(CliFixture, ResumeContinuesFromCheckpoint) {
  ASSERT_EQ(run({"train", "--config", config_path(), "--out", ckpt()}).code, 0);
  std::ofstream(dir / "longer.cfg") << kToyConfig << "iterations = 9\n";
  const Result r = run({"train", "--config", (dir / "longer.cfg").string(), "--out",
                        (dir / "resumed").string(), "--resume", ckpt()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_checkpoint(dir / "resumed").state->step, 9u);
}

TEST_F(CliFixture, RenderWritesRequestedViews) {
  ASSERT_EQ(run({"train", "--config", config_path(), "--out", ckpt()}).code, 0);
  const auto out = dir / "frames";
  const Result r = run({"render", "--ckpt", ckpt(), "--scene", "toy", "--views", "3", "--outdir",
                        out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files(out, ".png"), 3u);
  EXPECT_EQ(run({"render", "--ckpt", ckpt(), "--views", "50", "--outdir", out.string()}).code, 1);
}

TEST_F(CliFixture, EvalPrintsTable) {
  ASSERT_EQ(run({"train", "--config", config_path(), "--out", ckpt()}).code, 0);
  const Result r = run({"eval", "--ckpt", ckpt(), "--scene", "toy", "--split", "train"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("psnr"), std::string::npos);
  EXPECT_NE(r.out.find("mean"), std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 6u);  // header, four train views, mean
}

TEST_F(CliFixture, UsageErrors) {
  Result r = run({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"train", "--config", config_path()}).code, 1);
  EXPECT_EQ(run({"train", "--config", config_path(), "--out", ckpt(), "--bogus", "1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);

  std::ofstream(dir / "bad.cfg") << "d = 8\nwidth = 3\n";
  r = run({"train", "--config", (dir / "bad.cfg").string(), "--out", ckpt()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("width"), std::string::npos);
}

TEST_F(CliFixture, IoErrorsExitTwo) {
  EXPECT_EQ(run({"train", "--config", (dir / "missing.cfg").string(), "--out", ckpt()}).code, 2);
  EXPECT_EQ(run({"render", "--ckpt", (dir / "missing").string()}).code, 2);
  std::ofstream(dir / "garbage") << "definitely not a checkpoint";
  EXPECT_EQ(run({"eval", "--ckpt", (dir / "garbage").string()}).code, 2);
  EXPECT_EQ(run({"train", "--config", config_path(), "--out", ckpt(), "--scene",
                 (dir / "no_dataset").string()}).code,
            2);
}

TEST(Cli, MaddsTable) {
  const Result r = run({"madds", "--n-p", "2", "4", "--n-r", "8", "--d", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("global/ray"), std::string::npos);
  EXPECT_NE(r.out.find("4096"), std::string::npos);
}

TEST(Cli, Gradcheck) {
  const Result r = run({"gradcheck"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("forward_nerfa"), std::string::npos);
}

}  // namespace
}  // namespace seqview
