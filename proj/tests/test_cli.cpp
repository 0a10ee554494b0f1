/*
 * Copyright 2026 The mtskit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtskit/block_io.hpp"

using namespace mts;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "mtskit_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = env + " \"" MTSKIT_CLI "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

fs::path write_block(const std::string& name, int w, int h, int bd, const char* kh, const char* kv,
                     const std::vector<int>& nonzero = {}) {
  const fs::path p = scratch() / name;
  std::ofstream f(p);
  f << w << ' ' << h << ' ' << bd << ' ' << kh << ' ' << kv << '\n';
  for (int i = 0; i < w * h; ++i) f << (i < static_cast<int>(nonzero.size()) ? nonzero[static_cast<std::size_t>(i)] : 0) << (i % w == w - 1 ? '\n' : ' ');
  return p;
}

}  // namespace

TEST(Cli, ZeroBlockHasNoClipping) {
  const auto in = write_block("zero8.txt", 8, 8, 8, "dct2", "dct2");
  const CliRun r = run("transform --in " + in.string() + " --out " + (scratch() / "zero8.out").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("clip-count 0"), std::string::npos) << r.out;
  EXPECT_EQ(read_block_file(scratch() / "zero8.out").block, Block::zeros(8, 8));
}

TEST(Cli, IllegalSpecIsUsageError) {
  const auto in = write_block("z64.txt", 64, 64, 8, "dct2", "dct2");
  EXPECT_EQ(run("transform --in " + in.string() + " --out x --size 64 --type dst7").code, 2);
  EXPECT_EQ(run("transform --in " + in.string()).code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
}

TEST(Cli, MalformedFileReportsLine) {
  const fs::path p = scratch() / "bad.txt";
  std::ofstream(p) << "4 4 8 0 0\n0 0 0 0\n0 0 zz 0\n";
  const CliRun r = run("transform --in " + p.string() + " --out " + (scratch() / "bad.out").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
  EXPECT_EQ(run("transform --in " + (scratch() / "missing.txt").string() + " --out y").code, 3);
}

TEST(Cli, TransformMatchesLibrary) {
  const auto in = write_block("dc4.txt", 4, 4, 8, "dct2", "dct2", {256});
  const fs::path out = scratch() / "dc4.out";
  ASSERT_EQ(run("transform --in " + in.string() + " --out " + out.string() + " --format binary").code, 0);
  const BlockFile f = read_block_file(out);
  for (auto v : f.block.samples) EXPECT_EQ(v, 2);
}

TEST(Cli, MatricesPrintsRows) {
  const CliRun r = run("matrices --kind dst7 --size 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("29 55 74 84"), std::string::npos) << r.out;
  const CliRun j = run("matrices --kind dct2 --size 64 --format json");
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(run("matrices --kind dct8 --size 64").code, 2);
}

TEST(Cli, CostAndRomReports) {
  const CliRun rm = run("cost report --arch rm --format json");
  ASSERT_EQ(rm.code, 0);
  const auto j = nlohmann::json::parse(rm.out);
  EXPECT_EQ(j.at("multipliers").get<int>(), 32);
  EXPECT_EQ(j.at("rom_bits_target").get<int>(), 17408);
  const CliRun mcm = run("cost --arch mcm");
  EXPECT_EQ(mcm.code, 0);
  EXPECT_NE(mcm.out.find("3240"), std::string::npos);
  const CliRun rom = run("rom --out " + (scratch() / "rom").string());
  EXPECT_EQ(rom.code, 0);
  EXPECT_NE(rom.out.find("target 17408"), std::string::npos) << rom.out;
  EXPECT_NE(rom.out.find("FLAGGED"), std::string::npos);
  EXPECT_EQ(fs::file_size(scratch() / "rom" / "rom.bin"), 55u * 32u);
}

TEST(Cli, SimulateSixteenBySixteen) {
  std::vector<int> c(256);
  for (int i = 0; i < 256; ++i) c[static_cast<std::size_t>(i)] = (i * 37) % 400 - 200;
  const auto in = write_block("s16.txt", 16, 16, 10, "dst7", "dct8", c);
  const fs::path out = scratch() / "s16.out", trace = scratch() / "s16.csv", ref = scratch() / "s16.ref";
  const CliRun r = run("simulate --in " + in.string() + " --out " + out.string() + " --trace " + trace.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("vertical: output cycles 128"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("horizontal: output cycles 128"), std::string::npos);
  EXPECT_NE(r.out.find("match:"), std::string::npos);
  const std::string csv = slurp(trace);
  const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  EXPECT_EQ(rows, 2 * (2052 + 128 + 1));
  ASSERT_EQ(run("transform --in " + in.string() + " --out " + ref.string()).code, 0);
  EXPECT_EQ(read_block_file(out).block, read_block_file(ref).block);
  const CliRun h = run("simulate --in " + in.string() + " --tr-dir h");
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("pass: output cycles 128"), std::string::npos) << h.out;
}

TEST(Cli, CampaignExitCodes) {
  EXPECT_EQ(run("campaign --count 0 --blocks 0").code, 0);
  const CliRun bad = run("campaign --count 20 --blocks 0 --inject-fault");
  EXPECT_EQ(bad.code, 1);
  const CliRun a = run("campaign --count 5 --blocks 0", "MTSKIT_SEED=77");
  ASSERT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\"seed\": 77"), std::string::npos) << a.out;
  const fs::path g = scratch() / "golden";
  fs::remove_all(g);
  ASSERT_EQ(run("campaign --count 1 --blocks 0 --golden " + g.string() + " --golden-count 1").code, 0);
  const fs::path vin = g / "dct2-dct2" / "8x8-bd8" / "vec0.in";
  ASSERT_TRUE(fs::exists(vin));
  const fs::path vout = scratch() / "vec0.check";
  ASSERT_EQ(run("transform --in " + vin.string() + " --out " + vout.string()).code, 0);
  EXPECT_EQ(read_block_file(vout).block, read_block_file(g / "dct2-dct2" / "8x8-bd8" / "vec0.out").block);
}
