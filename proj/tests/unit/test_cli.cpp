#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "mfchaos/commands.hpp"
#include "mfchaos/config.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/io.hpp"
#include "mfchaos/manifest.hpp"

using namespace mfchaos;
using namespace mfchaos::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mfchaos_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_model(const fs::path& dir, const json& model) {
  const auto p = dir / "model.json";
  io::write_json_file(p, model);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const json kAttraction = json::parse(R"({
  "kind": "average_form", "id": "attraction", "dim": 1,
  "drift": {"name": "linear_attraction", "kappa": 1.0},
  "sigma": {"name": "constant_sigma", "s": 0.5},
  "eta": {"name": "zero"}
})");

}  // namespace

TEST(Config, DefaultsFlagsAndFileLayers) {
  const json file{{"model", "m.json"}, {"out", "o"}, {"n", 10}, {"dt", 0.01}};
  const json flags{{"n", 20}};
  const auto cfg = parse_config("simulate", file, flags);
  const auto& p = std::get<SimulateParams>(cfg.params);
  EXPECT_EQ(p.n, 20u);
  EXPECT_EQ(p.dt, 0.01);
  EXPECT_EQ(p.t, 1.0);
  EXPECT_EQ(output_dir(cfg), "o");
}

TEST(Config, RoundTripsThroughJson) {
  for (const auto& sub : subcommands()) {
    json layer = defaults(sub);
    for (const char* k : {"model", "a", "b", "out"}) {
      if (layer.contains(k) && layer[k].is_string()) layer[k] = std::string("v_") + k;
    }
    if (sub == "omega") {
      layer["a"] = json::parse(R"({"b": [0.0], "sigma": [[1.0]]})");
      layer["b"] = layer["a"];
      layer["x"] = {0.0};
      layer["y"] = {1.0};
    }
    const auto cfg = parse_config(sub, layer, json::object());
    const auto again = from_json(to_json(cfg));
    EXPECT_EQ(to_json(again), to_json(cfg)) << sub;
  }
}

TEST(Config, ErrorsNameTheField) {
  const json base{{"model", "m.json"}, {"out", "o"}};
  try {
    parse_config("simulate", base, {{"dt", 2.0}, {"t", 1.0}});
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_EQ(e.field(), "dt");
  }
  try {
    parse_config("simulate", base, {{"foo", 1}});
    FAIL();
  } catch (const UnknownKey& e) {
    EXPECT_EQ(e.field(), "foo");
  }
  try {
    parse_config("simulate", {{"out", "o"}}, json::object());
    FAIL();
  } catch (const MissingField& e) {
    EXPECT_EQ(e.field(), "model");
  }
  try {
    parse_config("simulate", base, {{"n", "many"}});
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_EQ(e.field(), "n");
  }
  EXPECT_THROW(parse_config("simulate", base, {{"n", 1}}), RangeError);
  EXPECT_THROW(parse_config("chaos", base, {{"n_list", {8, 4, 16}}}), RangeError);
  EXPECT_THROW(parse_config("nope", base, json::object()), RangeError);
  EXPECT_THROW(parse_config("simulate", {{"schema", "other/9"}, {"model", "m"}, {"out", "o"}}, json::object()), RangeError);
}

TEST(Manifest, GitBlobHash) {
  // git hash-object on "hello\n"
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Run, ZeroDynamicsKeepsTheInitialCloud) {
  const auto dir = scratch("zero");
  const auto model = write_model(dir, json::parse(R"({"kind": "general", "builtin": "zero", "dim": 2})"));
  const PointCloud x0(2, {0.5, -1.0, 2.0, 3.0, -0.25, 0.125});
  io::save_cloud_csv(dir / "x0.csv", x0);
  const auto cfg = parse_config("simulate",
                                {{"model", model.string()}, {"initial", (dir / "x0.csv").string()}, {"n", 3},
                                 {"dt", 0.1}, {"t", 0.5}, {"checkpoints", {0.5}}, {"out", (dir / "out").string()}},
                                json::object());
  const auto res = run(cfg);
  EXPECT_EQ(res.exit_code, kExitPass);
  EXPECT_EQ(res.manifest.verdict, "pass");
  std::size_t csv = 0;
  for (const auto& e : fs::directory_iterator(dir / "out")) csv += e.path().extension() == ".csv";
  EXPECT_EQ(csv, 1u);
  ASSERT_EQ(res.manifest.outputs.size(), 2u);
  for (const auto& [name, hash] : res.manifest.outputs) {
    EXPECT_EQ(hash, git_blob_hash_file(dir / "out" / name));
    if (name.ends_with(".csv")) {
      EXPECT_TRUE(io::load_cloud_csv(dir / "out" / name) == x0);
    }
  }
  EXPECT_TRUE(fs::exists(dir / "out" / kManifestFile));
  EXPECT_TRUE(fs::exists(dir / "out" / kTimingFile));
}

TEST(Run, IdenticalRerunsGiveIdenticalManifests) {
  const auto dir = scratch("rerun");
  const auto model = write_model(dir, kAttraction);
  const json layer{{"model", model.string()}, {"n", 16}, {"dt", 0.01}, {"t", 0.2}, {"seed", 5},
                   {"out", (dir / "out").string()}};
  const auto cfg = parse_config("simulate", layer, json::object());
  run(cfg);
  const auto first = slurp(dir / "out" / kManifestFile);
  run(cfg);
  EXPECT_EQ(slurp(dir / "out" / kManifestFile), first);
}

TEST(Run, MisdeclaredSlopeBandFailsWithReport) {
  const auto dir = scratch("band");
  const auto model = write_model(dir, kAttraction);
  const json layer{{"model", model.string()}, {"n_list", {2, 4, 16}}, {"trials", 3}, {"t", 0.1}, {"dt", 0.01},
                   {"m", 50}, {"mesh", 0.05}, {"aleph_trials", 10}, {"slope_lo", 0.5}, {"slope_hi", 1.0},
                   {"out", (dir / "out").string()}};
  const auto res = run(parse_config("chaos", layer, json::object()));
  EXPECT_EQ(res.exit_code, kExitVerdictFail);
  EXPECT_EQ(res.manifest.verdict, "fail");
  const auto report = io::read_json_file(dir / "out" / "chaos.json");
  EXPECT_FALSE(report["verdict"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "out" / "chaos.csv"));
}

TEST(Binary, ExitCodes) {
  const std::string exe = MFCHAOS_CLI_PATH;
  const auto dir = scratch("binary");
  const auto model = write_model(dir, json::parse(R"({"kind": "general", "builtin": "zero", "dim": 1})"));
  const auto quiet = " > " + (dir / "log.txt").string() + " 2>&1";
  auto code = [](int status) { return WIFEXITED(status) ? WEXITSTATUS(status) : -1; };
  EXPECT_EQ(code(std::system((exe + " --version" + quiet).c_str())), 0);
  EXPECT_EQ(code(std::system((exe + quiet).c_str())), 1);
  EXPECT_EQ(code(std::system((exe + " simulate --bogus 1" + quiet).c_str())), 1);
  EXPECT_EQ(code(std::system((exe + " simulate --model " + model.string() + " --dt 2 --t 1 --out " +
                              (dir / "o").string() + quiet).c_str())),
            1);
  EXPECT_EQ(code(std::system((exe + " simulate --model " + model.string() + " --n 4 --dt 0.5 --t 1 --out " +
                              (dir / "o").string() + quiet).c_str())),
            0);
  EXPECT_TRUE(fs::exists(dir / "o" / kManifestFile));
  // a config file with flags layered on top
  io::write_json_file(dir / "cfg.json", {{"schema", kConfigSchema}, {"model", model.string()}, {"n", 4}, {"dt", 0.5},
                                         {"out", (dir / "c").string()}});
  EXPECT_EQ(code(std::system((exe + " simulate --config " + (dir / "cfg.json").string() + " --t 2" + quiet).c_str())), 0);
  const auto manifest = io::read_json_file(dir / "c" / kManifestFile);
  EXPECT_EQ(manifest["config"]["params"]["t"], 2.0);
}
