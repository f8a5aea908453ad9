#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kInput = std::string(STABLEMDS_DATA_DIR) + "/unconv_synthetic.csv";

int run(const std::string& args) {
  const std::string cmd = std::string(STABLEMDS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stablemds_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string common(const fs::path& out) {
  return "--input " + kInput + " --predictors Por,AI,TOC --response Prod --sample-size 20 "
         "--realizations 6 --out " + out.string();
}

}  // namespace

TEST_CASE("cli: stabilize writes the bundle") {
  const fs::path out = scratch("stabilize");
  REQUIRE(run("stabilize " + common(out) + " --thresholds 0,2500,5000,7500,10000") == 0);
  for (const char* f : {"summary.json", "config.json", "expectation.csv", "dispersion.csv",
                        "anchors.csv", "transforms.csv", "categories.csv",
                        "embeddings/base.csv", "embeddings/realization_006.csv"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  const std::string header = slurp(out / "expectation.csv").substr(0, 19);
  CHECK(header == "sample_id,mds1,mds2");
}

TEST_CASE("cli: oosp is byte-identical across runs and thread counts") {
  const fs::path a = scratch("oosp_a"), b = scratch("oosp_b");
  REQUIRE(run("oosp " + common(a) + " --oosp-seed 3 --threads 1") == 0);
  REQUIRE(run("oosp " + common(b) + " --oosp-seed 3 --threads 4") == 0);
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  CHECK(slurp(a / "stabilized_oosp.csv") == slurp(b / "stabilized_oosp.csv"));
  CHECK(fs::exists(a / "anchor_transform.csv"));
  CHECK(fs::exists(a / "common_anchors.csv"));
}

TEST_CASE("cli: error exit codes") {
  const fs::path out = scratch("errors");
  CHECK(run("stabilize --input /nonexistent.csv --predictors a --out " + out.string()) == 2);
  CHECK(run("stabilize " + common(out) + " --metric cosine") == 1);
  CHECK(run("stabilize " + common(out) + " --realizations 0") == 1);
  CHECK(run("oosp " + common(out) + " --oosp-seed 1 --oosp-values 1,2,3") == 1);
  CHECK(run("nosuchcommand") != 0);
}

TEST_CASE("cli: config file supplies defaults and flags override it") {
  const fs::path out = scratch("config");
  fs::create_directories(out);
  const fs::path ini = out / "run.ini";
  std::ofstream(ini) << "[stabilize]\nrealizations=4\nmaster-seed=9\n";
  const std::string base = "--input " + kInput + " --predictors Por,AI,TOC --sample-size 20";
  const fs::path flags = out / "flags", file = out / "file", both = out / "both";
  REQUIRE(run("stabilize " + base + " --realizations 4 --master-seed 9 --out " + flags.string()) == 0);
  REQUIRE(run("stabilize --config " + ini.string() + " " + base + " --out " + file.string()) == 0);
  REQUIRE(run("stabilize --config " + ini.string() + " " + base + " --realizations 5 --out " +
              both.string()) == 0);
  CHECK(slurp(flags / "expectation.csv") == slurp(file / "expectation.csv"));
  const std::string echoed = slurp(both / "config.json");
  CHECK(echoed.find("\"realizations\": 5") != std::string::npos);
  CHECK(echoed.find("\"master_seed\": 9") != std::string::npos);
}
