#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string output;  // stdout and stderr
};

CliRun qcomb(const std::string& args) {
  const std::string cmd = std::string(QCOMB_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path workdir() {
  const fs::path dir = fs::temp_directory_path() / "qcomb_test_cli";
  static bool once = [&] {
    fs::remove_all(dir);
    fs::create_directories(dir);
    return true;
  }();
  (void)once;
  return dir;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kConfig = R"({
  "pump": {"center_thz": 391.88},
  "phase_match": {"bandwidth_thz": 0.3, "walkoff_ps": 1},
  "cavity": {"fsr_ghz": 19.2, "reflectivity": 0.5},
  "grid": {"points": 8193},
  "hom": {"delay_min_ps": -40, "delay_max_ps": 40, "delay_points": 161},
  "synthetic": {"pairs_per_bin": 3000},
  "fit": {"data_path": "out_fit/hom_counts.csv", "starts": 2, "x_tolerance": 1e-7}
})";

}  // namespace

TEST(Cli, HomSucceeds) {
  const fs::path cfg = write("ok.json", kConfig);
  const CliRun r = qcomb("hom --config " + cfg.string() + " --out " + (workdir() / "out_hom").string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(workdir() / "out_hom" / "hom_trace.csv"));
}

TEST(Cli, FitReadsDataRelativeToTheConfig) {
  const fs::path cfg = write("fit.json", kConfig);
  ASSERT_EQ(qcomb("hom --config " + cfg.string() + " --out " + (workdir() / "out_fit").string()).status, 0);
  const CliRun r = qcomb("fit --config " + cfg.string() + " --out " + (workdir() / "out_fit").string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(slurp(workdir() / "out_fit" / "fit.json").find("\"converged\": true"), std::string::npos);
}

TEST(Cli, PhysicsErrorsExitOne) {
  const fs::path cfg = write("bad.json", R"({"pump": {"center_thz": 391.88}, "phase_match": {"bandwidth_thz": 0.3},
    "cavity": {"fsr_ghz": 19.2, "reflectivity": 1.5}})");
  const CliRun r = qcomb("hom --config " + cfg.string() + " --out " + (workdir() / "x").string());
  EXPECT_EQ(r.status, 1) << r.output;
  EXPECT_NE(r.output.find("reflectivity"), std::string::npos);
  EXPECT_EQ(qcomb("hom --config " + write("empty.json", "{}").string()).status, 1);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(qcomb("").status, 1);
  EXPECT_EQ(qcomb("hom").status, 1);
  EXPECT_EQ(qcomb("launch --config x.json").status, 1);
}

TEST(Cli, IoErrorsExitTwo) {
  EXPECT_EQ(qcomb("hom --config " + (workdir() / "absent.json").string()).status, 2);
  const fs::path cfg = write("io.json", kConfig);
  EXPECT_EQ(qcomb("fit --config " + cfg.string() + " --data " + (workdir() / "absent.csv").string()).status, 2);
  EXPECT_EQ(qcomb("hom --config " + cfg.string() + " --out /proc/qcomb").status, 2);
}

TEST(Cli, MalformedDataNamesTheLine) {
  const fs::path cfg = write("m.json", kConfig);
  const fs::path data = write("m.csv", "# hand made\ntau_s,counts\n0,1\n1e-12,oops\n");
  const CliRun r = qcomb("fit --config " + cfg.string() + " --data " + data.string() + " --out " +
                      (workdir() / "m").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("line 4"), std::string::npos) << r.output;
}

TEST(Cli, SameInputsSameBytes) {
  const fs::path cfg = write("det.json", kConfig);
  for (const char* d : {"det_a", "det_b"}) {
    ASSERT_EQ(qcomb("hom --config " + cfg.string() + " --seed 5 --out " + (workdir() / d).string()).status, 0);
  }
  for (const char* f : {"hom_trace.csv", "hom_counts.csv"}) {
    const std::string a = slurp(workdir() / "det_a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(workdir() / "det_b" / f)) << f;
  }
}

TEST(Cli, OverridesTakeEffect) {
  const fs::path cfg = write("ov.json", kConfig);
  ASSERT_EQ(qcomb("hom --config " + cfg.string() + " --seed 5 --out " + (workdir() / "ov5").string()).status, 0);
  ASSERT_EQ(qcomb("hom --config " + cfg.string() + " --seed 6 --out " + (workdir() / "ov6").string()).status, 0);
  EXPECT_NE(slurp(workdir() / "ov5" / "hom_counts.csv"), slurp(workdir() / "ov6" / "hom_counts.csv"));

  ASSERT_EQ(qcomb("jsi --config " + cfg.string() + " --points 1025 --out " + (workdir() / "pts").string()).status, 1)
      << "1025 points over 8 bandwidths under-resolve the R = 0.5 cavity";
  ASSERT_EQ(qcomb("jsi --config " + cfg.string() + " --points 16385 --out " + (workdir() / "pts").string()).status, 0);
  std::size_t rows = 0;
  std::istringstream in(slurp(workdir() / "pts" / "jsi.csv"));
  for (std::string l; std::getline(in, l);) ++rows;
  EXPECT_EQ(rows, 2u + 16385u);
}
