#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "manifest.hpp"
#include "qpmsynth/io.hpp"
#include "qpmsynth/poling.hpp"
#include "qpmsynth/schmidt.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace qpmsynth;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qpmsynth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("qpmsynth_cli_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::vector<std::string> kSmallGrid{"--grid-start", "1535", "--grid-stop", "1565", "--grid-points", "96"};
const std::vector<std::string> kGen{"--base-period-um", "46.1"};

std::vector<std::string> cat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

}  // namespace

TEST_CASE("design command writes a reloadable design and its profile") {
  TempDir t("design");
  const auto r = run_cli(cat({{"design", "-o", t / "d", "--profile-samples", "101"}, kGen}));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto d = io::load_design(t / "d/design.json");
  GaussianDesignParams p;
  
  CHECK(d == gaussian_apodized_design(p));

  std::ifstream prof(t / "d/profile.csv");
  std::string header;
  std::getline(prof, header);
  CHECK(header == "z_um,effective_amplitude,target_amplitude");
  std::string line;
  std::vector<double> z, amp;
  while (std::getline(prof, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    z.push_back(std::stod(line.substr(0, c1)));
    amp.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  REQUIRE(z.size() == 101);
  CHECK(z.front() == 0.0);
  CHECK(z.back() == doctest::Approx(d.total_length_um()).epsilon(1e-8));
  // interior samples away from segment edges must match exactly
  const auto eff = effective_profile(d, std::vector<double>(z.begin() + 1, z.end() - 1));
  for (std::size_t k = 0; k < eff.size(); ++k) CHECK(amp[k + 1] == doctest::Approx(eff[k]).epsilon(1e-8));

  const auto manifest = nlohmann::json::parse(slurp(t / "d/manifest.json"));
  CHECK(manifest["command"] == "design");
  for (const auto& o : manifest["outputs"]) {
    CHECK(o["sha256"] == cli::sha256_hex(slurp(t.path / "d" / o["file"].get<std::string>())));
  }
}

TEST_CASE("exit codes") {
  TempDir t("exit");
  // usage
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"design"}).code == 1);
  CHECK(run_cli({"design", "-o", t / "a"}).code == 1);  // no base period
  CHECK(run_cli(cat({{"design", "-o", t / "a", "--quantizer", "best"}, kGen})).code == 1);
  // parse
  std::ofstream(t / "bad.json") << "{\"model\": ";
  CHECK(run_cli(cat({{"pmf", "-o", t / "b", "--dispersion", t / "bad.json"}, kGen, kSmallGrid})).code == 2);
  std::ofstream(t / "bad_design.json") << "{\"format\": \"qpmsynth-design\"}";
  CHECK(run_cli(cat({{"pmf", "-o", t / "b", "--design", t / "bad_design.json"}, kSmallGrid})).code == 2);
  // numeric / range
  const auto range = run_cli(cat({{"pmf", "-o", t / "c", "--grid-start", "3500", "--grid-stop", "3600",
                                   "--grid-points", "8"},
                                  kGen}));
  CHECK(range.code == 3);
  CHECK(range.err.find("range") != std::string::npos);
  // io
  CHECK(run_cli(cat({{"pmf", "-o", t / "d", "--design", t / "missing.json"}, kSmallGrid})).code == 4);
  CHECK(run_cli(cat({{"design", "-o", t / "no/such/parent"}, kGen})).code == 4);

  // failures leave no output directory behind
  for (const char* name : {"a", "b", "c", "d"}) CHECK_FALSE(fs::exists(t / name));
}

TEST_CASE("jsa without filters equals jsa with filter none") {
  TempDir t("jsa");
  const auto base = cat({kGen, kSmallGrid, {"--pump-fwhm", "1.3"}});
  REQUIRE(run_cli(cat({{"jsa", "-o", t / "a"}, base})).code == 0);
  REQUIRE(run_cli(cat({{"jsa", "-o", t / "b", "--filter", "none"}, base})).code == 0);
  CHECK(slurp(t / "a/jsa.csv") == slurp(t / "b/jsa.csv"));
  CHECK(slurp(t / "a/jsi.csv") == slurp(t / "b/jsi.csv"));
}

TEST_CASE("repeat runs are byte-identical apart from the timestamp") {
  TempDir t("repeat");
  const auto args = cat({kGen, kSmallGrid, {"--pump-fwhm", "1.3", "--filter", "flat-top"}});
  REQUIRE(run_cli(cat({{"purity", "-o", t / "a"}, args})).code == 0);
  REQUIRE(run_cli(cat({{"purity", "-o", t / "b"}, args})).code == 0);
  for (const char* f : {"schmidt.txt", "schmidt_coefficients.csv"}) {
    CHECK(slurp(t.path / "a" / f) == slurp(t.path / "b" / f));
  }
  auto ma = nlohmann::json::parse(slurp(t / "a/manifest.json"));
  auto mb = nlohmann::json::parse(slurp(t / "b/manifest.json"));
  CHECK(ma["outputs"] == mb["outputs"]);
  CHECK(ma["inputs"] == mb["inputs"]);
  CHECK(ma["inputs"][0]["sha256"] == cli::sha256_file(test::data_path("ktp_type2_775nm.json")));
  const auto report = slurp(t / "a/schmidt.txt");
  CHECK(report.find("heralding_signal") != std::string::npos);
}

TEST_CASE("sfg-import reproduces the purity of the exported PMF") {
  TempDir t("sfg");
  const auto grid = cat({kGen, kSmallGrid});
  REQUIRE(run_cli(cat({{"pmf", "-o", t / "p"}, grid})).code == 0);
  REQUIRE(run_cli(cat({{"purity", "-o", t / "q", "--pump-fwhm", "1.3"}, grid})).code == 0);
  const auto r = run_cli({"sfg-import", "-o", t / "s", "--intensity", t / "p/pmf_intensity.csv",
                          "--pump-fwhm", "1.3"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto purity_of = [](const std::string& text) {
    const auto pos = text.find("purity = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + 9));
  };
  // the exported grid is |phi|^2; the direct run keeps the phase of phi
  CHECK(purity_of(slurp(t / "s/schmidt.txt")) ==
        doctest::Approx(purity_of(slurp(t / "q/schmidt.txt"))).epsilon(1e-2));
  // against the purity of |phi| itself the round trip is tight
  const auto intensity = io::load_real_grid_csv(t / "p/pmf_intensity.csv");
  const auto direct = purity_from_measured(intensity.grid, intensity.values, {775.0, 1.3});
  CHECK(purity_of(slurp(t / "s/schmidt.txt")) == doctest::Approx(direct.purity).epsilon(1e-6));
}

TEST_CASE("sweep and compare") {
  TempDir t("sweep");
  const auto grid = cat({kGen, {"--grid-start", "1535", "--grid-stop", "1565", "--grid-points", "128"}});
  REQUIRE(run_cli(cat({{"sweep", "-o", t / "s", "--bw-points", "12"}, grid})).code == 0);
  const auto opt = slurp(t / "s/optimum.txt");
  CHECK(opt.find("source = theoretical-cpktp") != std::string::npos);
  const auto pos = opt.find("max_purity = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(opt.substr(pos + 13)) == doctest::Approx(0.975).epsilon(0.02));

  REQUIRE(run_cli(cat({{"compare", "-o", t / "c", "--bw-points", "8"}, grid})).code == 0);
  const auto table = slurp(t / "c/comparison.csv");
  CHECK(table.find("\ncpktp,") != std::string::npos);
  CHECK(table.find("\nppktp,") != std::string::npos);
}

TEST_CASE("config file supplies subcommand options") {
  TempDir t("config");
  std::ofstream(t / "run.toml") << "[design]\nout = \"" << (t / "d") << "\"\nbase-period-um = 46.1\n"
                                << "length-um = 4000\nfwhm-um = 1000\n";
  const auto r = run_cli({"--config", t / "run.toml", "design"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(io::load_design(t / "d/design.json").total_length_um() <= 4000.0);

  std::ofstream(t / "bad.toml") << "[design]\nbase-period-um = \"wide\"\n";
  CHECK(run_cli({"--config", t / "bad.toml", "design", "-o", t / "e"}).code == 1);
  CHECK(run_cli({"--config", t / "missing.toml", "design"}).code == 4);
}
