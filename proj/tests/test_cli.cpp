#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using cvqss::cli::run_cli;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cvqss_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string golden_scheme_file() {
  const auto path = scratch("golden23.json");
  REQUIRE(run({"scheme", "--k", "2", "--n", "3", "--seed", "42", "--output", path.string()}).code == 0);
  return path.string();
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("scheme") {
  unsetenv("CVQSS_SEED");
  SUBCASE("deterministic, byte-identical output") {
    const Run a = run({"scheme", "--k", "3", "--seed", "5"});
    const Run b = run({"scheme", "--k", "3", "--seed", "5"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    CHECK(j["n"] == 5);
    CHECK(j["validation"]["passed"] == true);
  }
  SUBCASE("no-cloning bound") {
    const Run r = run({"scheme", "--k", "2", "--n", "4"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("n = 4 >= 2k = 4") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
  SUBCASE("(4,7) seed 1 validates") {
    const Json j = Json::parse(run({"scheme", "--k", "4", "--n", "7", "--seed", "1"}).out);
    CHECK(j["validation"]["passed"] == true);
    CHECK(j["validation"]["subsets_checked"] == 35);
  }
  SUBCASE("discarded shares are listed") {
    const Json j = Json::parse(run({"scheme", "--k", "3", "--n", "4", "--seed", "1"}).out);
    CHECK(j["discarded"] == Json::array({5}));
  }
  SUBCASE("environment seed overrides the flag") {
    setenv("CVQSS_SEED", "42", 1);
    const Run env = run({"scheme", "--k", "2", "--seed", "7"});
    unsetenv("CVQSS_SEED");
    CHECK(env.out == run({"scheme", "--k", "2", "--seed", "42"}).out);
    setenv("CVQSS_SEED", "abc", 1);
    CHECK(run({"scheme", "--k", "2"}).code == 1);
    unsetenv("CVQSS_SEED");
  }
  SUBCASE("usage errors") {
    CHECK(run({"scheme", "--k", "1"}).code == 1);
    CHECK(run({"scheme"}).code == 1);
    CHECK(run({"scheme", "--k", "x"}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({}).code == 1);
  }
  SUBCASE("help") {
    const Run r = run({"fidelity-curve", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("F_sim") != std::string::npos);
  }
}

TEST_CASE("output files are written atomically") {
  const auto path = scratch("atomic.json");
  std::filesystem::remove(path);
  CHECK(run({"scheme", "--k", "2", "--n", "4", "--output", path.string()}).code == 2);
  CHECK_FALSE(std::filesystem::exists(path));
  CHECK(run({"scheme", "--k", "2", "--output", path.string()}).code == 0);
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("decode") {
  unsetenv("CVQSS_SEED");
  const std::string scheme = golden_scheme_file();
  SUBCASE("single subset") {
    const Run r = run({"decode", "--scheme", scheme, "--subset", "1,2"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["collaborators"] == Json::array({1, 2}));
    CHECK(j["verification"]["passed"] == true);
    CHECK(j["verification"]["non_unit_squeezers"].get<int>() <= 2);
    CHECK(j["verification"]["reconstruction_residual"].get<double>() <= 1e-10);
    CHECK(j.contains("gamma0"));
    CHECK(j.contains("R_min"));
    CHECK(j["R"].get<double>() == doctest::Approx(j["R_min"].get<double>()).epsilon(1e-10));
  }
  SUBCASE("all subsets verify") {
    const Json j = Json::parse(run({"decode", "--scheme", scheme, "--all-subsets"}).out);
    CHECK(j["plans"].size() == 3);
    CHECK(j["all_verified"] == true);
  }
  SUBCASE("explicit free norm") {
    const Json j = Json::parse(run({"decode", "--scheme", scheme, "--subset", "2,3", "--gamma", "2.5"}).out);
    CHECK(j["gamma_free"] == 2.5);
  }
  SUBCASE("wrong subset size") {
    const Run r = run({"decode", "--scheme", scheme, "--subset", "1"});
    CHECK(r.code == 1);
  }
  SUBCASE("malformed subset and missing file") {
    CHECK(run({"decode", "--scheme", scheme, "--subset", "1,x"}).code == 1);
    CHECK(run({"decode", "--scheme", scheme, "--subset", "1,4"}).code == 1);
    CHECK(run({"decode", "--scheme", "/nonexistent.json", "--subset", "1,2"}).code == 1);
    CHECK(run({"decode", "--scheme", scheme}).code == 1);
  }
  SUBCASE("rank failure names the subset") {
    const auto path = scratch("identity.json");
    std::ofstream(path) << R"({"k": 2, "n": 3, "seed": 0, "rows": [[1,0,0],[0,1,0],[0,0,1]]})";
    const Run r = run({"decode", "--scheme", path.string(), "--subset", "1,2"});
    CHECK(r.code == 3);
    CHECK(r.err.find("{1,2}") != std::string::npos);
  }
}

TEST_CASE("fidelity-curve") {
  SUBCASE("first curve") {
    const Run r = run({"fidelity-curve", "--u", "0.5", "--v", "1", "--r", "-2:3:0.1"});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    CHECK(lines.size() == 52);
    CHECK(lines.front() == "r,F");
    CHECK(lines[21] == "0,0.769800358919501");
  }
  SUBCASE("second curve") {
    const auto lines = csv_lines(run({"fidelity-curve", "--u", "3", "--v", "5", "--r", "0:0:1"}).out);
    CHECK(lines[1] == "0,0.11605177063713189");
  }
  SUBCASE("no degradation") {
    const auto lines = csv_lines(run({"fidelity-curve", "--u", "0", "--v", "0", "--r", "-1:1:0.5"}).out);
    REQUIRE(lines.size() == 6);
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].substr(lines[i].find(',')) == ",1");
  }
  SUBCASE("json") {
    const Json j = Json::parse(run({"fidelity-curve", "--u", "0.5", "--v", "1", "--r", "0:1:1", "--format", "json"}).out);
    CHECK(j["points"].size() == 2);
    CHECK(j["points"][0]["F"] == 0.769800358919501);
  }
  SUBCASE("simulated column") {
    const std::string scheme = golden_scheme_file();
    const auto lines = csv_lines(run({"fidelity-curve", "--scheme", scheme, "--subset", "1,3", "--r", "0:2:1"}).out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "r,F,F_sim");
  }
  SUBCASE("bad input") {
    CHECK(run({"fidelity-curve", "--u", "1", "--v", "1", "--r", "3:1:1"}).code == 1);
    CHECK(run({"fidelity-curve", "--u", "1", "--v", "1", "--r", "0:1:0"}).code == 1);
    CHECK(run({"fidelity-curve", "--u", "1", "--v", "1", "--r", "0:1"}).code == 1);
    CHECK(run({"fidelity-curve", "--u", "-1", "--v", "1"}).code == 1);
    CHECK(run({"fidelity-curve", "--u", "1"}).code == 1);
    CHECK(run({"fidelity-curve", "--u", "1", "--v", "1", "--format", "xml"}).code == 1);
  }
}

TEST_CASE("cost-min") {
  SUBCASE("ratio case") {
    const Run r = run({"cost-min", "--alpha", "0.6", "--beta", "0.8"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["agree"] == true);
    CHECK(j["analytic"]["r_min"].get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(j["oracle"]["r_min"].get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  }
  SUBCASE("closed-form mode notes the discrepancy") {
    const Json j = Json::parse(run({"cost-min", "--alpha", "0.5", "--beta", "0.5", "--printed-formula"}).out);
    CHECK(j["analytic"]["gamma0"].get<double>() == doctest::Approx(0.8164965809).epsilon(1e-9));
    CHECK(j["closed_form"]["matches_oracle"] == false);
    CHECK(j["closed_form"].contains("note"));
  }
  SUBCASE("alpha zero") { CHECK(run({"cost-min", "--alpha", "0", "--beta", "1"}).code == 1); }
}

TEST_CASE("sweep") {
  const Run r = run({"sweep", "--k", "2", "--seed", "42", "--r", "0:1:1"});
  REQUIRE(r.code == 0);
  const auto lines = csv_lines(r.out);
  CHECK(lines.size() == 7);
  CHECK(lines.front() == "subset,r,u,v,F_sim,F_analytic");
  CHECK(lines[1].rfind("1-2,0,", 0) == 0);
  CHECK(run({"sweep", "--r", "0:1:1"}).code == 1);
  CHECK(run({"sweep", "--k", "2", "--n", "5"}).code == 2);
}

TEST_CASE("verify") {
  SUBCASE("negative control names criterion 1") {
    const Run r = run({"verify", "--inject-fault", "--json"});
    CHECK(r.code == 4);
    CHECK(r.err.find("criterion 1") != std::string::npos);
    const Json j = Json::parse(r.out);
    CHECK(j["criteria"][0]["passed"] == false);
    CHECK(j["passed"] == false);
  }
  SUBCASE("table has one line per criterion") {
    const Run r = run({"verify"});
    CHECK(csv_lines(r.out).size() == 8);
    CHECK((r.code == 0 || r.code == 4));
  }
}
