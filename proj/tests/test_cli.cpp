#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(ENTBELL_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("entbell_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check reports the p_e violation") {
    const auto dir = scratch("check");
    CHECK(run("check builtin:pe --out " + dir.string(), dir / "log") == 0);
    const std::string log = slurp(dir / "log");
    CHECK(log.find("I_BC^4 = 0.01997328") != std::string::npos);
    CHECK(log.find("violated I2233 functionals: 1 of 432") != std::string::npos);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "check.json"));
  }

  TEST_CASE("check on noise and p_NL") {
    const auto dir = scratch("check2");
    CHECK(run("check builtin:p_noise_2233 --out " + dir.string(), dir / "log") == 0);
    std::string log = slurp(dir / "log");
    CHECK(log.find("local weight: 1 ") != std::string::npos);
    CHECK(log.find("violated CHSH-type functionals: 0") != std::string::npos);
    CHECK(log.find("violated I2233 functionals: 0") != std::string::npos);
    CHECK(run("check builtin:p_NL --out " + dir.string(), dir / "log") == 0);
    log = slurp(dir / "log");
    CHECK(log.find("I2233^1 = 4") != std::string::npos);
    CHECK(log.find("local weight: 0 ") != std::string::npos);
  }

  TEST_CASE("check reads distribution files") {
    const auto dir = scratch("file");
    std::ofstream(dir / "pr.json") << R"({"scenario":[2,2,2,2],"probs":["1/2","0","1/2","0","0","1/2","0","1/2",)"
                                   << R"("1/2","0","0","1/2","0","1/2","1/2","0"]})";
    CHECK(run("check " + (dir / "pr.json").string() + " --out " + dir.string(), dir / "log") == 0);
    CHECK(slurp(dir / "log").find("violated CHSH functionals: 1 of 8") != std::string::npos);
    std::ofstream(dir / "bad.json") << "{\"scenario\":[2,2,2,2],\"probs\":[\"1/2\"]}";
    CHECK(run("check " + (dir / "bad.json").string() + " --out " + dir.string(), dir / "log") == 2);
  }

  TEST_CASE("orbit counts") {
    const auto dir = scratch("orbit");
    CHECK(run("orbit builtin:p_NL --out " + dir.string(), dir / "log") == 0);
    CHECK(slurp(dir / "log").find("orbit size: 432") != std::string::npos);
    CHECK(run("orbit builtin:p_noise --out " + dir.string(), dir / "log") == 0);
    CHECK(slurp(dir / "log").find("orbit size: 1\n") != std::string::npos);
    CHECK(run("orbit chsh2233 --exchange --lift --out " + dir.string(), dir / "log") == 0);
    CHECK(slurp(dir / "log").find("orbit size: 648") != std::string::npos);
  }

  TEST_CASE("usage and parse errors exit with 2") {
    const auto dir = scratch("errors");
    CHECK(run("", dir / "log") == 2);
    CHECK(run("reproduce nosuchtarget --out " + dir.string(), dir / "log") == 2);
    CHECK(run("check builtin:nosuchname --out " + dir.string(), dir / "log") == 2);
    CHECK(run("check builtin:pe --q abc --out " + dir.string(), dir / "log") == 2);
    CHECK(run("check builtin:pe --grid notanumber --out " + dir.string(), dir / "log") == 2);
  }

  TEST_CASE("reproduce writes a manifest and identical CSV on rerun") {
    const auto dir = scratch("repro");
    CHECK(run("reproduce fig1 footnote --out " + dir.string(), dir / "log") == 0);
    const std::string log = slurp(dir / "log");
    CHECK(log.find("fig1: PASS") != std::string::npos);
    CHECK(log.find("footnote: PASS") != std::string::npos);
    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);
    const std::string first = slurp(dir / "fig1_q_sweep.csv");
    CHECK(!first.empty());
    CHECK(run("reproduce fig1 footnote --out " + dir.string(), dir / "log") == 0);
    CHECK(slurp(dir / "fig1_q_sweep.csv") == first);
    CHECK(slurp(dir / "manifest.json") == manifest);
  }

  TEST_CASE("a failing check exits with 1") {
    // A tolerance above the p_e value turns the fig1 maximum check into a failure.
    const auto dir = scratch("fail");
    CHECK(run("reproduce fig1 --tol 0.5 --out " + dir.string(), dir / "log") == 1);
    CHECK(slurp(dir / "log").find("FAIL") != std::string::npos);
  }
}
