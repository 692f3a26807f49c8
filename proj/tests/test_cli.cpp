#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "pdde/cli.hpp"
#include "pdde/config_io.hpp"
#include "pdde/model_zoo.hpp"

using namespace pdde;

namespace {
int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  return rc;
}
} // namespace

TEST_CASE("validate exit codes") {
  CHECK(run_cli({"validate", "zoo:scalar_nicholson"}) == 0);
  CHECK(run_cli({"validate", "no_such_file.json"}) == 2);

  // config with an inadmissible impulse slope exits 2 with the H2 tag
  auto e = planar_autonomous_example(std::log(2.0) / 2.0, 0.2, 0.2);
  json j = save_system(e.spec);
  j["impulses"]["maps"][0][0]["eta"] = -1.5;
  const std::string path = "broken_test_config.json";
  {
    std::ofstream f(path);
    f << j.dump(2);
  }
  std::string text;
  CHECK(run_cli({"validate", path}, &text) == 2);
  CHECK(text.find("H2") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("certify exit codes follow the verdict") {
  CHECK(run_cli({"certify", "zoo:scalar_nicholson", "--theorem",
                 "T3_3_average", "--search-v"}) == 0);
  // pointwise comparison cannot hold for this instance
  CHECK(run_cli({"certify", "zoo:scalar_nicholson", "--theorem",
                 "T3_3_pointwise"}) == 1);
  CHECK(run_cli({"certify", "zoo:scalar_nicholson", "--theorem", "NO_SUCH"}) == 2);
}

TEST_CASE("simulate runs and reports a summary") {
  std::string text;
  CHECK(run_cli({"simulate", "zoo:planar_autonomous", "--eta", "0", "--t-end",
                 "50", "--step", "0.05", "--json"},
                &text) == 0);
  auto j = json::parse(text);
  CHECK(j["summary"]["long_run_floor"].size() == 2);
  CHECK(double(j["summary"]["long_run_floor"][0]) > 0.0);
}

TEST_CASE("zoo subcommand") {
  std::string text;
  CHECK(run_cli({"zoo", "list"}, &text) == 0);
  CHECK(text.find("scalar_nicholson") != std::string::npos);
  CHECK(run_cli({"zoo", "emit", "mackey_glass"}, &text) == 0);
  // emitted config loads back
  CHECK_NOTHROW((void)load_system(json::parse(text)));
  CHECK(run_cli({"zoo", "emit", "unknown_entry"}) == 2);
}

TEST_CASE("identical inputs give byte-identical reports") {
  std::string a, b;
  const std::vector<std::string> args = {"certify", "zoo:scalar_nicholson",
                                         "--theorem", "T3_3_average", "--json"};
  CHECK(run_cli(args, &a) == 0);
  CHECK(run_cli(args, &b) == 0);
  CHECK(a == b);
}

TEST_CASE("pipeline verdicts") {
  std::string text;
  CHECK(run_cli({"pipeline", "zoo:scalar_nicholson", "--json"}, &text) == 0);
  auto j = json::parse(text);
  CHECK(j["verdict"] == "certified+computed");

  // extinction instance is not certified
  CHECK(run_cli({"pipeline", "zoo:planar_autonomous", "--eta", "0", "--json"},
                &text) == 1);
  auto j0 = json::parse(text);
  CHECK(j0["verdict"] == "not certified");
}
