#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

const std::string kCli = MEI_CLI_PATH;
const std::string kQinghai = std::string(MEI_SOURCE_DIR) + "/scenarios/qinghai.scn";

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mei_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

fs::path write_doc(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Cli, ValidateReference) { EXPECT_EQ(run("validate " + kQinghai), 0); }

TEST(Cli, MalformedDocumentExitsOne) {
  const fs::path doc = write_doc("bad.scn", "[node a]\ncarriers = steam\n");
  EXPECT_EQ(run("validate " + doc.string()), 1);
  EXPECT_EQ(run("validate /nonexistent/file.scn"), 1);
  EXPECT_EQ(run("dispatch " + kQinghai + " --hours 0 --out /tmp/x"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  fs::remove(doc);
}

TEST(Cli, InfeasibleExitsTwo) {
  const fs::path doc = write_doc("dark.scn",
                                 "[node a]\ncarriers = electricity\n"
                                 "[profile p]\nvalues = 0, 3\n"
                                 "[device l]\nkind = load\nnode = a\ncarrier = electricity\nprofile = p\n");
  EXPECT_EQ(run("dispatch " + doc.string() + " --hours 2 --out " + scratch("dark_out").string()), 2);
  EXPECT_EQ(run("control " + kQinghai + " --gamma 0.5"), 2);
  fs::remove(doc);
}

TEST(Cli, PlanAndControl) {
  EXPECT_EQ(run("plan " + kQinghai), 0);
  EXPECT_EQ(run("control " + kQinghai + " --gamma 2"), 0);
}

TEST(Cli, DispatchIsByteIdentical) {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  ASSERT_EQ(run("dispatch " + kQinghai + " --hours 24 --stackelberg --out " + a.string()), 0);
  ASSERT_EQ(run("dispatch " + kQinghai + " --hours 24 --stackelberg --out " + b.string()), 0);
  for (const char* f : {"dispatch.csv", "exchange.csv", "storage.csv", "residuals.csv", "summary.txt", "plotdata.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
