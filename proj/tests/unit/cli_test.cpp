#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"

namespace tgm {
namespace {

namespace fs = std::filesystem;
using testing::fixture_path;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "tgm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("tgm_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Cli, ValidateExitCodes) {
  const CliRun ok = run({"validate", fixture_path("review.tgs"), fixture_path("billy.tgi")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "OK (0 violations)\n");

  const CliRun bad = run({"validate", fixture_path("review.tgs"), fixture_path("orphan_review.tgi")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("CardinalityViolation r1"), std::string::npos);

  EXPECT_EQ(run({"validate", fixture_path("missing.tgs")}).code, 2);
  EXPECT_EQ(run({"validate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST(Cli, ValidateSchemaOnly) {
  EXPECT_EQ(run({"validate", fixture_path("enterprise.tgs")}).code, 0);
  TempDir dir;
  std::ofstream(dir / "bad.tgs") << "schema s { node A : Missing }";
  const CliRun r = run({"validate", dir / "bad.tgs"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("DanglingReference"), std::string::npos);
}

TEST(Cli, QuietDropsOkLines) {
  const CliRun r = run({"--quiet", "validate", fixture_path("review.tgs"), fixture_path("billy.tgi")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const CliRun bad = run({"--quiet", "validate", fixture_path("review.tgs"), fixture_path("orphan_review.tgi")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(bad.out.empty());
}

TEST(Cli, Query) {
  const CliRun r = run({"query", fixture_path("bom.tgs"), fixture_path("bom.tgi"), "drawer", "contains", "where-used"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "table\ntabletop\n");
  const CliRun along = run({"query", fixture_path("bom.tgs"), fixture_path("bom.tgi"), "table", "contains", "neighbors-along"});
  EXPECT_EQ(along.out, "leg\ntabletop\n");
  EXPECT_EQ(run({"query", fixture_path("bom.tgs"), fixture_path("bom.tgi"), "ghost", "contains", "where-used"}).code, 2);
  EXPECT_EQ(run({"query", fixture_path("bom.tgs"), fixture_path("bom.tgi"), "table", "ghost", "where-used"}).code, 2);
  EXPECT_EQ(run({"query", fixture_path("bom.tgs"), fixture_path("bom.tgi"), "table", "contains", "sideways"}).code, 2);
}

TEST(Cli, ImportRelationalWritesFilesThatValidate) {
  TempDir dir;
  const CliRun r = run({"import", "relational", fixture_path("rst.rman"), fixture_path("rst_data"), "-o", dir / "rst"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "rst.tgs"));
  EXPECT_TRUE(fs::exists(dir / "rst.tgi"));
  EXPECT_EQ(run({"validate", dir / "rst.tgs", dir / "rst.tgi"}).code, 0);

  const CliRun dangling =
      run({"import", "relational", fixture_path("rst.rman"), fixture_path("rst_dangling"), "-o", dir / "bad"});
  EXPECT_EQ(dangling.code, 1);
  EXPECT_NE(dangling.out.find("FkTargetMissing"), std::string::npos);
}

TEST(Cli, ImportRelationalDelimiter) {
  TempDir dir;
  fs::create_directories(dir.path() / "data");
  for (const char* t : {"Table1", "Table2", "Table3", "RST"}) {
    std::string text = slurp(fixture_path(std::string("rst_data/") + t + ".csv"));
    for (char& c : text) {
      if (c == ',') c = ';';
    }
    std::ofstream(dir / (std::string("data/") + t + ".csv")) << text;
  }
  EXPECT_NE(run({"import", "relational", fixture_path("rst.rman"), dir / "data"}).code, 0);
  const CliRun r = run({"--delimiter", ";", "import", "relational", fixture_path("rst.rman"), dir / "data"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("graph"), std::string::npos);
  EXPECT_EQ(run({"--delimiter", ";;", "import", "relational", fixture_path("rst.rman"), dir / "data"}).code, 2);
}

TEST(Cli, ImportXml) {
  TempDir dir;
  for (const char* strategy : {"compact", "expanded"}) {
    const std::string prefix = dir / strategy;
    const CliRun r = run({"import", "xml", fixture_path("bookstore.xsd"), fixture_path("books.xml"), "--strategy",
                       strategy, "-o", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run({"validate", prefix + ".tgs", prefix + ".tgi"}).code, 0) << strategy;
  }
  EXPECT_EQ(run({"import", "xml", fixture_path("bookstore.xsd"), fixture_path("books_missing_author.xml")}).code, 1);
  const CliRun choice = run({"import", "xml", fixture_path("choice.xsd"), fixture_path("books.xml")});
  EXPECT_EQ(choice.code, 2);
  EXPECT_NE(choice.err.find("UnsupportedXsdFeature"), std::string::npos);
}

TEST(Cli, Abstract) {
  const CliRun r = run({"abstract", fixture_path("enterprise.tgs"), fixture_path("enterprise.tgi")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("node Sales"), std::string::npos);
  EXPECT_NE(r.out.find("`#orders`: 3"), std::string::npos);
  EXPECT_EQ(run({"abstract", fixture_path("flat.tgs")}).code, 2);

  TempDir dir;
  ASSERT_EQ(run({"abstract", fixture_path("enterprise.tgs"), fixture_path("enterprise.tgi"), "-o", dir / "a"}).code, 0);
  EXPECT_EQ(run({"validate", dir / "a.tgs", dir / "a.tgi"}).code, 0);
}

TEST(Cli, ExportDot) {
  const CliRun r = run({"export-dot", fixture_path("review.tgs")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  TempDir dir;
  EXPECT_EQ(run({"export-dot", fixture_path("review.tgs"), fixture_path("billy.tgi"), "-o", dir / "g.dot"}).code, 0);
  EXPECT_NE(slurp(dir / "g.dot").find("billy"), std::string::npos);
}

}  // namespace
}  // namespace tgm
