// end-to-end checks of the command line tool: exit codes, strict config
// parsing, artifact layout, and byte-identical reruns. the binary path comes
// from ANOSOVLAB_CLI_PATH (set by the test harness).

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "anosov/io.hpp"

using anosov::read_file;
using anosov::write_file;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("ANOSOVLAB_CLI_PATH");
  REQUIRE_MESSAGE(p != nullptr, "ANOSOVLAB_CLI_PATH must point at the cli binary");
  return p;
}

struct Sandbox {
  fs::path dir;
  Sandbox() {
    std::string tmpl = (fs::temp_directory_path() / "anosovlab-cli-XXXXXX").string();
    REQUIRE(mkdtemp(tmpl.data()) != nullptr);
    dir = tmpl;
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string path = (dir / name).string();
    write_file(path, content);
    return path;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

// runs the cli with stdout/stderr captured into the sandbox; returns exit code
int run(const Sandbox& sb, const std::string& args, const std::string& tag = "run") {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" + sb.path(tag + ".out") +
                          "\" 2> \"" + sb.path(tag + ".err") + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string out_of(const Sandbox& sb, const std::string& tag = "run") {
  return read_file(sb.path(tag + ".out"));
}

}  // namespace

TEST_CASE("help and fixture listings succeed") {
  Sandbox sb;
  CHECK(run(sb, "--help") == 0);
  CHECK(run(sb, "spectrum --list", "list") == 0);
  const std::string listing = out_of(sb, "list");
  CHECK(listing.find("schottky-basic") != std::string::npos);
  CHECK(listing.find("bend-basic") != std::string::npos);
  CHECK(run(sb, "verify --list", "vlist") == 0);
  CHECK(out_of(sb, "vlist").find("identities") != std::string::npos);
}

TEST_CASE("config errors exit with code two") {
  Sandbox sb;
  CHECK(run(sb, "") == 2);  // a command is required
  CHECK(run(sb, "spectrum") == 2);
  CHECK(run(sb, "nonsense --config x.json") == 2);
  CHECK(run(sb, "spectrum --config \"" + sb.path("missing.json") + "\"") == 2);

  const std::string broken = sb.file("broken.json", "{ not json");
  CHECK(run(sb, "spectrum --config \"" + broken + "\"") == 2);

  const std::string unknown_key = sb.file(
      "unknown.json",
      R"({"reps":["schottky-basic"],"functionals":["a1"],"max_len":8,"oops":1})");
  CHECK(run(sb, "spectrum --config \"" + unknown_key + "\"") == 2);

  const std::string bad_range = sb.file(
      "range.json", R"({"reps":["schottky-basic"],"functionals":["a1"],"max_len":40})");
  CHECK(run(sb, "spectrum --config \"" + bad_range + "\"") == 2);

  const std::string bad_fixture =
      sb.file("fixture.json", R"({"fixture":"nope","functional":"a1","max_len":8})");
  CHECK(run(sb, "exponent --config \"" + bad_fixture + "\"") == 2);

  const std::string bad_fn =
      sb.file("fn.json", R"({"fixture":"schottky-basic","functional":"a9","max_len":8})");
  CHECK(run(sb, "exponent --config \"" + bad_fn + "\"") == 2);

  const std::string ok = sb.file(
      "ok.json", R"({"reps":["schottky-basic"],"functionals":["a1"],"max_len":6})");
  CHECK(run(sb, "spectrum --config \"" + ok + "\" --threads 200") == 2);  // flag range
}

TEST_CASE("numeric failures exit with code three") {
  Sandbox sb;
  // a negatively scaled root makes the series diverge for every exponent
  const std::string cfg = sb.file(
      "neg.json",
      R"({"fixture":"schottky-basic","functional":"a1","scale":-1.0,"max_len":8})");
  CHECK(run(sb, "exponent --config \"" + cfg + "\" --out \"" + sb.dir.string() + "\"") == 3);
}

TEST_CASE("spectrum runs are byte-identical across reruns and thread counts") {
  Sandbox sb;
  const std::string cfg = sb.file(
      "spec.json",
      R"({"reps":["schottky-basic","schottky-thin"],"functionals":["a1","w1"],"max_len":9})");
  for (const char* variant : {"one --threads 1", "two --threads 2", "re --threads 1"}) {
    std::istringstream ss(variant);
    std::string name, flag, count;
    ss >> name >> flag >> count;
    CHECK(run(sb, "spectrum --config \"" + cfg + "\" --out \"" + sb.path(name) + "\" " + flag +
                      " " + count,
              name) == 0);
  }
  const std::string one = read_file(sb.path("one") + "/spectrum.csv");
  CHECK(one == read_file(sb.path("two") + "/spectrum.csv"));
  CHECK(one == read_file(sb.path("re") + "/spectrum.csv"));
  CHECK(one.rfind("class,core_length,", 0) == 0);
}

TEST_CASE("exponent artifact carries the estimate and its settings") {
  Sandbox sb;
  const std::string cfg = sb.file(
      "exp.json", R"({"fixture":"schottky-basic","functional":"a1","max_len":10})");
  CHECK(run(sb, "exponent --config \"" + cfg + "\" --out \"" + sb.dir.string() + "\"") == 0);
  const json report = json::parse(read_file(sb.path("exponent.json")));
  CHECK(report["command"] == "exponent");
  const double value = report["estimate"]["value"].get<double>();
  CHECK(value > 0.2);
  CHECK(value < 0.3);
  CHECK(report["settings"]["max_len"] == 10);
}

TEST_CASE("self intersection reports exactly one through the cli") {
  Sandbox sb;
  const std::string cfg = sb.file(
      "ix.json",
      R"({"fixture_f":"schottky-basic","fixture_g":"schottky-basic","functional":"a1","max_len":9})");
  CHECK(run(sb, "intersect --config \"" + cfg + "\" --out \"" + sb.dir.string() + "\"") == 0);
  const json report = json::parse(read_file(sb.path("intersect.json")));
  CHECK(report["intersection"]["value"].get<double>() == 1.0);
  CHECK(report["renormalized"].get<double>() == 1.0);
}

TEST_CASE("limit set artifacts: csv plus rendered image") {
  Sandbox sb;
  const std::string cfg = sb.file(
      "lim.json",
      R"({"fixture":"schottky-basic","max_len":9,"image":{"width":64,"height":64}})");
  CHECK(run(sb, "limitset --config \"" + cfg + "\" --out \"" + sb.dir.string() + "\"") == 0);
  const std::string csv = read_file(sb.path("cloud.csv"));
  CHECK(csv.rfind("x,y,chart", 0) == 0);
  std::ifstream img(sb.path("cloud.pgm"), std::ios::binary);
  REQUIRE(img.good());
  std::string magic;
  img >> magic;
  CHECK(magic == "P5");
}

TEST_CASE("oracle verification suite passes end to end") {
  Sandbox sb;
  const std::string cfg = sb.file("vo.json", R"({"suite":"oracles"})");
  CHECK(run(sb, "verify --config \"" + cfg + "\" --out \"" + sb.dir.string() + "\"", "vo") == 0);
  const json report = json::parse(read_file(sb.path("verify-oracles.json")));
  CHECK(report["all_pass"] == true);
  CHECK(run(sb, "verify --config \"" + sb.file("bad.json", R"({"suite":"nope"})") + "\"") == 2);
}
