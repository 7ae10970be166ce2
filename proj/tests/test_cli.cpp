#include "graphfair/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace graphfair;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "graphfair");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / ("graphfair-cli-" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

const char* kLipsSkeleton = "graph lips\na b\na b\nb c\nb c\na c\n";
const char* kLipsGraph =
    "graph lips13\na t1\nt1 t2\nt2 b\na m1\nm1 m2\nm2 b\nb n1\nn1 n2\nn2 c\nb s1\ns1 s2\ns2 c\na o1\no1 o2\no2 c\n";

}  // namespace

TEST_CASE("classify") {
  Workspace ws;
  const Result lips = run({"classify", ws.write("lips.graph", kLipsSkeleton)});
  CHECK(lips.code == kSuccess);
  CHECK(lips.out.rfind("NonStringable, epsilon-sigma3=2, gap_threshold=3\n", 0) == 0);
  CHECK(lips.out.find("# input.graph.sha256=") != std::string::npos);

  const Result theta = run({"classify", ws.write("theta.graph", "graph th\nx y\nx y\nx y\n")});
  CHECK(theta.out.rfind("Stringable(theta), gap_threshold=inf", 0) == 0);

  const Result json = run({"--json", "classify", ws.path("lips.graph")});
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["gap_threshold"] == 3);
  CHECK(j["manifest"]["command"] == "classify");
}

TEST_CASE("threshold") {
  Workspace ws;
  const auto d = ws.write("dd.graph", "graph dd\na b\nb c\nc a\na x\nb d\nc d\nd y\n");
  const Result r = run({"threshold", "--generalized", "--relax-connectivity", d});
  CHECK(r.code == kSuccess);
  CHECK(r.out.find("gap_threshold=3") != std::string::npos);
  CHECK(r.out.find("generalized_gap_threshold=2") != std::string::npos);
  CHECK(r.out.find("generalized_gap_threshold_relaxed=") != std::string::npos);
}

TEST_CASE("solve and verify") {
  Workspace ws;
  const auto g = ws.write("g.graph", kLipsGraph);
  const auto v = ws.write("g.val", "* a 1\n* b 1\n* c 1\n1 t1 5\n2 o2 7\n3 n1 3\n");
  const auto alloc = ws.path("g.alloc");
  const Result solved = run({"solve", g, v, "--agents", "3", "--verify", "--trace", "--out", alloc});
  CHECK(solved.code == kSuccess);
  CHECK(solved.out.find("efk_outer=true") != std::string::npos);
  CHECK(solved.err.find("stage=1") != std::string::npos);
  CHECK(solved.err.find("step=1 l=0") != std::string::npos);

  const Result verified = run({"verify", g, v, alloc, "--k", "1"});
  CHECK(verified.code == kSuccess);
  CHECK(verified.out.rfind("accepted", 0) == 0);

  // The same run twice gives byte-identical output.
  CHECK(run({"solve", g, v, "--agents", "3"}).out == run({"solve", g, v, "--agents", "3"}).out);

  const auto broken = ws.write("broken.alloc", "1 a\n1 c\n2 b\n2 t1\n2 t2\n2 m1\n2 m2\n2 n1\n2 n2\n2 s1\n2 s2\n3 o1\n3 o2\n");
  const Result rejected = run({"verify", g, v, broken, "--k", "1", "--agents", "3"});
  CHECK(rejected.code == kNegative);
  CHECK(rejected.out.find("not contiguous") != std::string::npos);
}

TEST_CASE("solve without a bipolar numbering") {
  Workspace ws;
  const auto g = ws.write("star.graph", "graph star\no p\no q\no r\n");
  const auto v = ws.write("star.val", "* p 1\n* q 1\n* r 1\n");
  const Result r = run({"solve", g, v, "--agents", "2"});
  CHECK(r.code == kNegative);
}

TEST_CASE("counterexample and oracle") {
  Workspace ws;
  const auto y = ws.write("y.graph", "graph y\no p\no q\no r\n");
  const auto prefix = ws.path("ys");
  const Result made = run({"counterexample", y, "--n", "2", "--k", "1", "--certify", "--out-prefix", prefix});
  CHECK(made.code == kSuccess);
  CHECK(fs::exists(prefix + ".graph"));
  CHECK(fs::exists(prefix + ".val"));
  CHECK(fs::exists(prefix + ".manifest"));
  std::ifstream manifest(prefix + ".manifest");
  const std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
  CHECK(text.find("# verification=certified_absent") != std::string::npos);
  CHECK(text.find("# b=1") != std::string::npos);

  const Result oracle = run({"oracle", prefix + ".graph", prefix + ".val", "--n", "2", "--k", "1"});
  CHECK(oracle.code == kNegative);
  CHECK(oracle.out.rfind("no contiguous EF1_outer allocation exists (all 20 allocations checked)", 0) == 0);

  const auto l = ws.write("l.graph", kLipsSkeleton);
  const Result capped = run({"--max-vertices", "12", "counterexample", l, "--n", "4", "--k", "1", "--certify"});
  CHECK(capped.code == kCapExceeded);
  CHECK(capped.out.find("unverified at desk scale") != std::string::npos);

  const auto theta = ws.write("t.graph", "graph th\nx y\nx y\nx y\n");
  CHECK(run({"counterexample", theta, "--n", "2", "--k", "1"}).code == kNegative);
}

TEST_CASE("usage and input errors") {
  Workspace ws;
  CHECK(run({}).code == kUsage);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({"classify", ws.path("missing.graph")}).code == kUsage);
  const auto bad = ws.write("bad.graph", "graph bad\na b c\n");
  CHECK(run({"classify", bad}).code == kUsage);
  const auto g = ws.write("p.graph", "graph p\na b\nb c\n");
  const auto v = ws.write("p.val", "1 a 1\n");
  CHECK(run({"solve", g, v, "--agents", "4"}).code == kUsage);
}
