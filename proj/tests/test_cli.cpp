#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codon/cli.hpp"

using namespace codon;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("codon_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gen") {
  const auto r = run({"gen", "--length", "50", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(parse_tape(r.out).size() == 50);
  CHECK(run({"--seed", "1", "gen", "--length", "50"}).out == r.out);
  CHECK(run({"gen", "--length", "50", "--seed", "2"}).out != r.out);
}

TEST_CASE("run") {
  TempDir dir;
  const auto tape = dir.file("min.tape", "AAA AUA\n");
  const auto r = run({"run", "--tape", tape, "--iset", "set1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["executable"] == true);
  CHECK(j["reproductive"] == false);
  CHECK(j["progeny"] == 0);
  CHECK(j["halt"] == "STOPPED");

  const auto trace = dir.path("trace.csv");
  CHECK(run({"run", "--tape", tape, "--trace", trace}).code == 0);
  CHECK(slurp(trace) == "step,position,opcode,numeric,flag\n0,0,START,0,0\n1,1,STOP,5,0\n");

  const auto commented = dir.file("c.tape", "# a copier\nAAA AAG # copy\nAUA\n");
  CHECK(nlohmann::json::parse(run({"run", "--tape", commented}).out)["reproductive"] == true);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({}).code == 2);
  CHECK(run({"fly"}).code == 2);
  CHECK(run({"exp1", "--bogus", "1"}).code == 2);
  CHECK(run({"exp1", "--runs", "many"}).code == 2);
  CHECK(run({"exp1", "--iset", "set9"}).code == 2);
  CHECK(run({"run"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const auto e = run({"exp1", "--runs", "0"});
  CHECK(e.code == 1);
  CHECK(e.err.find("runs must be >= 1") != std::string::npos);
  CHECK(std::count(e.err.begin(), e.err.end(), '\n') == 1);

  const auto bad = dir.file("bad.tape", "AAA QQQ");
  CHECK(run({"run", "--tape", bad}).code == 1);
  CHECK(run({"run", "--tape", dir.path("missing.tape")}).code == 1);
  CHECK(run({"run", "--tape", bad, "--step_budget", "0"}).code == 1);
}

TEST_CASE("config file") {
  TempDir dir;
  const auto cfg = dir.file("c.cfg", "# desk run\nruns = 7\ncap=200\nseed=4\n");
  const auto a = run({"--config", cfg, "exp1"});
  REQUIRE(a.code == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 8);
  CHECK(a.out == run({"exp1", "--runs", "7", "--cap", "200", "--seed", "4"}).out);
  // Flags override the file.
  const auto b = run({"--config", cfg, "exp1", "--runs", "3"});
  CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 4);

  CHECK(run({"--config", dir.file("u.cfg", "speed=3\n"), "gen"}).code == 2);
  CHECK(run({"--config", dir.file("v.cfg", "runs\n"), "gen"}).code == 2);
  CHECK(run({"--config", dir.path("none.cfg"), "gen"}).code == 2);

  Config c;
  for (const auto& k : Config::keys()) {
    Config d;
    CHECK_NOTHROW(d.set(k.name, c.get(k.name)));
    CHECK(d.get(k.name) == c.get(k.name));
  }
  CHECK_THROWS_AS(c.set("nope", "1"), UsageError);
  c.set("weights", "point:3,swap:1");
  CHECK(c.policy.weights.at(MutationKind::PointMutation) == doctest::Approx(0.75));
}

TEST_CASE("experiments write identical bytes") {
  TempDir dir;
  const auto a = run({"exp2", "--iset", "set2", "--runs", "30", "--seed", "7", "--cap", "40"});
  const auto b = run({"exp2", "--iset", "set2", "--runs", "30", "--seed", "7", "--cap", "40",
                      "--jobs", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto out = dir.path("e1.csv"), summary = dir.path("e1.json");
  CHECK(run({"exp1", "--runs", "5", "--out", out, "--summary", summary}).code == 0);
  CHECK(slurp(out).rfind("run,found,iterations\n", 0) == 0);
  CHECK(nlohmann::json::parse(slurp(summary))["runs"] == 5);
}

TEST_CASE("analyze") {
  TempDir dir;
  const auto a = dir.file("a.tape", "AAA CCC GGG");
  const auto b = dir.file("b.tape", "AAA GGG");
  const auto r = run({"analyze", "dist", a, b, "--metric", "levenshtein"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "tape," + a + "," + b + "\n" + a + ",0,1\n" + b + ",1,0\n");
  const auto p = run({"analyze", "dist", a, b, "--polymorphic", "--eps", "1.5"});
  CHECK(p.out == "a,b,distance\n" + a + "," + b + ",1\n");
  CHECK(run({"analyze", "dist", a, b, "--metric", "hamming"}).code == 1);

  const auto e = run({"analyze", "entropy", "--tape", a});
  REQUIRE(e.code == 0);
  CHECK(nlohmann::json::parse(e.out).contains("total"));
}

TEST_CASE("virus") {
  TempDir dir;
  const auto host = dir.file("h.tape", "AAA AUA");
  const auto virus = dir.file("v.tape", "AAG");
  const auto r = run({"virus", "--host", host, "--virus", virus, "--site", "1", "--fitness",
                      "reproductivity"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "COMMENSALISTIC");
  CHECK(j["delta_f"] == 1.0);
  CHECK(j["nu_executable"] == false);
  CHECK(j["nu_reproductive"] == false);
  CHECK(run({"virus", "--host", host, "--virus", virus, "--site", "9"}).code == 1);
  CHECK(run({"virus", "--host", host, "--virus", virus, "--fitness", "speed"}).code == 1);
}

TEST_CASE("evolve") {
  const auto r = run({"evolve", "--generations", "5", "--population", "4"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
  CHECK(r.out == run({"evolve", "--generations", "5", "--population", "4", "--jobs", "2"}).out);
}
