#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "classcover/cli.hpp"

namespace fs = std::filesystem;
using classcover::cli::run;

namespace {

const std::string kData = CLASSCOVER_EXAMPLES_DIR;

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome call(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream o, e;
  auto lookup = [env](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const int code = run(std::move(args), o, e, lookup);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("classcover-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("cover report") {
  const auto r = call({"cover", "--group", "A_5", "--all-classes"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "group,class_rep,class_size,cn,ratio\n"
        "\"A_5\",\"()\",1,never,central\n"
        "\"A_5\",\"(12345)\",12,3,1.820736\n"
        "\"A_5\",\"(13245)\",12,3,1.820736\n"
        "\"A_5\",\"(14)(25)\",15,2,1.322825\n"
        "\"A_5\",\"(123)\",20,2,1.463351\n");
  const auto j = call({"--format", "json", "cover", "--group", "A_5", "--class", "(1,2,3)"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc.dump().find("\"cn\":2") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(call({"cover", "--group", "Q_9", "--all-classes"}).code == 2);
  CHECK(call({"cover", "--group", "A_5"}).code == 2);
  CHECK(call({"cover", "--bogus"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"cover", "--group", "A_9", "--cap", "1000", "--all-classes"}).code == 3);
  CHECK(call({"spectrum", "--sl", "4,5", "--beta", "0.5", "--route", "enumerate", "--algebra-cap", "10"}).code == 3);
  CHECK(call({"width", "--group", "A_5", "--gens", "(1,2,3)", "--mode", "segal"}).code == 2);
  const auto h = call({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("Subcommands:") != std::string::npos);
  const auto v = call({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(classcover::cli::kVersion) != std::string::npos);
  const auto e = call({"cover", "--group", "A_9", "--cap", "1000", "--all-classes"});
  CHECK(e.err.rfind("classcover: cap-exceeded", 0) == 0);
}

TEST_CASE("commands produce their reports") {
  CHECK(call({"spectrum", "--n", "100", "--beta", "0.5"}).out ==
        "n,beta,cycle_length,h,abs_error\n100,0.500000,49,0.571382,0.071382\n");
  CHECK(call({"width", "--group", "S_4", "--gens", "(12),(1234)", "--mode", "segal"}).out ==
        "group,mode,d,alpha,minimal_t,paper_bound\n\"S_4\",segal,2,4,2,190\n");
  CHECK(call({"residuals", "--group", "SL(2,5)"}).out == "group,order,g1,g2,g3\n\"SL(2,5)\",120,120,2,1\n");
  CHECK(call({"density", "--tau-product", "5,6", "--check-closure"}).out ==
        "group,order,abelianization,closure_order,is_whole\n\"tau(5,6)\",43200,2,43200,1\n");
  CHECK(call({"alpha", "--group", "S_4"}).out == "group,order,alpha\n\"S_4\",24,4\n");
  CHECK(call({"qsimple", "--group", "A_5 x A_5", "--swap"}).out ==
        "group,eligible,perfect,minimal_c,witness\n\"A_5 x A_5\",true,true,2,found\n");
  const auto f = call({"filterbase", "--family", kData + "/family.json", "--beta", "0.5"});
  CHECK(f.code == 0);
  CHECK(f.out.rfind("index,h\n", 0) == 0);
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 10);
  CHECK(call({"filterbase", "--family", kData + "/mixed_family.json"}).code == 2);
  const auto l = call({"lemma-check", "--group", "S_4"});
  CHECK(l.code == 0);
  const auto c = call({"cover", "--corpus", kData + "/corpus.txt", "--all-classes"});
  CHECK(c.code == 0);
  CHECK(c.out.find("\"PSL(2,7)\"") != std::string::npos);
  CHECK(c.out.find("\"SL(2,5)\",\"1,1;0,1\",12,5,") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> args{"--seed", "5", "filterbase", "--dichotomy", "--trials", "6", "--length", "12"};
  const auto a = call(args);
  const auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto t1 = call({"--threads", "1", "cover", "--default-corpus", "--all-classes"});
  const auto t4 = call({"--threads", "4", "cover", "--default-corpus", "--all-classes"});
  CHECK(t1.out == t4.out);
}

TEST_CASE("class table cache") {
  const auto dir = scratch("cache");
  const std::vector<std::string> args{"--cache-dir", dir.string(), "cover", "--group", "PSL(2,11)", "--all-classes"};
  const auto cold = call(args);
  REQUIRE(cold.code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().filename().string().rfind("classes-", 0) == 0;
  CHECK(files == 1);
  const auto warm = call(args);
  CHECK(warm.out == cold.out);
  CHECK(warm.out == call({"cover", "--group", "PSL(2,11)", "--all-classes"}).out);
  // A damaged entry is rebuilt, not trusted.
  for (const auto& e : fs::directory_iterator(dir)) std::ofstream(e.path()) << "{\"format\": 1}";
  CHECK(call(args).out == cold.out);
}

TEST_CASE("report file and metadata sidecar") {
  const auto dir = scratch("out");
  const auto report = dir / "r.csv";
  const auto r = call({"--seed", "9", "--out", report.string(), "alpha", "--group", "A_4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(report) == "group,order,alpha\n\"A_4\",12,4\n");
  const auto meta = nlohmann::json::parse(slurp(dir / "r.csv.meta.json"));
  CHECK(meta.at("version") == classcover::cli::kVersion);
  CHECK(meta.at("seed") == 9);
  CHECK(meta.at("threads") == 1);
  CHECK(meta.at("format") == "csv");
  CHECK(meta.at("command").size() == 7);
  CHECK(meta.contains("started"));
  CHECK(meta.contains("elapsedSeconds"));
  const auto other = dir / "m.json";
  CHECK(call({"--out", report.string(), "--meta", other.string(), "alpha", "--group", "A_4"}).code == 0);
  CHECK(fs::exists(other));
}

TEST_CASE("configuration precedence") {
  const std::string cfg = kData + "/config.json";
  const std::vector<std::string> base{"alpha", "--group", "A_4"};
  auto with = [&](std::vector<std::string> pre) {
    pre.insert(pre.end(), base.begin(), base.end());
    return pre;
  };
  CHECK(call(with({"--config", cfg})).out.front() == '{');
  CHECK(call(with({"--config", cfg}), {{"CLASSCOVER_FORMAT", "csv"}}).out.rfind("group,", 0) == 0);
  CHECK(call(with({"--config", cfg, "--format", "csv"}), {{"CLASSCOVER_FORMAT", "json"}}).out.rfind("group,", 0) == 0);
  CHECK(call(base, {{"CLASSCOVER_FORMAT", "json"}}).out.front() == '{');
  CHECK(call(base, {{"CLASSCOVER_FORMAT", "xml"}}).code == 2);
  const auto dir = scratch("cfg");
  CHECK(call(with({"--config", cfg, "--out", (dir / "a.csv").string()})).code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "a.csv.meta.json")).at("threads") == 2);

  const auto toml = call({"--config", kData + "/config.toml", "cover", "--group", "A_5"});
  REQUIRE(toml.code == 0);
  CHECK(toml.out.front() == '{');
  CHECK(call({"--config", kData + "/unknown_key.json", "alpha", "--group", "A_4"}).code == 2);
  CHECK(call({"--config", kData + "/missing.json", "alpha", "--group", "A_4"}).code == 2);
}
