#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "catch_amalgamated.hpp"
#include "classcover/build.hpp"
#include "classcover/group_spec.hpp"
#include "classcover/subgroup.hpp"
#include "support.hpp"

using namespace classcover;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("spec text round-trips through render") {
  for (const char* s : {"A_5", "S_4", "D_8", "C_12", "SL(2,3)", "GL(2,5)", "PSL(2,7)", "A_5 x C_6",
                        "SL(2,3) o SL(2,3)", "tau(5,6)", "C_1"}) {
    CAPTURE(s);
    CHECK(render(parse_spec(s)) == s);
  }
  CHECK(render(parse_spec("trivial")) == "C_1");
  CHECK(render(parse_spec("  A_5  x  C_2 ")) == "A_5 x C_2");
}

TEST_CASE("malformed specs are rejected with their kind") {
  CHECK(thrown([] { parse_spec("A_"); }) == ErrorKind::ParseError);
  CHECK(thrown([] { parse_spec("Q_8"); }) == ErrorKind::ParseError);
  CHECK(thrown([] { parse_spec("A_5 x"); }) == ErrorKind::ParseError);
  CHECK(thrown([] { parse_spec("SL(2,4)"); }) == ErrorKind::InvalidSpec);
  CHECK(thrown([] { parse_spec("A_0"); }) == ErrorKind::InvalidSpec);
  CHECK(thrown([] { parse_spec("tau(4)"); }) == ErrorKind::InvalidSpec);
  CHECK(thrown([] { parse_spec("tau(5,5)"); }) == ErrorKind::RepeatedDegree);
}

TEST_CASE("orders of the built families") {
  const std::vector<std::pair<const char*, std::size_t>> cases = {
      {"C_1", 1},       {"C_7", 7},         {"S_3", 6},        {"S_5", 120},       {"A_4", 12},
      {"A_6", 360},     {"D_3", 6},         {"D_8", 16},       {"D_1", 2},         {"D_2", 4},
      {"SL(2,3)", 24},  {"GL(2,3)", 48},    {"SL(2,5)", 120},  {"PSL(2,7)", 168},  {"SL(3,2)", 168},
      {"GL(2,5)", 480}, {"PSL(2,11)", 660}, {"A_4 x C_3", 36}, {"S_3 x S_3", 36},  {"SL(2,3) o SL(2,3)", 288},
      {"tau(5)", 120},  {"tau(5,6)", 43200}};
  for (const auto& [s, n] : cases) {
    CAPTURE(s);
    CHECK(build_group(s).order() == n);
  }
}

TEST_CASE("permutation tables agree with an independent closure") {
  for (const char* s : {"S_4", "A_5", "D_6", "C_9", "tau(5)"}) {
    CAPTURE(s);
    const auto G = build_group(s);
    const auto M = mirror(G);
    REQUIRE(M.group.order == G.order());
    for (Index a = 0; a < G.order(); ++a)
      for (Index b = 0; b < G.order(); b += 7) CHECK(M.of[G.mul(a, b)] == M.group.mul(M.of[a], M.of[b]));
  }
}

TEST_CASE("multiplication is the right action") {
  const auto G = build_group("S_3");
  const Index a = G.parse_element("(1,2)").value();
  const Index b = G.parse_element("(2,3)").value();
  // 1 -> 2 under a, then 2 -> 3 under b
  CHECK(G.render(G.mul(a, b)) == "(132)");
  CHECK(G.render(G.mul(b, a)) == "(123)");
}

TEST_CASE("conjugation, commutator, power and order identities") {
  const auto G = build_group("S_4");
  CHECK(G.identity() == 0);
  CHECK(G.render(0) == "()");
  for (Index x = 0; x < G.order(); ++x) {
    CHECK(G.mul(x, G.inv(x)) == 0);
    CHECK(G.mul(G.inv(x), x) == 0);
    const std::size_t o = G.element_order(x);
    CHECK(G.power(x, static_cast<long long>(o)) == 0);
    CHECK(G.power(x, -1) == G.inv(x));
    for (Index g = 0; g < G.order(); ++g) {
      CHECK(G.conj(x, g) == G.mul(G.inv(g), G.mul(x, g)));
      CHECK(G.comm(x, g) == G.mul(G.mul(G.inv(x), G.inv(g)), G.mul(x, g)));
    }
  }
}

TEST_CASE("elements render and parse back") {
  for (const char* s : {"A_5", "SL(2,3)", "PSL(2,7)", "A_4 x C_3", "SL(2,3) o SL(2,3)"}) {
    CAPTURE(s);
    const auto G = build_group(s);
    for (Index x = 0; x < G.order(); ++x) CHECK(G.parse_element(G.render(x)) == x);
  }
  const auto G = build_group("A_5");
  CHECK(G.parse_element("id") == Index{0});
  CHECK_FALSE(G.parse_element("(1,2)").has_value());
  CHECK(thrown([&] { (void)G.parse_element("(1,9,2)"); }) == ErrorKind::ParseError);
  const auto M = build_group("SL(2,3)");
  CHECK(M.parse_element("1,1;0,1").has_value());
  CHECK_FALSE(M.parse_element("1,1;1,1").has_value());
}

TEST_CASE("enumeration cap") {
  CHECK(thrown([] { build_group("A_9", 1000); }) == ErrorKind::CapExceeded);
  CHECK(thrown([] { build_group("A_5 x A_5", 3000); }) == ErrorKind::CapExceeded);
  CHECK(thrown([] { build_group("A_5", 120); }) == std::nullopt);
  CHECK(thrown([] { build_group("SL(4,3)"); }) == ErrorKind::CapExceeded);
}

TEST_CASE("central products") {
  const auto G = build_group("SL(2,3) o SL(2,3)");
  CHECK(center(G).order() == 2);
  REQUIRE(G.factors().size() == 2);
  for (const auto& f : G.factors()) {
    std::set<Index> img(f.embedding.begin(), f.embedding.end());
    CHECK(img.size() == 24);
  }
  const auto S = build_group("SL(2,3)");
  const Index t = S.parse_element("1,1;0,1").value();
  CHECK(thrown([&] { central_product({S, S}, std::vector<Index>{t, t}, kDefaultEnumerationCap, "x"); }) ==
        ErrorKind::IdentificationNotCentral);
  CHECK(thrown([&] { central_product({S, S}, std::vector<Index>{0}, kDefaultEnumerationCap, "x"); }) ==
        ErrorKind::IdentificationNotIsomorphism);
  const auto C = build_group("C_4");
  const auto C2 = build_group("C_2");
  CHECK(thrown([&] { central_product({C, C2}, std::vector<Index>{C.generators()[0], C2.generators()[0]},
                                     kDefaultEnumerationCap, "x"); }) == ErrorKind::IdentificationNotIsomorphism);
}

TEST_CASE("generator files") {
  const auto one = temp_file("cc_gen1.json", R"({"degree": 5, "generators": [[2,3,1,4,5],[1,2,4,5,3]]})");
  const auto zero = temp_file("cc_gen0.json", R"({"degree": 4, "generators": [[1,0,2,3],[1,2,3,0]]})");
  const auto mat = temp_file("cc_genm.json", R"({"n": 2, "p": 3, "generators": [[[1,1],[0,1]],[[1,0],[1,1]]]})");
  CHECK(build_group("file(" + one + ")").order() == 60);
  CHECK(build_group("file(" + zero + ")").order() == 24);
  CHECK(build_group("file(" + mat + ")").order() == 24);
  const auto bad = temp_file("cc_genb.json", R"({"degree": 3, "generators": [[1,1,2]]})");
  CHECK(thrown([&] { build_group("file(" + bad + ")"); }) == ErrorKind::InvalidSpec);
  const auto junk = temp_file("cc_genj.json", "{not json");
  CHECK(thrown([&] { build_group("file(" + junk + ")"); }) == ErrorKind::ParseError);
  CHECK(thrown([] { build_group("file(/nonexistent/cc.json)"); }) == ErrorKind::IoError);
}

TEST_CASE("residual series") {
  {
    const auto r = residuals(build_group("S_4"));
    CHECK(r.g1.order() == 1);
    CHECK(r.g3.order() == 1);
  }
  {
    const auto r = residuals(build_group("A_5 x C_2"));
    CHECK(r.g1.order() == 60);
    CHECK(r.g2.order() == 1);
    CHECK(r.g3.order() == 1);
  }
  {
    const auto r = residuals(build_group("SL(2,5)"));
    CHECK(r.g1.order() == 120);
    CHECK(r.g2.order() == 2);
    CHECK(r.g3.order() == 1);
  }
}

TEST_CASE("random words multiply consistently with the oracle") {
  const auto G = build_group("tau(5,6)");
  const auto gens = G.generators();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Index x = 0;
    oracle::Perm p = oracle::identity(G.form_degree());
    for (int k = 0; k < 12; ++k) {
      const Index g = gens[rng() % gens.size()];
      x = G.mul(x, g);
      p = oracle::mul(p, perm_of(G, g));
    }
    CHECK(perm_of(G, x) == p);
  }
}
