#include <cmath>

#include "catch_amalgamated.hpp"
#include "classcover/build.hpp"
#include "classcover/cover.hpp"
#include "support.hpp"

using namespace classcover;

TEST_CASE("covering numbers match the brute-force power sequence") {
  for (const char* s : {"A_5", "PSL(2,7)", "S_4", "A_4", "D_5", "SL(2,5)", "SL(2,3)", "S_3 x S_3"}) {
    CAPTURE(s);
    const auto G = build_group(s);
    const auto t = class_table(G);
    if (G.has_forms() && G.form_kind() == FormKind::Permutation) {
      const auto M = mirror(G);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto r = covering_number(G, t, i);
        const std::size_t want = oracle::covering_number(M.group, M.image(t.classes[i].members));
        CHECK(r.cn.value_or(0) == want);
      }
    } else {
      // Matrix and product tables: brute force straight on the table.
      oracle::Group O;
      O.order = G.order();
      O.mul = [&G](std::size_t a, std::size_t b) { return static_cast<std::size_t>(G.mul(static_cast<Index>(a), static_cast<Index>(b))); };
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto m = t.classes[i].members.members();
        const std::size_t want = oracle::covering_number(O, std::set<std::size_t>(m.begin(), m.end()));
        CHECK(covering_number(G, t, i).cn.value_or(0) == want);
      }
    }
  }
}

TEST_CASE("known covering numbers") {
  const auto G = build_group("A_5");
  const auto t = class_table(G);
  std::vector<std::size_t> cn;
  for (std::size_t i = 1; i < t.size(); ++i) cn.push_back(covering_number(G, t, i).cn.value());
  CHECK(cn == std::vector<std::size_t>{3, 3, 2, 2});
  CHECK_FALSE(covering_number(G, t, 0).cn.has_value());
  const auto S = build_group("S_4");
  const Index tr = S.parse_element("(1,2)").value();
  const auto r = covering_number(S, class_table(S).of(tr));
  CHECK_FALSE(r.cn.has_value());
}

TEST_CASE("products of several classes") {
  const auto G = build_group("A_5");
  const auto t = class_table(G);
  const auto& c5a = t.classes[1].members;
  const auto& c5b = t.classes[2].members;
  const auto M = mirror(G);
  const auto want = oracle::product(M.group, M.image(c5a), M.image(c5b));
  CHECK(M.image(product(G, c5a, c5b)) == want);
  const auto r = product_covers(G, {c5a, c5b}, 1);
  CHECK(r.covers == (want.size() == 60));
  CHECK(product_covers(G, {c5a, c5b}, 2).covers);
  ElementSet two(G.order());
  two.insert(0);
  two.insert(G.parse_element("(1,2,3)").value());
  CHECK(M.image(product(G, two, two)) == oracle::product(M.group, M.image(two), M.image(two)));
}

TEST_CASE("alternating sections") {
  CHECK(alpha(build_group("A_5")) == 5);
  CHECK(alpha(build_group("S_4")) == 4);
  CHECK(alpha(build_group("A_4")) == 4);
  CHECK(alpha(build_group("C_6")) == 3);
  CHECK(alpha(build_group("C_4")) == 0);
  CHECK(alpha(build_group("PSL(2,7)")) == 4);
  CHECK(alpha(build_group("SL(2,5)")) == 5);
  CHECK(alpha(build_group("PSL(2,11)")) == 5);
  CHECK(alpha(build_group("SL(2,3)")) == 4);
  CHECK(alpha(build_group("D_6")) == 3);
  CHECK(thrown([] { alpha(build_group("A_7")); }) == ErrorKind::CapExceeded);
  CHECK(alpha_of(parse_spec("A_9"), build_group("C_1")) == 9);
}

TEST_CASE("simple and quasisimple detection") {
  CHECK(is_simple_or_quasisimple(build_group("A_5")));
  CHECK(is_simple_or_quasisimple(build_group("SL(2,5)")));
  CHECK(is_simple_or_quasisimple(build_group("PSL(2,7)")));
  CHECK_FALSE(is_simple_or_quasisimple(build_group("SL(2,3)")));
  CHECK_FALSE(is_simple_or_quasisimple(build_group("A_5 x C_2")));
  CHECK_FALSE(is_simple_or_quasisimple(build_group("S_5")));
  CHECK_FALSE(is_simple_or_quasisimple(build_group("C_5")));
}

TEST_CASE("ratio report") {
  const auto rep = ls_ratio({parse_spec("A_5")});
  const double l = std::log(60.0);
  const double want = std::max({3 * std::log(12.0) / l, 2 * std::log(15.0) / l, 2 * std::log(20.0) / l});
  CHECK(rep.c_ls == Catch::Approx(want).epsilon(1e-12));
  CHECK(rep.c_alpha.at(5) == 3);
  CHECK(rep.member_alpha.at("A_5") == 5);
  CHECK(rep.rows.size() == 5);
  CHECK(rep.rows.front().central);
  CHECK(thrown([] { ls_ratio({parse_spec("S_5")}); }) == ErrorKind::PreconditionViolated);
  const auto q = ls_ratio({parse_spec("SL(2,5)")});
  std::size_t central = 0;
  for (const auto& r : q.rows) central += r.central ? 1 : 0;
  CHECK(central == 2);
}

TEST_CASE("thread count does not change the report") {
  const auto a = ls_ratio({parse_spec("PSL(2,11)"), parse_spec("A_6")}, kDefaultEnumerationCap, 1);
  const auto b = ls_ratio({parse_spec("PSL(2,11)"), parse_spec("A_6")}, kDefaultEnumerationCap, 4);
  CHECK(cover_csv(a.rows) == cover_csv(b.rows));
  CHECK(cover_csv(a.rows).rfind("group,class_rep,class_size,cn,ratio\n", 0) == 0);
}
