#include "doctest.h"

#include <sstream>

#include "bstretch/instgen.hpp"

using namespace bst;

namespace {
const Config C31{100, make_q(1, 31)};
}

TEST_CASE("all-top profile") {
  auto inst = gen_random_feasible({37, make_q(1, 31)}, 5, "all-top");
  REQUIRE(inst.items.size() == 37);
  for (const auto& it : inst.items) CHECK(it.size == 12);
  CHECK(audit_certificate(inst).ok);
}

TEST_CASE("quarter-heavy profile") {
  auto inst = gen_random_feasible(C31, 1, "quarter-heavy");
  auto t = derive_constants(C31);
  std::vector<int> per_bin(C31.m);
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    CHECK(inst.items[i].size > t.small_max_1);
    CHECK(inst.items[i].size <= t.quarter_max);
    ++per_bin[inst.cert[i]];
  }
  for (int c : per_bin) CHECK(c == 3);
  CHECK(audit_certificate(inst).ok);
}

TEST_CASE("patterns") {
  auto twelve = gen_pattern({4, make_q(1, 31)}, {Pattern::AllTwelve});
  CHECK(twelve.items.size() == 4);

  auto flood = gen_pattern({31, make_q(1, 31)}, {Pattern::QuarterFlood});
  CHECK(flood.items.size() == 124);
  for (const auto& it : flood.items) CHECK(it.size == 3);

  Config c{10, make_q(1, 31)};
  auto sevens = gen_pattern(c, {Pattern::SmallThenSevens});
  long n7 = 0;
  for (std::size_t i = 0; i < sevens.items.size(); ++i) {
    if (sevens.items[i].size == 7 + c.eps) ++n7;
    else CHECK(n7 == 0);  // every small arrives first
  }
  CHECK(n7 == 10);

  for (auto p : kAllPatterns) {
    auto inst = gen_pattern({200, make_q(1, 62)}, {p, 3});
    CHECK(audit_certificate(inst).ok);
    CHECK(total_size(inst) <= 12 * 200);
  }
}

TEST_CASE("certificate audit rejects bad instances") {
  auto inst = gen_random_feasible({20, make_q(1, 31)}, 2, "mixed");
  REQUIRE(audit_certificate(inst).ok);

  auto heavy = inst;
  heavy.items.push_back({static_cast<long>(heavy.items.size()), Q(12)});
  heavy.cert.push_back(heavy.cert[0]);
  CHECK_FALSE(audit_certificate(heavy).ok);

  auto loose = inst;
  loose.cert.pop_back();
  CHECK_FALSE(audit_certificate(loose).ok);
}

TEST_CASE("generation is deterministic and round-trips") {
  for (const auto& prof : mixed_profiles())
    for (auto ord : kAllOrders) {
      auto a = gen_random_feasible({60, make_q(1, 62)}, 9, prof, ord);
      auto b = gen_random_feasible({60, make_q(1, 62)}, 9, prof, ord);
      std::ostringstream sa, sb;
      write_instance(sa, a);
      write_instance(sb, b);
      CHECK(sa.str() == sb.str());
      CHECK(audit_certificate(a).ok);
      std::istringstream in(sa.str());
      auto c = read_instance(in);
      CHECK(fingerprint(c.items) == fingerprint(a.items));
      CHECK(c.cert == a.cert);
    }
}
