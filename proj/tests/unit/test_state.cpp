#include "doctest.h"

#include <algorithm>

#include "bstretch/state.hpp"

using namespace bst;

namespace {

const ConstantTable T = derive_constants({100, make_q(1, 31)});

long item_no = 0;

TransitionRecord put(State& s, int bin, const Q& size) { return s.place(bin, Item{item_no++, size}); }
int put_fresh(State& s, const Q& size) {
  int b = *s.fresh_bin();
  put(s, b, size);
  return b;
}

bool has(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& x) { return x.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("placements follow the transition table") {
  State s(10, T);
  int a = put_fresh(s, Q(3));
  CHECK(s.bin(a).tag == Tag::JustQ1);
  CHECK(s.q1() == 1);

  int b = put_fresh(s, Q(7));
  CHECK(s.bin(b).tag == Tag::DLarge);
  auto r = put(s, b, Q(6));
  CHECK(r.from == Tag::DLarge);
  CHECK(r.to == Tag::L);

  int c = put_fresh(s, Q(3));
  put(s, c, Q(3));
  CHECK(s.bin(c).tag == Tag::JustQ2);
  put(s, c, make_q(19, 2));
  CHECK(s.bin(c).tag == Tag::Q25);
  CHECK(s.q2() == 1);
}

TEST_CASE("capacity is enforced") {
  State s(4, T);
  int a = put_fresh(s, Q(12));
  CHECK_THROWS_AS(put(s, a, Q(7)), CapacityExceeded);
  CHECK(s.bin(a).level == 12);
}

TEST_CASE("fresh state audits clean") {
  State s(50, T);
  CHECK(audit_invariants(s, true).empty());
  CHECK(block_counts(s) == BlockCounts{0, 0, 0});
}

TEST_CASE("block thresholds") {
  State s(5, T);
  int a = put_fresh(s, Q(9));  // 9 > 278/31
  CHECK(block_counts(s) == BlockCounts{1, 1, 1});
  CHECK(s.blocks() == block_counts(s));
  State u(5, T);
  put_fresh(u, Q(6));  // 184/31 < 6 <= 240/31
  CHECK(block_counts(u) == BlockCounts{1, 0, 0});
  (void)a;
}

TEST_CASE("X_q size") {
  SUBCASE("fifteen justQ1 bins") {
    State s(40, T);
    for (int i = 0; i < 15; ++i) put_fresh(s, Q(3));
    CHECK(s.q1() == 15);
    CHECK(s.xq().size() == 15);
    CHECK(s.compute_xq() == s.xq());
  }
  SUBCASE("empty without Q1") {
    State s(40, T);
    put_fresh(s, Q(7));
    CHECK(s.xq().empty());
  }
  SUBCASE("Qonebig leaves first") {
    State s(40, T);
    std::vector<int> q1;
    for (int i = 0; i < 14; ++i) q1.push_back(put_fresh(s, Q(3)));
    int j = put_fresh(s, Q(3));
    put(s, j, Q(3));
    put(s, q1.front(), make_q(19, 2));
    REQUIRE(s.bin(q1.front()).tag == Tag::QOneBig);
    CHECK(s.q1() == 14);
    CHECK(s.q2() == 1);
    CHECK(s.xq().size() == 12);
    CHECK(std::find(s.xq().begin(), s.xq().end(), q1.front()) == s.xq().end());
    CHECK(s.compute_xq() == s.xq());
  }
}

TEST_CASE("forged quarter imbalance is reported") {
  State s(40, T);
  for (int i = 0; i < 16; ++i) put_fresh(s, Q(3));
  CHECK(has(audit_invariants(s, false), "quarter balance"));
}

TEST_CASE("Counted is maintained incrementally") {
  State s(60, T);
  const Q sizes[] = {Q(1), Q(3), make_q(9, 2), Q(6), Q(7), Q(10), Q(12), make_q(11, 10)};
  for (int round = 0; round < 4; ++round)
    for (const auto& x : sizes) {
      std::optional<int> b;
      for (int id = 0; id < s.opened() && !b; ++id)
        if (s.fits(id, x) && State::regular_transition(s.bin(id).tag, classify_starting(x, T))) b = id;
      if (!b) b = s.fresh_bin();
      put(s, *b, x);
      CHECK(s.counted() == s.recount_counted());
    }
}

TEST_CASE("top-k sum") {
  TopKSum t;
  for (int v : {5, 1, 9, 3}) t.insert(Q(v));
  t.set_k(2);
  CHECK(t.sum() == 14);
  t.erase(Q(9));
  CHECK(t.sum() == 8);
  t.set_k(10);
  CHECK(t.sum() == 9);
}
