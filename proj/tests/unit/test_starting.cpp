#include "doctest.h"

#include <algorithm>

#include "bstretch/starting_phase.hpp"

using namespace bst;

namespace {

const ConstantTable T = derive_constants({100, make_q(1, 31)});

struct Feeder {
  State s;
  long next = 0;
  explicit Feeder(long m) : s(m, T) {}
  StartingStep operator()(const Q& x) { return place_item_starting(s, Item{next++, x}); }
};

bool has(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& x) { return x.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("seventeen quarters") {
  Feeder f(100);
  for (int i = 0; i < 15; ++i) CHECK(f(Q(3)).record.to == Tag::JustQ1);
  auto sixteenth = f(Q(3));
  CHECK(sixteenth.record.bin == 0);
  CHECK(sixteenth.record.to == Tag::JustQ2);
  // q1 = 14 < 2 q2 + 15 again
  auto seventeenth = f(Q(3));
  CHECK(seventeenth.record.from == Tag::E);
  CHECK(seventeenth.record.to == Tag::JustQ1);
  CHECK(f.s.q1() == 15);
  CHECK(f.s.q2() == 1);
  CHECK(audit_invariants(f.s, true).empty());
}

TEST_CASE("big item joins a quarter bin") {
  Feeder f(100);
  f(Q(3));
  f(Q(3));
  auto st = f(make_q(19, 2));
  CHECK(st.record.from == Tag::JustQ1);
  CHECK(st.record.to == Tag::QOneBig);
}

TEST_CASE("half completes a large bin") {
  Feeder f(100);
  CHECK(f(Q(7)).record.to == Tag::DLarge);
  auto st = f(Q(6));
  CHECK(st.record.bin == 0);
  CHECK(st.record.to == Tag::L);
}

TEST_CASE("quarter with every justQ1 bin topped") {
  // all fifteen justQ1 bins become Q15 and still count in q1; the next quarter
  // has no justQ1 target and opens a bin
  Feeder f(100);
  for (int i = 0; i < 15; ++i) f(Q(3));
  for (int i = 0; i < 15; ++i) CHECK(f(Q(12)).record.to == Tag::Q15);
  CHECK(f.s.count(Tag::JustQ1) == 0);
  auto st = f(Q(3));
  CHECK(st.decision.rule == "quarter-empty");
  CHECK(f.s.q1() == 16);
  auto v = audit_invariants(f.s, true);
  CHECK(has(v, "quarter balance upper bound"));
  CHECK(has(v, "X_q larger than 15"));
}

TEST_CASE("good situations in the starting phase") {
  Feeder fresh(20);
  CHECK(detect_good_situation(fresh.s) == GoodKind::None);

  Feeder full(20);
  for (int i = 0; i < 20; ++i) full(Q(12));
  CHECK(full.s.total_weight()[0] == 80);
  CHECK(detect_good_situation(full.s) == GoodKind::WeightExhausted);
}

TEST_CASE("fill-up trigger") {
  Feeder f(100);
  CHECK_FALSE(check_fillup_trigger(f.s));
  Q expect = Q(300) + make_q(100, 31) + make_q(278, 31) * 14;
  CHECK(tfirst_now(f.s) == expect);
  CHECK(T.tfirst(100, 0, 0, 14) == expect);
}

TEST_CASE("good-situation packer places only where the item fits") {
  Feeder f(20);
  for (int i = 0; i < 20; ++i) f(Q(12));
  GoodSituationPacker p(f.s, GoodKind::WeightExhausted);
  for (int i = 0; i < 20; ++i) {
    auto r = p.place(Item{100 + i, make_q(184, 31)});
    CHECK(f.s.bin(r.bin).level <= T.online_capacity);
  }
}

TEST_CASE("decisions do not modify the state") {
  Feeder f(30);
  for (int i = 0; i < 10; ++i) f(Q(1 + i % 7));
  long ev = f.s.events();
  Q counted = f.s.counted();
  auto d = choose_starting(f.s, Item{99, Q(5)});
  CHECK(d.bin >= 0);
  CHECK(f.s.events() == ev);
  CHECK(f.s.counted() == counted);
}
