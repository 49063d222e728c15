#include "doctest.h"

#include "bstretch/fillup_phase.hpp"

using namespace bst;

namespace {

const ConstantTable T = derive_constants({300, make_q(1, 31)});

// `filled` bins holding one item of size `x` each, the rest empty.
State uniform(long m, int filled, const Q& x) {
  State s(m, T);
  for (int i = 0; i < filled; ++i) s.place(*s.fresh_bin(), Item{i, x});
  s.freeze();
  return s;
}

}  // namespace

TEST_CASE("entry good situations") {
  State l(30, T);
  long k = 0;
  for (int i = 0; i < 5; ++i) {
    int b = *l.fresh_bin();
    l.place(b, Item{k++, Q(7)});
    l.place(b, Item{k++, Q(6)});
  }
  l.freeze();
  CHECK(FillupPlan(l).entry_good_situation() == GoodKind::VerySimpleFillUp);

  State q(30, T);
  for (int i = 0; i < 5; ++i) {
    int b = *q.fresh_bin();
    q.place(b, Item{k++, Q(3)});
    q.place(b, Item{k++, Q(3)});
  }
  q.freeze();
  CHECK(FillupPlan(q).entry_good_situation() == GoodKind::WeightBasedQ2);
}

TEST_CASE("standard entry") {
  State s = uniform(300, 200, Q(5));
  FillupPlan p(s);
  CHECK(p.entry_good_situation() == GoodKind::None);
  CHECK(p.beta0() == 5);
  CHECK(p.e0() == 100);
  // d = ceil(38/316 * 300 + 278/316 * 14)
  CHECK(p.initial_d() == 49);
  CHECK(p.count_origin(Origin::D) == 49);
  CHECK(p.count_origin(Origin::SminusL) == 100);
  CHECK(p.count_origin(Origin::SL) == 51);
  CHECK(p.count_origin(Origin::E) == 100);
  for (const auto& b : p.ubins()) {
    if (b.origin == Origin::SminusL) CHECK(b.bin >= 100);
    if (b.origin == Origin::SminusL) CHECK(b.bin < 200);
  }
  CHECK(p.stage() == 2);
  CHECK(p.beta() == T.quarter_max);
  CHECK(p.invariant4_rhs() <= Q(p.untouched_d()));
}

TEST_CASE("large+ items under beta = 4-4eps") {
  State s = uniform(300, 200, Q(5));
  FillupPlan p(s);
  Q x = Q(9) - 2 * T.eps;
  REQUIRE(classify_fillup(x, p.beta(), T) == FillupType::FLargePlus);
  for (int i = 0; i < 40; ++i) {
    auto st = p.place(Item{1000 + i, x});
    CHECK(st.record.bin >= 0);
    CHECK(s.bin(st.record.bin).level <= T.online_capacity);
    CHECK(audit_fillup(p, s).empty());
  }
  CHECK(p.half_full() <= 13);
  CHECK_FALSE(p.stage6_reached());
}

TEST_CASE("mixed fill-up stream keeps the invariants") {
  State s = uniform(300, 200, Q(5));
  FillupPlan p(s);
  const Q sizes[] = {Q(1), Q(4), make_q(9, 2), Q(5), Q(6), Q(8), Q(10), Q(12)};
  for (int i = 0; i < 120; ++i) {
    auto st = p.place(Item{2000 + i, sizes[(i * 5) % 8]});
    CHECK(s.bin(st.record.bin).level <= T.online_capacity);
    if (p.detect_good_situation() != GoodKind::None) break;
  }
  CHECK(audit_fillup(p, s).empty());
  CHECK(p.half_full() <= 13);
}
