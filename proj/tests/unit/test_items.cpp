#include "doctest.h"

#include <random>

#include "bstretch/items.hpp"

using namespace bst;

namespace {
const ConstantTable T = derive_constants({60000, make_q(1, 31)});
}

TEST_CASE("starting classification") {
  CHECK(classify_starting(Q(3), T) == StartingType::Quarter);
  CHECK(classify_starting(Q(12), T) == StartingType::Top);
  CHECK(classify_starting(make_q(184, 31), T) == StartingType::Nice);
  CHECK(classify_starting(make_q(90, 31), T) == StartingType::Small1);
  CHECK_THROWS_AS(classify_starting(Q(0), T), std::out_of_range);
  CHECK_THROWS_AS(classify_starting(make_q(121, 10), T), std::out_of_range);
}

TEST_CASE("fill-up classification") {
  CHECK(classify_fillup(make_q(278, 31), Q(5), T) == FillupType::FLargePlus);
  CHECK(classify_fillup(Q(1), Q(5), T) == FillupType::FSmall1);
  CHECK(classify_fillup(make_q(125, 31), Q(5), T) == FillupType::FQuarter);
  CHECK_THROWS_AS(classify_fillup(Q(1), Q(7), T), std::out_of_range);
  // stage-1 sentinel bounds never yield quarter++ or large+
  for (int k = 1; k <= 1200; ++k) {
    auto f = classify_fillup(make_q(k, 100), Q(0), T, true);
    CHECK(f != FillupType::FQuarterPlusPlus);
    CHECK(f != FillupType::FLargePlus);
  }
  // beta <= (9-eps)/2: no quarter++ sizes
  Q beta = make_q(139, 31);
  for (int k = 1; k <= 1200; ++k)
    CHECK(classify_fillup(make_q(k, 100), beta, T) != FillupType::FQuarterPlusPlus);
}

TEST_CASE("weights") {
  CHECK(weight(Q(6), WeightScheme::WTop, T) == 2);
  CHECK(weight(Q(6), WeightScheme::WLarge, T) == 2);
  CHECK(weight(make_q(180, 31), WeightScheme::WLarge, T) == 0);  // nice
  for (auto s : {WeightScheme::WTop, WeightScheme::WBig, WeightScheme::WLarge})
    CHECK(weight(Q(12), s, T) == 4);
  // floor formulas over the type infima
  for (int i = 0; i < 8; ++i) {
    auto ty = static_cast<StartingType>(i);
    Q inf = type_infimum(ty, T);
    CHECK(weight(ty, WeightScheme::WTop) == floor_long(make_q(5, 12) * inf));
    CHECK(weight(ty, WeightScheme::WBig) == 2 * floor_long(make_q(3, 12) * inf));
  }
}

TEST_CASE("partition and monotone weights over random sizes") {
  std::mt19937_64 rng(7);
  Q beta = make_q(5, 1);
  for (int r = 0; r < 100000; ++r) {
    Q s = make_q(static_cast<long>(rng() % 1200000) + 1, 100000);
    auto st = classify_starting(s, T);
    CHECK(type_infimum(st, T) < s);
    CHECK(s <= type_maximum(st, T));
    auto ft = classify_fillup(s, beta, T);
    auto b = fillup_bounds(beta, T, false);
    CHECK(s <= b[static_cast<int>(ft)]);
    for (int i = 0; i < static_cast<int>(ft); ++i) CHECK(b[i] < s);
  }
  for (auto sc : {WeightScheme::WTop, WeightScheme::WBig, WeightScheme::WLarge})
    for (int i = 1; i < 8; ++i)
      CHECK(weight(static_cast<StartingType>(i - 1), sc) <= weight(static_cast<StartingType>(i), sc));
}
