#include "bstretch/items.hpp"

#include <stdexcept>

namespace bst {

const char* name(StartingType t) {
  switch (t) {
    case StartingType::Small1: return "small1";
    case StartingType::Quarter: return "quarter";
    case StartingType::Small2: return "small2";
    case StartingType::Nice: return "nice";
    case StartingType::Half: return "half";
    case StartingType::Large: return "large";
    case StartingType::Big: return "big";
    case StartingType::Top: return "top";
  }
  return "?";
}

const char* name(FillupType t) {
  switch (t) {
    case FillupType::FSmall1: return "small1";
    case FillupType::FQuarter: return "quarter";
    case FillupType::FQuarterPlus: return "quarter+";
    case FillupType::FQuarterPlusPlus: return "quarter++";
    case FillupType::FSmall2: return "small2";
    case FillupType::FEasy: return "easy";
    case FillupType::FLargeMinus: return "large-";
    case FillupType::FLargePlus: return "large+";
    case FillupType::FBig: return "big";
    case FillupType::FTop: return "top";
  }
  return "?";
}

const char* name(WeightScheme s) {
  switch (s) {
    case WeightScheme::WTop: return "w_top";
    case WeightScheme::WBig: return "w_big";
    case WeightScheme::WLarge: return "w_large";
  }
  return "?";
}

Supertype supertype(StartingType t) {
  switch (t) {
    case StartingType::Nice:
    case StartingType::Half:
    case StartingType::Large: return Supertype::Middle;
    case StartingType::Big:
    case StartingType::Top: return Supertype::Dominant;
    default: return Supertype::None;
  }
}

Q type_maximum(StartingType type, const ConstantTable& t) {
  switch (type) {
    case StartingType::Small1: return t.small_max_1;
    case StartingType::Quarter: return t.quarter_max;
    case StartingType::Small2: return t.small_max_2;
    case StartingType::Nice: return t.nice_max;
    case StartingType::Half: return t.half_max;
    case StartingType::Large: return t.large_max;
    case StartingType::Big: return t.big_max;
    case StartingType::Top: return t.top_max;
  }
  return t.top_max;
}

Q type_infimum(StartingType type, const ConstantTable& t) {
  if (type == StartingType::Small1) return Q(0);
  return type_maximum(static_cast<StartingType>(static_cast<int>(type) - 1), t);
}

StartingType classify_starting(const Q& size, const ConstantTable& t) {
  if (size <= 0 || size > t.offline_capacity)
    throw std::out_of_range("item size outside (0,12]: " + to_string(size));
  if (size <= t.small_max_1) return StartingType::Small1;
  if (size <= t.quarter_max) return StartingType::Quarter;
  if (size <= t.small_max_2) return StartingType::Small2;
  if (size <= t.nice_max) return StartingType::Nice;
  if (size <= t.half_max) return StartingType::Half;
  if (size <= t.large_max) return StartingType::Large;
  if (size <= t.big_max) return StartingType::Big;
  return StartingType::Top;
}

std::array<Q, kFillupTypeCount> fillup_bounds(const Q& beta, const ConstantTable& t, bool stage1) {
  std::array<Q, kFillupTypeCount> b;
  b[0] = t.f_small1_max;
  b[1] = t.f_quarter_max;
  b[2] = stage1 ? t.f_qpp_max : t.q_plus_max(beta);
  b[3] = t.f_qpp_max;
  b[4] = t.f_small2_max;
  b[5] = t.f_easy_max;
  b[6] = stage1 ? t.f_large_max : t.large_minus_max(beta);
  b[7] = t.f_large_max;
  b[8] = t.f_big_max;
  b[9] = t.f_top_max;
  return b;
}

FillupType classify_fillup(const Q& size, const Q& beta, const ConstantTable& t, bool stage1) {
  if (size <= 0 || size > t.offline_capacity)
    throw std::out_of_range("item size outside (0,12]: " + to_string(size));
  if (!stage1 && (beta <= t.small_max_1 || beta > t.smallslot))
    throw std::out_of_range("beta outside (3-3eps, 6-6eps]: " + to_string(beta));
  auto b = fillup_bounds(beta, t, stage1);
  for (int i = 0; i < kFillupTypeCount; ++i)
    if (size <= b[i]) return static_cast<FillupType>(i);
  return FillupType::FTop;
}

int weight(StartingType type, WeightScheme scheme) {
  static constexpr int w_top[8] = {0, 1, 1, 2, 2, 2, 3, 4};
  static constexpr int w_big[8] = {0, 0, 0, 2, 2, 2, 4, 4};
  static constexpr int w_large[8] = {0, 0, 0, 0, 2, 4, 4, 4};
  int i = static_cast<int>(type);
  switch (scheme) {
    case WeightScheme::WTop: return w_top[i];
    case WeightScheme::WBig: return w_big[i];
    case WeightScheme::WLarge: return w_large[i];
  }
  return 0;
}

int weight(const Q& size, WeightScheme scheme, const ConstantTable& t) {
  return weight(classify_starting(size, t), scheme);
}

}  // namespace bst
