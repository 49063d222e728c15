#pragma once

#include <array>
#include <string>

#include "bstretch/constants.hpp"

namespace bst {

struct Item {
  long id = 0;
  Q size;
};

enum class StartingType { Small1, Quarter, Small2, Nice, Half, Large, Big, Top };
enum class Supertype { None, Middle, Dominant };

enum class FillupType {
  FSmall1,
  FQuarter,
  FQuarterPlus,
  FQuarterPlusPlus,
  FSmall2,
  FEasy,
  FLargeMinus,
  FLargePlus,
  FBig,
  FTop
};
inline constexpr int kFillupTypeCount = 10;

enum class WeightScheme { WTop, WBig, WLarge };

const char* name(StartingType t);
const char* name(FillupType t);
const char* name(WeightScheme s);

Supertype supertype(StartingType t);
inline bool is_small(StartingType t) { return t == StartingType::Small1 || t == StartingType::Small2; }
inline bool is_dominant(StartingType t) { return t == StartingType::Big || t == StartingType::Top; }
// half, large or dominant ("half or larger")
inline bool is_half_or_larger(StartingType t) { return t >= StartingType::Half; }

StartingType classify_starting(const Q& size, const ConstantTable& t);

// Upper bounds of the ten fill-up ranges in order.  With stage1 = true the
// quarter+ bound is (9-eps)/2 and the large- bound is 9-eps.
std::array<Q, kFillupTypeCount> fillup_bounds(const Q& beta, const ConstantTable& t, bool stage1);
FillupType classify_fillup(const Q& size, const Q& beta, const ConstantTable& t, bool stage1 = false);

int weight(StartingType type, WeightScheme scheme);
int weight(const Q& size, WeightScheme scheme, const ConstantTable& t);

// Infimum of the starting type range (0 for Small1).
Q type_infimum(StartingType type, const ConstantTable& t);
Q type_maximum(StartingType type, const ConstantTable& t);

}  // namespace bst
