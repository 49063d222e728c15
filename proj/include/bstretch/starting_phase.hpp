#pragma once

#include <string>
#include <vector>

#include "bstretch/state.hpp"

namespace bst {

enum class Phase { Starting, FillUp, GoodSituation };
enum class GoodKind { None, WeightExhausted, SimpleFillUp, WeightBasedPacking, VerySimpleFillUp, WeightBasedQ2 };

const char* name(Phase p);
const char* name(GoodKind k);

struct PhaseController {
  Phase phase = Phase::Starting;
  GoodKind kind = GoodKind::None;
  bool last_resort_used = false;
  bool nice_rule_violated = false;
};

struct Decision {
  int bin = -1;
  bool last_resort = false;
  bool nice_violation = false;
  std::string rule;
};

// First applicable rule of Step 1, then Step 2, then the rule of last resort.
// Does not modify the state; bin = -1 if the item fits nowhere.
Decision choose_starting(const State& s, const Item& item);

struct StartingStep {
  Decision decision;
  TransitionRecord record;
  int matched = 0;       // Qmatch triples formed
  int swap_target = -1;  // bin that received the swapped quarter weight
};

// Places the item and applies the matching and swapping rules.
StartingStep place_item_starting(State& s, const Item& item);

Q tfirst_now(const State& s);
bool check_fillup_trigger(const State& s);

// Size of the maximal prefix F (bins by decreasing level, average >= 13-3eps,
// last level >= 12) is at least FFcond.
bool simple_fillup_prefix(const State& s);
GoodKind detect_good_situation(const State& s);

// Packs items once a starting-phase good situation holds.
class GoodSituationPacker {
 public:
  GoodSituationPacker(State& s, GoodKind kind);
  GoodKind kind() const { return kind_; }
  // Returns the transition; `fallback` is set when the item had to leave the
  // designated bin set (Best Fit over all bins).
  TransitionRecord place(const Item& item, bool* fallback = nullptr);

 private:
  State* s_;
  GoodKind kind_;
  std::vector<int> order_;  // useful bins for SimpleFillUp
  FirstFitIndex index_;
};

}  // namespace bst
