#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bstretch/starting_phase.hpp"
#include "bstretch/state.hpp"

namespace bst {

// Groups of the unused-bin ordering, left to right.
enum class UGroup { JustQ2, Small, Q1, Empty, DeltaRight, Nice };
// Set membership fixed when the plan is built.
enum class Origin { D, SL, SminusL, E, Other };

const char* name(UGroup g);
const char* name(Origin o);

struct UBin {
  int bin = -1;
  int pos = 0;
  UGroup group = UGroup::Empty;
  Origin origin = Origin::Other;
  Q sort_level;  // level used for the ordering and for comparisons with beta
  bool nonempty = false;
  bool in_d = false;
  bool d_at_touch = false;
  bool touched = false;
  bool closed = false;
  bool left_u = false;  // removed from U (counted in u no more)
  int stream = -1;  // FillupType index of the stream that owns the bin
  int slot = -1;    // index in the stream's bin list
  int count = 0;    // items received in the fill-up phase
  int target = 0;   // items per bin for hard streams, 0 for First Fit streams
  bool stage1 = false;
  Q counted_start;  // Counted of the bin when the phase began
  Q stage1_credit;  // credit drawn from the Q15 pool
  Q contrib1, contrib3;  // recorded contribution to the stream pools once closed
  bool pooled = false;
};

// Pooled credit of the closed bins of one stream: the total surplus above the
// quota pays the smallest deficits first.
struct CreditPool {
  Q surplus;
  std::multiset<Q> deficits;
  void add(const Q& v);
  void remove(const Q& v);
  long uncredited() const;
};

struct StreamState {
  std::vector<int> bins;  // U positions in opening order
  FirstFitIndex ff;       // over indices into `bins`
  int current = -1;       // U position of the bin in use
  long used_d = 0, used_n = 0;  // bins opened since the stage began
  bool next_jq2 = true;         // quarter alternation
  CreditPool pool1, pool3;
  // closed bins: D deficits below 9-eps and non-D surplus above it
  Q d_deficit, n_surplus;
  Q assigned() const { return d_deficit < n_surplus ? d_deficit : n_surplus; }
};

struct FillupNote {
  long event = 0;
  std::string kind;  // "stage", "d-add", "close", "stage1-credit", "violation"
  std::string detail;
};

enum class FillupRoute { Regular, LastResort, Handoff };

struct FillupStep {
  TransitionRecord record;
  FillupType type = FillupType::FSmall1;
  int stage = 0;
  FillupRoute route = FillupRoute::Regular;
  std::string rule;
};

class FillupPlan {
 public:
  // Builds U, D, S_L, S_-L, E and beta0 from a frozen state.
  explicit FillupPlan(State& s);

  GoodKind entry_good_situation() const { return entry_; }
  FillupStep place(const Item& item);

  // Moves to the next stage; returns false when no later stage exists.
  bool advance_stage();
  GoodKind detect_good_situation() const;

  int stage() const { return stage_; }
  const Q& beta() const { return beta_; }
  const Q& beta0() const { return beta0_; }
  long u() const { return u_count_; }
  long initial_u() const { return initial_u_; }
  long initial_d() const { return initial_d_; }
  long e0() const { return e0_; }
  long untouched_d() const { return untouched_d_; }
  long d_size() const { return d_size_; }
  long half_full() const;
  long rule1_violations() const;
  Q invariant4_rhs() const;
  bool stage6_reached() const { return stage6_; }
  long d_exhausted() const { return d_exhausted_; }
  const Q& stage1_initial() const { return stage1_initial_; }
  const Q& stage1_remaining() const { return stage1_remaining_; }
  const Q& stage1_paid() const { return stage1_paid_; }
  const Q& stage1_residual() const { return stage1_residual_; }
  // packed into D, plus uncounted start content of D bins, Stage 1 payments and
  // surplus of closed non-D bins assigned to D bins of the same stream
  Q d_volume() const { return d_volume_ + assigned_; }
  long d_added() const { return d_added_; }
  const std::vector<UBin>& ubins() const { return u_; }
  const StreamState& stream(FillupType t) const { return streams_[static_cast<int>(t)]; }
  const std::vector<FillupNote>& notes() const { return notes_; }
  long count_origin(Origin o) const;

  // Counts of untouched bins outside D that are nonempty (the far-right nice
  // bins are left out), and untouched S_L bins outside D.
  long untouched_nonempty_outside_d() const { return untouched_ne_nond_; }
  long untouched_sl_outside_d() const { return untouched_sl_nond_; }
  long untouched_justq2() const { return untouched_jq2_; }
  long untouched_nonempty_other() const { return untouched_ne_nonjq2_; }

 private:
  struct Choice {
    int pos = -1;
    bool advance = false;
    const char* rule = "";
  };

  Q own_credit(const UBin& b) const;
  Q credit(const UBin& b) const { return own_credit(b) + b.stage1_credit; }
  bool credited(const UBin& b) const;

  void touch(int pos, int stream);
  void untrack(int pos);
  void close(int pos);
  void leave_u(int pos);
  void repool(int pos);
  void add_to_d(int pos);
  void apply_rule2();
  void complete_hard(int pos);
  void set_stage(int st);
  void note(const std::string& kind, const std::string& detail);

  Choice route_first_fit(FillupType t, const Q& x);
  Choice route_hard(FillupType t, const Q& x);
  std::optional<int> pick_nond(FillupType t);
  std::optional<int> pick_d(const Q& x) const;
  int target_for(FillupType t, bool d) const;

  State* s_;
  const ConstantTable* t_;
  GoodKind entry_ = GoodKind::None;
  std::vector<UBin> u_;
  std::vector<int> pos_of_;  // bin id -> U position or -1
  std::vector<int> orphans_;  // U bins first touched by the rule of last resort
  std::array<StreamState, kFillupTypeCount> streams_;

  Q beta0_, beta_;
  int stage_ = 2;
  long initial_u_ = 0, u_count_ = 0, initial_d_ = 0, e0_ = 0;
  long untouched_d_ = 0, d_size_ = 0, d_added_ = 0, d_exhausted_ = 0;
  long untouched_ne_nond_ = 0, untouched_sl_nond_ = 0, untouched_jq2_ = 0, untouched_ne_nonjq2_ = 0;
  Q d_volume_, assigned_;
  Q stage1_initial_, stage1_remaining_, stage1_paid_, stage1_residual_;
  bool stage6_ = false;

  FirstFitIndex ff_ud_;         // untouched D bins
  FirstFitIndex ff_nonjq2_;     // untouched bins outside justQ2
  FirstFitIndex ff_jq2_;        // untouched justQ2 bins
  FirstFitIndex ff_ne_nonjq2_;  // untouched nonempty bins outside justQ2
  FirstFitIndex ff_u_;          // all bins still in U
  std::set<std::pair<Q, int>> main_;  // (sort level, -pos): untouched nonempty S/Q1 bins outside D
  std::set<std::pair<Q, int>> sml_;   // same, restricted to S_-L
  std::set<int> empty_nond_;          // untouched empty bins outside D
  std::set<int> nond_;                // untouched bins outside D

  std::vector<FillupNote> notes_;
};

// Packs after a fill-up good situation: First Fit over the remaining unused bins
// (VerySimpleFillUp) or over all bins (WeightBasedQ2), then Best Fit.
class FillupGoodPacker {
 public:
  FillupGoodPacker(State& s, const FillupPlan& plan, GoodKind kind);
  TransitionRecord place(const Item& item, bool* fallback = nullptr);

 private:
  State* s_;
  GoodKind kind_;
  std::vector<int> order_;
  FirstFitIndex index_;
};

// Best Fit over every bin; the rule of last resort of both phases.
TransitionRecord place_best_fit_any(State& s, const Item& item, bool last_resort);

std::vector<std::string> audit_fillup(const FillupPlan& plan, const State& s);

}  // namespace bst
