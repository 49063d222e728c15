#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bstretch/items.hpp"

namespace bst {

struct Slot {
  int slot_id = 0;
  Q capacity;
  Q level;
  std::vector<long> packed;

  Q residual() const { return capacity - level; }
};

struct Placement {
  long item = 0;
  Q size;
  int slot = -1;  // -1: fit nowhere
  Q level_before;
  Q level_after;
  int visible = 0;  // slots present when the item arrived
};

struct FitTrace {
  std::vector<Slot> slots;  // final state, in First Fit order
  std::vector<Placement> placements;
  std::optional<long> overflow_item;
};

// Mutate the chosen slot; return its index in `slots` or nullopt.
std::optional<int> first_fit(std::vector<Slot>& slots, const Item& item);
std::optional<int> best_fit(std::vector<Slot>& slots, const Item& item);

// Re-runs First Fit from the recorded capacities and items; true iff every
// placement matches (no feasible earlier slot was skipped).
bool replay_first_fit(const FitTrace& trace);

enum class BoundStatus { Pass, BoundViolated, PreconditionFailed };

struct BoundCheck {
  BoundStatus status = BoundStatus::Pass;
  Q total;
  Q bound;
  std::string detail;
};

// total packed >= k/(k+1) * sum_{j=k}^{v-k} s(j) (1-based), where s(j) is the
// capacity of slot j; requires k < v/2 and at least k items per slot.
BoundCheck check_varbin_bound(const FitTrace& trace, int k);

// Slots are online bins with prefill p(j) >= p (capacity = bin - p(j)); each
// received at least one item.  total including prefill >= (bin + p)(v-1)/2.
BoundCheck check_ff11_bound(const FitTrace& trace, const std::vector<Q>& prefill, const Q& p,
                            const Q& bin_size);

// Equal-capacity bins packed from scratch; the last |V|-2 hold >= k items and
// |V| >= 3.  total > k |V| / (k+1) (in units of the common capacity).
BoundCheck check_two_plus_bin(const FitTrace& trace, int k);

// Leftmost position whose key is >= x, in a max segment tree over positions.
// Positions that are not members hold the key -1.
class FirstFitIndex {
 public:
  void reserve(int n);
  void set(int pos, const Q& key);
  void erase(int pos) { set(pos, Q(-1)); }
  std::optional<int> first_at_least(const Q& x) const;
  int capacity() const { return size_; }

 private:
  int size_ = 0;
  std::vector<Q> tree_;
};

// Best Fit among members: minimal residual >= x, ties to the lowest id.
class BestFitIndex {
 public:
  void set(int id, const Q& residual);
  void erase(int id);
  std::optional<int> best(const Q& x) const;
  bool contains(int id) const { return id < static_cast<int>(key_.size()) && key_[id].second; }
  std::size_t size() const { return set_.size(); }
  const std::set<std::pair<Q, int>>& entries() const { return set_; }

 private:
  std::set<std::pair<Q, int>> set_;
  std::vector<std::pair<Q, bool>> key_;
};

// Runs First Fit item by item while recording the trace.  Items that fit
// nowhere are recorded with slot -1 and otherwise ignored.
class FirstFitRun {
 public:
  int add_slot(const Q& capacity, const Q& prefill = Q(0));
  std::optional<int> pack(const Item& item);
  const FitTrace& trace() const { return trace_; }
  FitTrace& trace() { return trace_; }

 private:
  FitTrace trace_;
  std::vector<Q> prefill_;
  FirstFitIndex index_;
};

}  // namespace bst
