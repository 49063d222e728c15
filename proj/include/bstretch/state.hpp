#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bstretch/fitpack.hpp"
#include "bstretch/items.hpp"

namespace bst {

enum class Tag : std::uint8_t {
  E,
  S,
  L,
  JustQ1,
  JustQ2,
  QOneBig,
  Q15,
  Q25,
  QMatch,
  N,
  DLarge,
  DHalfBar,
  DHalfS,
  DHalfQ,
  DNice1,
  DNice2
};
inline constexpr int kTagCount = 16;

const char* name(Tag t);
inline bool in_q1(Tag t) { return t == Tag::JustQ1 || t == Tag::QOneBig || t == Tag::Q15; }
inline bool in_q2(Tag t) { return t == Tag::JustQ2 || t == Tag::Q25; }
inline bool in_q5(Tag t) { return t == Tag::Q15 || t == Tag::Q25; }
inline bool in_c(Tag t) { return t == Tag::L || in_q5(t) || t == Tag::QMatch || t == Tag::N; }
inline bool in_delta(Tag t) { return t >= Tag::DLarge; }
inline bool in_dhalf(Tag t) { return t == Tag::DHalfBar || t == Tag::DHalfS || t == Tag::DHalfQ; }

struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllegalTransition : std::logic_error {
  using std::logic_error::logic_error;
};

struct BinRecord {
  int id = 0;
  std::vector<long> items;
  std::vector<StartingType> types;
  Q level;
  Q assigned_delta;  // assigned level = level + assigned_delta
  Q small_content;   // a swapped bin counts its quarter item here
  Q quarter_core;    // quarter items packed while the bin was justQ1/justQ2/dhalfQ
  Q quarter_total;
  Q counted;
  Tag tag = Tag::E;
  bool ever_q = false;
  bool swap_target = false;
  bool swapped = false;
  bool irregular = false;
  std::array<int, 3> w{};  // plain weights
  int top_shift = 0;       // w_top moved by the swapping rule
  int weighted_items = 0;  // items with w_top > 0
  int big_items = 0;
  int over_six = 0;
  int over_nice = 0;
  std::vector<std::pair<long, Tag>> history;

  Q assigned_level() const { return level + assigned_delta; }
  int weight(WeightScheme s) const {
    int i = static_cast<int>(s);
    return w[i] + (s == WeightScheme::WTop ? top_shift : 0);
  }
  StartingType first_type() const { return types.empty() ? StartingType::Small1 : types[0]; }
};

struct TransitionRecord {
  long event = 0;
  long item = 0;
  Q size;
  int bin = -1;
  Tag from = Tag::E;
  Tag to = Tag::E;
  Q counted_delta;
  bool last_resort = false;
  bool irregular = false;
};

// Sum of the k largest values of a multiset, k adjustable.
class TopKSum {
 public:
  void insert(const Q& v);
  void erase(const Q& v);
  void set_k(long k);
  long k() const { return k_; }
  std::size_t size() const { return top_.size() + rest_.size(); }
  std::size_t top_size() const { return top_.size(); }
  const Q& sum() const { return sum_; }

 private:
  void rebalance();
  std::multiset<Q> top_, rest_;
  Q sum_;
  long k_ = 0;
};

// Per-tag weight histogram (index min(w, 6)) for each scheme.
struct TagAggregate {
  long count = 0;
  std::array<long, 3> wsum{};
  std::array<std::array<long, 7>, 3> hist{};

  long at_least(WeightScheme s, int k) const;
  long below(WeightScheme s, int k) const { return count - at_least(s, k); }
  long deficit(WeightScheme s, int target) const;  // sum of max(0, target - w)
};

struct BlockCounts {
  long top = 0, big = 0, large = 0;
  bool operator==(const BlockCounts&) const = default;
};

class State {
 public:
  State(long m, const ConstantTable& table);

  const ConstantTable& table() const { return *t_; }
  long m() const { return m_; }
  const BinRecord& bin(int id) const { return bins_[id]; }
  const std::vector<BinRecord>& bins() const { return bins_; }
  long events() const { return events_; }
  long items_placed() const { return items_placed_; }

  // During the starting phase bins are opened in id order; afterwards any empty
  // bin may be opened.  fresh_bin() is the lowest empty id.
  std::optional<int> fresh_bin() const;
  int opened() const { return opened_; }
  long empty_count() const { return m_ - opened_; }

  long count(Tag t) const { return tag_count_[static_cast<int>(t)]; }
  long q1() const { return count(Tag::JustQ1) + count(Tag::QOneBig) + count(Tag::Q15); }
  long q2() const { return count(Tag::JustQ2) + count(Tag::Q25); }
  long c() const {
    return count(Tag::L) + count(Tag::Q15) + count(Tag::Q25) + count(Tag::QMatch) + count(Tag::N);
  }
  long delta_count() const;
  long r() const { return opened_ - count(Tag::L) - count(Tag::QMatch); }
  const TagAggregate& aggregate(Tag t) const { return agg_[static_cast<int>(t)]; }
  long bins_with_wbig_at_least6() const { return wbig6_; }
  long lonely_big_bins() const { return lonely_big_; }
  long shallow_small_bins() const { return shallow_; }
  const std::array<long, 3>& total_weight() const { return total_w_; }
  BlockCounts blocks() const { return blocks_; }
  long mid_level_bins() const { return mid_; }  // level in (8-8eps, 9-eps]
  // Sum of the k largest levels among bins at level >= 12 (nullopt if fewer).
  std::optional<Q> top_high_levels(long k) const;
  long nice_rule_violations() const { return nice_violations_; }
  long last_resort_count() const { return last_resort_; }
  bool last_resort_into_top_block() const { return last_resort_top_; }

  // Counted and the X set (starting phase only).
  const Q& counted() const { return counted_total_; }
  Q recount_counted() const;  // from scratch
  const std::vector<int>& xq() const { return xq_; }
  std::vector<int> compute_xq() const;
  long xs_count() const { return xs_; }
  long xl_count() const { return xl_; }
  long x_size() const {
    return xs_ + xl_ + static_cast<long>(xq_.size()) + count(Tag::DNice1) + count(Tag::DNice2);
  }
  bool in_xq(int id) const { return in_xq_[id]; }
  bool in_xs(int id) const { return in_xs_[id]; }
  bool in_xl(int id) const { return in_xl_[id]; }

  // Tag change for a placement.  nullopt if the table has no edge.
  static std::optional<Tag> regular_transition(Tag from, StartingType t);
  Tag transition_for(int id, const Q& size, StartingType t, bool last_resort,
                     bool* irregular) const;
  bool fits(int id, const Q& size) const;

  // Places the item; throws CapacityExceeded or IllegalTransition.
  TransitionRecord place(int id, const Item& item, bool last_resort = false);
  // Tag-only moves used by the matching and swapping rules.
  void retag(int id, Tag to);
  void apply_swap(int bbar, int target);
  void match(int big_a, int big_b, int q25);
  const std::vector<std::array<int, 3>>& matches() const { return matches_; }
  std::optional<int> swap_candidate() const;
  std::vector<int> oldest_qonebig(int k) const;
  std::optional<int> oldest_q25() const;
  const std::vector<int>& delta_bins() const { return delta_list_; }

  // After the starting phase tags stay fixed and Counted is no longer maintained.
  void freeze();
  bool frozen() const { return frozen_; }

  // Indices over bins in id order.
  const FirstFitIndex& ff_c() const { return ff_c_; }
  const FirstFitIndex& ff_justq1() const { return ff_jq1_; }
  const FirstFitIndex& ff_justq2() const { return ff_jq2_; }
  const FirstFitIndex& ff_qonebig() const { return ff_qbig_; }
  const FirstFitIndex& ff_small() const { return ff_small_; }  // key min(residual, small room)
  const FirstFitIndex& ff_all() const { return ff_all_; }
  const BestFitIndex& bf_s_justq1() const { return bf_half_; }
  const BestFitIndex& bf_s() const { return bf_s_; }
  const BestFitIndex& bf_open() const { return bf_open_; }  // opened bins outside delta

  Q residual(int id) const { return t_->online_capacity - bins_[id].level; }
  Q counted_of(const BinRecord& b, bool xq) const;

  void set_nice_violation() { ++nice_violations_; }

 private:
  void detach(int id);
  void attach(int id);
  void refresh_xq();

  const ConstantTable* t_;
  long m_;
  std::vector<BinRecord> bins_;
  int next_fresh_ = 0;
  int opened_ = 0;
  long events_ = 0;
  long items_placed_ = 0;
  bool frozen_ = false;

  std::array<long, kTagCount> tag_count_{};
  std::array<TagAggregate, kTagCount> agg_{};
  std::array<long, 3> total_w_{};
  long wbig6_ = 0, lonely_big_ = 0, shallow_ = 0, mid_ = 0;
  BlockCounts blocks_;
  mutable TopKSum high_;
  long nice_violations_ = 0, last_resort_ = 0;
  bool last_resort_top_ = false;

  Q counted_total_;
  std::vector<int> xq_;
  std::vector<char> in_xq_, in_xs_, in_xl_;
  long xs_ = 0, xl_ = 0;

  FirstFitIndex ff_c_, ff_jq1_, ff_jq2_, ff_qbig_, ff_small_, ff_all_;
  BestFitIndex bf_half_, bf_s_, bf_open_;
  std::set<int> q1_others_, q1_big_, q25_, swap_cands_;
  std::vector<int> delta_list_;
  std::vector<std::array<int, 3>> matches_;
};

// Audit of the starting-phase invariants.  With batch = true the O(m) checks
// (partition recount, Counted recompute, X_q recompute, per-bin conditions) run too.
std::vector<std::string> audit_invariants(const State& s, bool batch);

BlockCounts block_counts(const State& s);

}  // namespace bst
