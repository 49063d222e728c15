#include "bstretch/state.hpp"

#include <algorithm>
#include <sstream>

namespace bst {

const char* name(Tag t) {
  static constexpr const char* names[kTagCount] = {
      "E",   "S",   "L",      "justQ1",   "justQ2", "Qonebig", "Q15",   "Q25",
      "Qmatch", "N", "Dlarge", "Dhalf-bar", "Dhalf-S", "Dhalf-Q", "Dnice1", "Dnice2"};
  return names[static_cast<int>(t)];
}

// ---- TopKSum

void TopKSum::insert(const Q& v) {
  if (static_cast<long>(top_.size()) < k_ || (!top_.empty() && v > *top_.begin())) {
    top_.insert(v);
    sum_ += v;
  } else {
    rest_.insert(v);
  }
  rebalance();
}

void TopKSum::erase(const Q& v) {
  auto r = rest_.find(v);
  if (r != rest_.end()) {
    rest_.erase(r);
  } else {
    auto t = top_.find(v);
    if (t == top_.end()) return;
    top_.erase(t);
    sum_ -= v;
  }
  rebalance();
}

void TopKSum::set_k(long k) {
  k_ = std::max(0L, k);
  rebalance();
}

void TopKSum::rebalance() {
  while (static_cast<long>(top_.size()) > k_) {
    auto it = top_.begin();
    sum_ -= *it;
    rest_.insert(*it);
    top_.erase(it);
  }
  while (static_cast<long>(top_.size()) < k_ && !rest_.empty()) {
    auto it = std::prev(rest_.end());
    sum_ += *it;
    top_.insert(*it);
    rest_.erase(it);
  }
}

long TagAggregate::at_least(WeightScheme s, int k) const {
  long n = 0;
  for (int w = std::max(k, 0); w < 7; ++w) n += hist[static_cast<int>(s)][w];
  return k > 6 ? 0 : n;
}

long TagAggregate::deficit(WeightScheme s, int target) const {
  long d = 0;
  for (int w = 0; w < std::min(target, 7); ++w) d += (target - w) * hist[static_cast<int>(s)][w];
  return d;
}

// ---- State

State::State(long m, const ConstantTable& table) : t_(&table), m_(m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  bins_.resize(m);
  for (long i = 0; i < m; ++i) bins_[i].id = static_cast<int>(i);
  tag_count_[static_cast<int>(Tag::E)] = m;
  agg_[static_cast<int>(Tag::E)].count = m;
  for (int s = 0; s < 3; ++s) agg_[static_cast<int>(Tag::E)].hist[s][0] = m;
  in_xq_.assign(m, 0);
  in_xs_.assign(m, 0);
  in_xl_.assign(m, 0);
  int n = static_cast<int>(m);
  for (FirstFitIndex* f : {&ff_c_, &ff_jq1_, &ff_jq2_, &ff_qbig_, &ff_small_, &ff_all_}) f->reserve(n);
  for (int i = 0; i < n; ++i) ff_all_.set(i, t_->online_capacity);
}

std::optional<int> State::fresh_bin() const {
  if (next_fresh_ >= m_) return std::nullopt;
  return next_fresh_;
}

long State::delta_count() const {
  long d = 0;
  for (int t = static_cast<int>(Tag::DLarge); t < kTagCount; ++t) d += tag_count_[t];
  return d;
}

bool State::fits(int id, const Q& size) const {
  return bins_[id].level + size <= t_->online_capacity;
}

Q State::counted_of(const BinRecord& b, bool xq) const {
  const ConstantTable& t = *t_;
  switch (b.tag) {
    case Tag::E:
    case Tag::DNice1:
    case Tag::DNice2:
      return Q(0);
    default:
      break;
  }
  Q al = b.assigned_level();
  if ((b.tag == Tag::S || b.tag == Tag::DHalfS) && b.small_content + (b.swapped ? b.assigned_delta : Q(0)) < t.quarter_max)
    return Q(0);
  if (b.tag == Tag::L && al < t.x_ell_limit) return Q(0);
  if (xq) return qmin(al, t.small_max_1);
  if (b.tag == Tag::JustQ2) return qmin(al, t.smallslot);
  if (b.tag == Tag::Q15 || b.tag == Tag::QOneBig || b.tag == Tag::QMatch) {
    Q rest = al - b.quarter_core;
    return b.quarter_core + qmin(rest, t.large_max);
  }
  return al;
}

namespace {

bool xs_condition(const BinRecord& b, const ConstantTable& t) {
  if (b.tag != Tag::S && b.tag != Tag::DHalfS) return false;
  Q content = b.small_content;
  if (b.swapped) content += b.assigned_delta;
  return content < t.quarter_max;
}

bool xl_condition(const BinRecord& b, const ConstantTable& t) {
  return b.tag == Tag::L && b.assigned_level() < t.x_ell_limit;
}

bool lonely_big(const BinRecord& b) {
  // a swapped bin's quarter item carries no weight of its own any more
  return b.big_items == 1 && b.weighted_items - (b.swapped ? 1 : 0) == 1 && !b.swap_target;
}

bool shallow(const BinRecord& b, const ConstantTable& t) {
  return (b.tag == Tag::S || b.tag == Tag::DHalfS) && !b.swapped && b.small_content <= t.quarter_max;
}

}  // namespace

void State::detach(int id) {
  BinRecord& b = bins_[id];
  const ConstantTable& t = *t_;
  int ti = static_cast<int>(b.tag);
  --tag_count_[ti];
  TagAggregate& a = agg_[ti];
  --a.count;
  for (int s = 0; s < 3; ++s) {
    int w = b.weight(static_cast<WeightScheme>(s));
    a.wsum[s] -= w;
    --a.hist[s][std::min(w, 6)];
  }
  if (b.w[1] >= 6) --wbig6_;
  if (lonely_big(b)) --lonely_big_;
  if (shallow(b, t)) --shallow_;
  if (b.level > t.top_block) --blocks_.top;
  if (b.level > t.big_block) --blocks_.big;
  if (b.level > t.large_block) --blocks_.large;
  if (b.level > t.big_block && b.level <= t.large_block) --mid_;
  if (b.level >= 12) high_.erase(b.level);
  if (!frozen_) {
    counted_total_ -= b.counted;
    if (in_xs_[id]) --xs_;
    if (in_xl_[id]) --xl_;
  }
}

void State::attach(int id) {
  BinRecord& b = bins_[id];
  const ConstantTable& t = *t_;
  int ti = static_cast<int>(b.tag);
  ++tag_count_[ti];
  TagAggregate& a = agg_[ti];
  ++a.count;
  for (int s = 0; s < 3; ++s) {
    int w = b.weight(static_cast<WeightScheme>(s));
    a.wsum[s] += w;
    ++a.hist[s][std::min(w, 6)];
  }
  if (b.w[1] >= 6) ++wbig6_;
  if (lonely_big(b)) ++lonely_big_;
  if (shallow(b, t)) ++shallow_;
  if (b.level > t.top_block) ++blocks_.top;
  if (b.level > t.big_block) ++blocks_.big;
  if (b.level > t.large_block) ++blocks_.large;
  if (b.level > t.big_block && b.level <= t.large_block) ++mid_;
  if (b.level >= 12) high_.insert(b.level);

  Q res = t.online_capacity - b.level;
  ff_all_.set(id, res);
  if (b.tag != Tag::E && !in_delta(b.tag))
    bf_open_.set(id, res);
  else
    bf_open_.erase(id);
  if (frozen_) return;

  in_xs_[id] = xs_condition(b, t);
  in_xl_[id] = xl_condition(b, t);
  if (in_xs_[id]) ++xs_;
  if (in_xl_[id]) ++xl_;
  b.counted = counted_of(b, in_xq_[id]);
  counted_total_ += b.counted;

  if (in_c(b.tag) && !b.swap_target)
    ff_c_.set(id, res);
  else
    ff_c_.erase(id);
  if (b.tag == Tag::JustQ1) ff_jq1_.set(id, res); else ff_jq1_.erase(id);
  if (b.tag == Tag::JustQ2) ff_jq2_.set(id, res); else ff_jq2_.erase(id);
  if (b.tag == Tag::QOneBig) ff_qbig_.set(id, res); else ff_qbig_.erase(id);
  if (b.tag == Tag::S || b.tag == Tag::DHalfS)
    ff_small_.set(id, qmin(res, t.smallslot - b.small_content));
  else
    ff_small_.erase(id);
  if (b.tag == Tag::S || b.tag == Tag::JustQ1) bf_half_.set(id, res); else bf_half_.erase(id);
  if (b.tag == Tag::S) bf_s_.set(id, res); else bf_s_.erase(id);

  if (b.tag == Tag::QOneBig) {
    q1_big_.insert(id);
    q1_others_.erase(id);
  } else if (b.tag == Tag::JustQ1 || b.tag == Tag::Q15 || b.tag == Tag::DHalfQ) {
    q1_others_.insert(id);
    q1_big_.erase(id);
  } else {
    q1_others_.erase(id);
    q1_big_.erase(id);
  }
  if (b.tag == Tag::Q25) q25_.insert(id); else q25_.erase(id);
  if (b.tag == Tag::L && lonely_big(b)) swap_cands_.insert(id); else swap_cands_.erase(id);
  auto it = std::find(delta_list_.begin(), delta_list_.end(), id);
  if (in_delta(b.tag)) {
    if (it == delta_list_.end()) {
      delta_list_.push_back(id);
      std::sort(delta_list_.begin(), delta_list_.end());
    }
  } else if (it != delta_list_.end()) {
    delta_list_.erase(it);
  }
}

std::vector<int> State::compute_xq() const {
  long x = q1() + count(Tag::DHalfQ) - 2 * q2();
  std::vector<int> out;
  if (x <= 0) return out;
  for (auto it = q1_others_.rbegin(); it != q1_others_.rend() && static_cast<long>(out.size()) < x; ++it)
    out.push_back(*it);
  for (auto it = q1_big_.rbegin(); it != q1_big_.rend() && static_cast<long>(out.size()) < x; ++it)
    out.push_back(*it);
  std::sort(out.begin(), out.end());
  return out;
}

void State::refresh_xq() {
  std::vector<int> next = compute_xq();
  if (next == xq_) return;
  auto flip = [&](int id, char v) {
    BinRecord& b = bins_[id];
    counted_total_ -= b.counted;
    in_xq_[id] = v;
    b.counted = counted_of(b, v);
    counted_total_ += b.counted;
  };
  for (int id : xq_)
    if (!std::binary_search(next.begin(), next.end(), id)) flip(id, 0);
  for (int id : next)
    if (!std::binary_search(xq_.begin(), xq_.end(), id)) flip(id, 1);
  xq_ = std::move(next);
}

Q State::recount_counted() const {
  std::vector<int> xq = compute_xq();
  Q total;
  for (const BinRecord& b : bins_) {
    if (b.tag == Tag::E) continue;
    total += counted_of(b, std::binary_search(xq.begin(), xq.end(), b.id));
  }
  return total;
}

std::optional<Tag> State::regular_transition(Tag from, StartingType t) {
  using ST = StartingType;
  const bool small = is_small(t);
  const bool dominant = is_dominant(t);
  const bool hl = is_half_or_larger(t);
  switch (from) {
    case Tag::E:
      if (small) return Tag::S;
      if (t == ST::Quarter) return Tag::JustQ1;
      if (t == ST::Nice) return Tag::DNice1;
      if (t == ST::Half) return Tag::DHalfBar;
      if (t == ST::Large) return Tag::DLarge;
      return Tag::L;
    case Tag::S:
      if (small) return Tag::S;
      if (t == ST::Half) return Tag::DHalfS;
      if (dominant) return Tag::L;
      return std::nullopt;
    case Tag::JustQ1:
      if (t == ST::Quarter) return Tag::JustQ2;
      if (t == ST::Half) return Tag::DHalfQ;
      if (t == ST::Big) return Tag::QOneBig;
      if (t == ST::Top) return Tag::Q15;
      return std::nullopt;
    case Tag::JustQ2:
      if (dominant) return Tag::Q25;
      return std::nullopt;
    case Tag::QOneBig:
      if (!small) return Tag::Q15;
      return std::nullopt;
    case Tag::L:
    case Tag::Q15:
    case Tag::Q25:
    case Tag::QMatch:
    case Tag::N:
      return from;
    case Tag::DHalfBar:
      if (small) return Tag::DHalfS;
      if (t == ST::Quarter) return Tag::DHalfQ;
      if (hl) return Tag::L;
      return std::nullopt;
    case Tag::DHalfS:
      if (small) return Tag::DHalfS;
      if (hl) return Tag::L;
      return std::nullopt;
    case Tag::DHalfQ:
      if (hl) return Tag::Q15;
      return std::nullopt;
    case Tag::DLarge:
      if (hl) return Tag::L;
      return std::nullopt;
    case Tag::DNice1:
      if (t == ST::Nice || t == ST::Half) return Tag::DNice2;
      if (dominant) return Tag::L;
      return std::nullopt;
    case Tag::DNice2:
      if (t == ST::Nice || t == ST::Half || t == ST::Large) return Tag::N;
      if (dominant) return Tag::L;
      return std::nullopt;
  }
  return std::nullopt;
}

Tag State::transition_for(int id, const Q& size, StartingType t, bool last_resort,
                          bool* irregular) const {
  const BinRecord& b = bins_[id];
  *irregular = false;
  if (auto r = regular_transition(b.tag, t)) return *r;
  if (!last_resort) {
    std::ostringstream os;
    os << "no transition from " << name(b.tag) << " for a " << name(t) << " item (bin " << id << ")";
    throw IllegalTransition(os.str());
  }
  int wbig = b.w[1] + weight(t, WeightScheme::WBig);
  int over6 = b.over_six + (size > 6 ? 1 : 0);
  int overnice = b.over_nice + (size > t_->nice_max ? 1 : 0);
  if (!b.ever_q && wbig >= 4 && (over6 >= 1 || overnice >= 2)) return Tag::L;
  *irregular = true;
  return b.tag;
}

TransitionRecord State::place(int id, const Item& item, bool last_resort) {
  if (id < 0 || id >= m_ || (!frozen_ && id > next_fresh_)) throw std::out_of_range("bin id not available");
  BinRecord& b = bins_[id];
  if (!fits(id, item.size)) {
    std::ostringstream os;
    os << "item " << item.id << " of size " << to_string(item.size) << " does not fit bin " << id
       << " at level " << to_string(b.level);
    throw CapacityExceeded(os.str());
  }
  const ConstantTable& t = *t_;
  StartingType st = classify_starting(item.size, t);
  TransitionRecord rec;
  rec.event = events_;
  rec.item = item.id;
  rec.size = item.size;
  rec.bin = id;
  rec.from = b.tag;
  rec.last_resort = last_resort;
  bool irr = false;
  Tag to = frozen_ ? b.tag : transition_for(id, item.size, st, last_resort, &irr);
  rec.to = to;
  rec.irregular = irr;
  Q before = counted_total_;
  bool was_top = b.level > t.top_block;

  detach(id);
  if (b.items.empty()) ++opened_;
  b.items.push_back(item.id);
  b.types.push_back(st);
  b.level += item.size;
  if (is_small(st)) b.small_content += item.size;
  if (st == StartingType::Quarter) {
    b.quarter_total += item.size;
    if (!frozen_ && (to == Tag::JustQ1 || to == Tag::JustQ2 || to == Tag::DHalfQ)) b.quarter_core += item.size;
  }
  for (int s = 0; s < 3; ++s) {
    int w = weight(st, static_cast<WeightScheme>(s));
    b.w[s] += w;
    total_w_[s] += w;
  }
  if (weight(st, WeightScheme::WTop) > 0) ++b.weighted_items;
  if (st == StartingType::Big) ++b.big_items;
  if (item.size > 6) ++b.over_six;
  if (item.size > t.nice_max) ++b.over_nice;
  if (irr) b.irregular = true;
  if (to != b.tag) {
    b.tag = to;
    b.history.push_back({events_, to});
  }
  if (in_q1(to) || in_q2(to) || to == Tag::DHalfQ) b.ever_q = true;
  attach(id);
  if (!frozen_) refresh_xq();
  while (next_fresh_ < m_ && !bins_[next_fresh_].items.empty()) ++next_fresh_;

  if (last_resort) {
    ++last_resort_;
    if (!was_top && b.level > t.top_block) last_resort_top_ = true;
  }
  ++events_;
  ++items_placed_;
  rec.counted_delta = counted_total_ - before;
  return rec;
}

void State::retag(int id, Tag to) {
  BinRecord& b = bins_[id];
  if (b.tag == to) return;
  detach(id);
  b.tag = to;
  b.history.push_back({events_, to});
  if (in_q1(to) || in_q2(to) || to == Tag::DHalfQ || to == Tag::QMatch) b.ever_q = true;
  attach(id);
  if (!frozen_) refresh_xq();
}

void State::apply_swap(int bbar, int target) {
  BinRecord& a = bins_[bbar];
  BinRecord& g = bins_[target];
  detach(bbar);
  detach(target);
  Q moved = t_->quarter_max - a.level;
  a.tag = Tag::S;
  a.history.push_back({events_, Tag::S});
  a.swapped = true;
  a.top_shift -= 1;
  a.assigned_delta = moved;
  a.small_content = a.level;
  a.quarter_core = 0;
  g.swap_target = true;
  g.top_shift += 1;
  g.assigned_delta -= moved;
  attach(bbar);
  attach(target);
  refresh_xq();
}

void State::match(int big_a, int big_b, int q25) {
  for (int id : {big_a, big_b, q25}) {
    BinRecord& b = bins_[id];
    detach(id);
    b.tag = Tag::QMatch;
    b.history.push_back({events_, Tag::QMatch});
    attach(id);
  }
  refresh_xq();
  matches_.push_back({big_a, big_b, q25});
}

std::optional<int> State::swap_candidate() const {
  if (swap_cands_.empty()) return std::nullopt;
  return *swap_cands_.begin();
}

std::vector<int> State::oldest_qonebig(int k) const {
  std::vector<int> out;
  for (auto it = q1_big_.begin(); it != q1_big_.end() && static_cast<int>(out.size()) < k; ++it)
    out.push_back(*it);
  return out;
}

std::optional<int> State::oldest_q25() const {
  if (q25_.empty()) return std::nullopt;
  return *q25_.begin();
}

std::optional<Q> State::top_high_levels(long k) const {
  if (k < 0) k = 0;
  if (static_cast<long>(high_.size()) < k) return std::nullopt;
  high_.set_k(k);
  return high_.sum();
}

void State::freeze() { frozen_ = true; }

BlockCounts block_counts(const State& s) { return s.blocks(); }

// ---- audit

std::vector<std::string> audit_invariants(const State& s, bool batch) {
  std::vector<std::string> v;
  const ConstantTable& t = s.table();
  auto add = [&](const std::string& msg) {
    v.push_back("event " + std::to_string(s.events()) + ": " + msg);
  };
  long q1 = s.q1(), q2 = s.q2();
  long dq = s.count(Tag::DHalfQ);
  long qbig = s.count(Tag::QOneBig);
  long jq1 = s.count(Tag::JustQ1), jq2 = s.count(Tag::JustQ2);
  long sc = s.count(Tag::S);
  if (q1 + dq > 2 * q2 + t.q_ratio_slack) add("quarter balance upper bound broken");
  if (q2 > 0 && 2 * q2 + 12 > q1 + dq) add("quarter balance lower bound broken");
  if (qbig > 15) add("more than 15 Qonebig bins");
  if (jq2 > 0 && qbig > 0) add("Qonebig bins while justQ2 is nonempty");
  if (jq1 + jq2 > 0 && s.lonely_big_bins() > 0) add("bin with a lone weighted big item next to justQ1/justQ2");
  long dhalf = s.count(Tag::DHalfBar) + s.count(Tag::DHalfS) + dq;
  long dl = s.count(Tag::DLarge), dn1 = s.count(Tag::DNice1), dn2 = s.count(Tag::DNice2);
  if (dhalf > 1) add("more than one Dhalf bin");
  if (dl > 1) add("more than one Dlarge bin");
  if (dn1 > 2) add("more than two Dnice1 bins");
  if (dn2 > 1) add("more than one Dnice2 bin");
  if (dn1 + dn2 > 2) add("more than two Dnice bins");
  if (s.delta_count() > 4) add("more than four delta bins");
  if (s.count(Tag::DHalfBar) > 0 && dl > 0) add("Dhalf-bar together with Dlarge");
  if (s.count(Tag::DHalfBar) > 0 && sc + jq1 > 0) add("Dhalf-bar together with S or justQ1");
  if (s.xq().size() > 15) add("X_q larger than 15");
  if (sc + jq1 > 0) {
    if (s.xs_count() + s.xl_count() > 2) add("X_s and X_l hold more than 2 bins");
    if (s.x_size() > 19) add("X larger than 19");
  }
  if (s.shallow_small_bins() > 2) add("more than 2 shallow small bins");

  if (!batch) return v;

  std::array<long, kTagCount> cnt{};
  long nonempty = 0;
  for (const BinRecord& b : s.bins()) {
    ++cnt[static_cast<int>(b.tag)];
    std::string where = "bin " + std::to_string(b.id) + " (" + name(b.tag) + ")";
    if (b.level > t.online_capacity) add(where + " over capacity");
    if (b.items.empty()) {
      if (b.tag != Tag::E) add(where + " empty but tagged");
      continue;
    }
    ++nonempty;
    if (b.tag == Tag::E) add(where + " nonempty but tagged E");
    if (b.tag == Tag::L && !b.irregular && !b.swapped) {
      if (b.w[1] < 4 || (b.over_six == 0 && b.over_nice < 2) || b.ever_q)
        add(where + " not large-complete");
    }
    if (b.tag == Tag::N && !(b.level > t.n_min)) add(where + " holds at most 15+3eps");
    if (b.swap_target && b.assigned_level() < t.swap_min) add(where + " swap target below 14+2eps");
  }
  if (nonempty != s.opened()) add("opened bin count mismatch");
  if (!s.frozen() && s.fresh_bin() && nonempty != *s.fresh_bin()) add("opened bins are not a prefix");
  for (int i = 0; i < kTagCount; ++i)
    if (cnt[i] != s.count(static_cast<Tag>(i))) add(std::string("tag count mismatch for ") + name(static_cast<Tag>(i)));
  for (const auto& tr : s.matches()) {
    Q total;
    for (int id : tr) total += s.bin(id).level;
    if (!(total > t.match_min)) add("Qmatch triple at most 3(13-5eps)");
  }
  if (!s.frozen()) {
    if (s.compute_xq() != s.xq()) add("X_q differs from recomputation");
    if (s.recount_counted() != s.counted()) add("Counted differs from recomputation");
  }
  return v;
}

}  // namespace bst
