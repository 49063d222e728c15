#include "bstretch/fillup_phase.hpp"

#include <algorithm>

namespace bst {

const char* name(UGroup g) {
  switch (g) {
    case UGroup::JustQ2: return "justQ2";
    case UGroup::Small: return "S";
    case UGroup::Q1: return "Q1";
    case UGroup::Empty: return "E";
    case UGroup::DeltaRight: return "delta";
    case UGroup::Nice: return "nice";
  }
  return "?";
}

const char* name(Origin o) {
  switch (o) {
    case Origin::D: return "D";
    case Origin::SL: return "S_L";
    case Origin::SminusL: return "S_-L";
    case Origin::E: return "E";
    case Origin::Other: return "other";
  }
  return "?";
}

void CreditPool::add(const Q& v) {
  if (v >= 0)
    surplus += v;
  else
    deficits.insert(-v);
}

void CreditPool::remove(const Q& v) {
  if (v >= 0)
    surplus -= v;
  else
    deficits.erase(deficits.find(-v));
}

long CreditPool::uncredited() const {
  Q left = surplus;
  long n = 0;
  for (const Q& d : deficits) {
    if (d <= left)
      left -= d;
    else
      ++n;
  }
  return n;
}

namespace {

using FT = FillupType;

bool is_hard(FT t) {
  return t == FT::FQuarterPlus || t == FT::FQuarterPlusPlus || t == FT::FLargeMinus || t == FT::FLargePlus;
}

bool first_fit_rule1(FT t) { return !is_hard(t); }

std::optional<UGroup> group_of(Tag t) {
  switch (t) {
    case Tag::JustQ2: return UGroup::JustQ2;
    case Tag::S:
    case Tag::DHalfS: return UGroup::Small;
    case Tag::JustQ1:
    case Tag::DHalfQ: return UGroup::Q1;
    case Tag::E: return UGroup::Empty;
    case Tag::DHalfBar:
    case Tag::DLarge: return UGroup::DeltaRight;
    case Tag::DNice1:
    case Tag::DNice2: return UGroup::Nice;
    default: return std::nullopt;
  }
}

}  // namespace

FillupPlan::FillupPlan(State& s) : s_(&s), t_(&s.table()) {
  if (!s.frozen()) s.freeze();
  const ConstantTable& t = *t_;

  if (s.count(Tag::S) + s.count(Tag::JustQ1) + s.count(Tag::JustQ2) == 0)
    entry_ = GoodKind::VerySimpleFillUp;
  else if (s.count(Tag::S) + s.count(Tag::JustQ1) == 0)
    entry_ = GoodKind::WeightBasedQ2;

  for (const BinRecord& b : s.bins()) {
    auto g = group_of(b.tag);
    if (!g) {
      if ((b.tag == Tag::Q15 || b.tag == Tag::QOneBig) && b.assigned_level() > b.counted)
        stage1_initial_ += b.assigned_level() - b.counted;
      continue;
    }
    UBin u;
    u.bin = b.id;
    u.group = *g;
    u.nonempty = !b.items.empty();
    u.sort_level = b.assigned_level();
    if (*g == UGroup::Small) u.sort_level = qmax(u.sort_level, t.quarter_max);
    u.counted_start = b.counted;
    u_.push_back(u);
  }
  std::stable_sort(u_.begin(), u_.end(), [](const UBin& a, const UBin& b) {
    if (a.group != b.group) return a.group < b.group;
    if (a.group == UGroup::Empty) return false;
    return a.sort_level > b.sort_level;
  });
  const int n = static_cast<int>(u_.size());
  pos_of_.assign(s.m(), -1);
  for (int i = 0; i < n; ++i) {
    u_[i].pos = i;
    pos_of_[u_[i].bin] = i;
  }
  initial_u_ = u_count_ = n;

  // S_-L: the e rightmost nonempty bins, nice bins left out.
  long e = 0;
  std::vector<int> nonempty;
  for (const UBin& b : u_) {
    if (b.group == UGroup::Empty) ++e;
    if (b.nonempty && b.group != UGroup::Nice) nonempty.push_back(b.pos);
  }
  e0_ = e;
  std::vector<char> in_sml(n, 0);
  long take = std::min<long>(e, static_cast<long>(nonempty.size()));
  for (long i = 0; i < take; ++i) in_sml[nonempty[nonempty.size() - 1 - i]] = 1;
  if (take == 0 || take == static_cast<long>(nonempty.size()))
    beta0_ = t.smallslot;
  else
    beta0_ = qmin(t.smallslot, u_[nonempty[nonempty.size() - take]].sort_level);

  initial_d_ = std::min<long>(n, std::max(0L, ceil_long(t.initial_d(n))));
  for (UBin& b : u_) {
    if (b.pos < initial_d_) {
      b.origin = Origin::D;
      b.in_d = true;
    } else if (b.group == UGroup::Empty) {
      b.origin = Origin::E;
    } else if (b.group == UGroup::Nice) {
      b.origin = Origin::Other;
    } else if (in_sml[b.pos]) {
      b.origin = Origin::SminusL;
    } else {
      b.origin = Origin::SL;
    }
  }

  for (FirstFitIndex* f : {&ff_ud_, &ff_nonjq2_, &ff_jq2_, &ff_ne_nonjq2_, &ff_u_}) f->reserve(n);
  for (const UBin& b : u_) {
    const Q res = s.residual(b.bin);
    const int p = b.pos;
    ff_u_.set(p, res);
    if (b.group == UGroup::JustQ2) {
      ff_jq2_.set(p, res);
      ++untouched_jq2_;
    } else {
      ff_nonjq2_.set(p, res);
      if (b.nonempty) {
        ff_ne_nonjq2_.set(p, res);
        if (b.group != UGroup::Nice) ++untouched_ne_nonjq2_;
      }
    }
    if (b.in_d) {
      ff_ud_.set(p, res);
      ++untouched_d_;
      ++d_size_;
      continue;
    }
    nond_.insert(p);
    if (b.nonempty && b.group != UGroup::Nice) ++untouched_ne_nond_;
    if (b.origin == Origin::SL) ++untouched_sl_nond_;
    if (b.group == UGroup::Empty) empty_nond_.insert(p);
    if (b.group == UGroup::Small || b.group == UGroup::Q1) {
      main_.insert({b.sort_level, -p});
      if (b.origin == Origin::SminusL) sml_.insert({b.sort_level, -p});
    }
  }

  stage1_remaining_ = stage1_initial_;
  set_stage(stage1_initial_ > 0 ? 1 : 2);
}

void FillupPlan::note(const std::string& kind, const std::string& detail) {
  notes_.push_back({s_->events(), kind, detail});
}

void FillupPlan::set_stage(int st) {
  const ConstantTable& t = *t_;
  stage_ = st;
  switch (st) {
    case 1: beta_ = beta0_; break;
    case 2: beta_ = qmin(beta0_, t.quarter_max); break;
    case 3: beta_ = qmin(beta0_, t.f_qpp_max); break;
    case 4: beta_ = beta0_; break;
    default: break;
  }
  for (FT h : {FT::FQuarterPlus, FT::FQuarterPlusPlus, FT::FLargeMinus, FT::FLargePlus}) {
    streams_[static_cast<int>(h)].used_d = 0;
    streams_[static_cast<int>(h)].used_n = 0;
  }
  note("stage", std::to_string(st) + " beta=" + to_string(beta_));
}

bool FillupPlan::advance_stage() {
  switch (stage_) {
    case 1: set_stage(2); return true;
    case 2: set_stage(3); return true;
    case 3: set_stage(beta0_ > t_->f_qpp_max ? 4 : 5); return true;
    case 4: set_stage(5); return true;
    default: return false;
  }
}

long FillupPlan::count_origin(Origin o) const {
  return std::count_if(u_.begin(), u_.end(), [&](const UBin& b) { return b.origin == o; });
}

Q FillupPlan::own_credit(const UBin& b) const { return s_->bin(b.bin).assigned_level() - b.counted_start; }

bool FillupPlan::credited(const UBin& b) const {
  return credit(b) >= (b.d_at_touch ? t_->rule1_quota : t_->rule3_quota);
}

long FillupPlan::half_full() const {
  long h = 0;
  for (const StreamState& st : streams_) {
    h += st.pool1.uncredited() + st.pool3.uncredited();
    if (st.current >= 0 && !u_[st.current].closed && !credited(u_[st.current])) ++h;
  }
  for (int p : orphans_)
    if (!credited(u_[p])) ++h;
  return h;
}

long FillupPlan::rule1_violations() const {
  long n = 0;
  for (int i = 0; i < kFillupTypeCount; ++i)
    if (first_fit_rule1(static_cast<FT>(i))) n += streams_[i].pool1.uncredited();
  return n;
}

Q FillupPlan::invariant4_rhs() const {
  return t_->d_u_coef * u_count_ + t_->d_const_coef * 14 - half_full();
}

void FillupPlan::untrack(int p) {
  UBin& b = u_[p];
  ff_jq2_.erase(p);
  ff_nonjq2_.erase(p);
  ff_ne_nonjq2_.erase(p);
  if (b.group == UGroup::JustQ2) --untouched_jq2_;
  else if (b.nonempty && b.group != UGroup::Nice) --untouched_ne_nonjq2_;
  if (b.in_d) {
    ff_ud_.erase(p);
    --untouched_d_;
    return;
  }
  nond_.erase(p);
  empty_nond_.erase(p);
  main_.erase({b.sort_level, -p});
  sml_.erase({b.sort_level, -p});
  if (b.nonempty && b.group != UGroup::Nice) --untouched_ne_nond_;
  if (b.origin == Origin::SL) --untouched_sl_nond_;
}

void FillupPlan::touch(int p, int stream) {
  UBin& b = u_[p];
  untrack(p);
  b.touched = true;
  b.stream = stream;
  b.d_at_touch = b.in_d;
  if (!b.in_d) leave_u(p);
  if (b.in_d) {
    Q own = own_credit(b);
    if (own > 0) d_volume_ += own;
  }
  if (stream >= 0) {
    StreamState& st = streams_[stream];
    b.slot = static_cast<int>(st.bins.size());
    st.ff.set(b.slot, s_->residual(b.bin));
    st.bins.push_back(p);
    if (is_hard(static_cast<FT>(stream))) {
      if (b.in_d)
        ++st.used_d;
      else
        ++st.used_n;
    }
  }
}

void FillupPlan::repool(int p) {
  UBin& b = u_[p];
  StreamState& st = streams_[b.stream];
  assigned_ -= st.assigned();
  if (b.pooled) {
    st.pool1.remove(b.contrib1);
    if (!b.d_at_touch) st.pool3.remove(b.contrib3);
    if (b.d_at_touch && b.contrib1 < 0) st.d_deficit += b.contrib1;
    if (!b.d_at_touch && b.contrib1 > 0) st.n_surplus -= b.contrib1;
  }
  Q c = credit(b);
  b.contrib1 = c - t_->rule1_quota;
  b.contrib3 = c - t_->rule3_quota;
  st.pool1.add(b.contrib1);
  if (!b.d_at_touch) st.pool3.add(b.contrib3);
  if (b.d_at_touch && b.contrib1 < 0) st.d_deficit -= b.contrib1;
  if (!b.d_at_touch && b.contrib1 > 0) st.n_surplus += b.contrib1;
  assigned_ += st.assigned();
  b.pooled = true;
}

void FillupPlan::leave_u(int p) {
  UBin& b = u_[p];
  if (b.left_u) return;
  b.left_u = true;
  --u_count_;
}

void FillupPlan::close(int p) {
  UBin& b = u_[p];
  if (b.closed) return;
  b.closed = true;
  leave_u(p);
  ff_u_.erase(p);
  if (b.stream >= 0) repool(p);
}

void FillupPlan::add_to_d(int p) {
  UBin& b = u_[p];
  nond_.erase(p);
  empty_nond_.erase(p);
  main_.erase({b.sort_level, -p});
  sml_.erase({b.sort_level, -p});
  if (b.nonempty && b.group != UGroup::Nice) --untouched_ne_nond_;
  if (b.origin == Origin::SL) --untouched_sl_nond_;
  b.in_d = true;
  ++d_size_;
  ++untouched_d_;
  ff_ud_.set(p, s_->residual(b.bin));
}

void FillupPlan::apply_rule2() {
  while (!nond_.empty() && d_volume() >= t_->rule3_quota * (d_added_ + 1)) {
    int p = *nond_.begin();
    add_to_d(p);
    ++d_added_;
    note("d-add", std::to_string(u_[p].bin));
  }
}

void FillupPlan::complete_hard(int p) {
  UBin& b = u_[p];
  if (!b.stage1 || stage1_remaining_ <= 0) return;
  Q deficit = t_->rule1_quota - credit(b);
  if (deficit <= 0) return;
  Q pay = qmin(deficit, stage1_remaining_);
  b.stage1_credit += pay;
  stage1_remaining_ -= pay;
  stage1_paid_ += pay;
  d_volume_ += pay;
  note("stage1-credit", std::to_string(b.bin) + " " + to_string(pay));
  if (pay < deficit) stage1_residual_ += deficit - pay;
  if (stage1_remaining_ == 0 && stage_ == 1) set_stage(2);
}

std::optional<int> FillupPlan::pick_d(const Q& x) const { return ff_ud_.first_at_least(x); }

int FillupPlan::target_for(FT t, bool d) const {
  switch (t) {
    case FT::FQuarterPlus: return d ? 2 : 3;
    case FT::FQuarterPlusPlus: return d ? 2 : 4;
    case FT::FLargeMinus: return d ? 1 : 2;
    case FT::FLargePlus: return d ? 1 : 2;
    default: return 0;
  }
}

std::optional<int> FillupPlan::pick_nond(FT t) {
  auto lowest = [&](const std::set<std::pair<Q, int>>& set) -> std::optional<int> {
    if (set.empty() || set.begin()->first > beta_) return std::nullopt;
    return -set.begin()->second;
  };
  auto leftmost_empty = [&]() -> std::optional<int> {
    if (empty_nond_.empty()) return std::nullopt;
    return *empty_nond_.begin();
  };
  if (t == FT::FLargePlus || t == FT::FQuarterPlusPlus) return leftmost_empty();
  switch (stage_) {
    case 2:
    case 3: return lowest(main_);
    case 4: return t == FT::FQuarterPlus ? lowest(sml_) : lowest(main_);
    default: return leftmost_empty();
  }
}

FillupPlan::Choice FillupPlan::route_first_fit(FT t, const Q& x) {
  StreamState& st = streams_[static_cast<int>(t)];
  Choice c;
  if (auto i = st.ff.first_at_least(x)) {
    c.pos = st.bins[*i];
    c.rule = "stream-first-fit";
    return c;
  }
  std::optional<int> p;
  switch (t) {
    case FT::FSmall1:
    case FT::FSmall2:
    case FT::FBig:
      p = pick_d(x);
      c.rule = "d-first-fit";
      break;
    case FT::FEasy:
    case FT::FTop:
      p = ff_nonjq2_.first_at_least(x);
      c.rule = "skip-justQ2";
      break;
    case FT::FQuarter: {
      auto a = ff_jq2_.first_at_least(x);
      auto b = ff_ne_nonjq2_.first_at_least(x);
      if (st.next_jq2 ? a.has_value() : !b.has_value()) {
        p = a;
        c.rule = "quarter-justQ2";
      } else {
        p = b;
        c.rule = "quarter-other";
      }
      if (p) st.next_jq2 = !st.next_jq2;
      if (!p) {
        p = ff_nonjq2_.first_at_least(x);
        c.rule = "quarter-dedicated";
      }
      break;
    }
    default: break;
  }
  if (p) c.pos = *p;
  return c;
}

FillupPlan::Choice FillupPlan::route_hard(FT t, const Q& x) {
  StreamState& st = streams_[static_cast<int>(t)];
  Choice c;
  if (st.current >= 0) {
    const UBin& cur = u_[st.current];
    if (cur.count < cur.target && s_->fits(cur.bin, x)) {
      c.pos = st.current;
      c.rule = "hard-continue";
      return c;
    }
  }
  if (stage_ == 1) {
    if (auto p = pick_d(x)) {
      c.pos = *p;
      c.rule = "stage1-d";
    } else {
      ++d_exhausted_;
      note("violation", "no untouched D bin for a hard item");
    }
    return c;
  }
  const ConstantTable& tb = *t_;
  bool want_d = false;
  switch (t) {
    case FT::FQuarterPlus: want_d = st.used_d < 3 * (st.used_n + 1); break;
    case FT::FLargeMinus: want_d = st.used_d < st.used_n + 1; break;
    case FT::FLargePlus: {
      Q r = tb.online_capacity / beta_ - 2;
      want_d = Q(st.used_d + 1) <= r * (st.used_n + 1);
      break;
    }
    case FT::FQuarterPlusPlus: {
      Q r = (45 - 4 * beta_ - 5 * tb.eps) / (2 * beta_ - tb.large_max);
      want_d = st.used_n > 0 && Q(st.used_d + 1) <= r * st.used_n;
      break;
    }
    default: break;
  }
  if (want_d) {
    if (auto p = pick_d(x)) {
      c.pos = *p;
      c.rule = "hard-d";
    } else {
      ++d_exhausted_;
      note("violation", "no untouched D bin for a hard item");
    }
    return c;
  }
  if (auto p = pick_nond(t)) {
    if (s_->fits(u_[*p].bin, x)) {
      c.pos = *p;
      c.rule = "hard-nonD";
    } else {
      note("violation", "hard item does not fit its non-D bin");
    }
    return c;
  }
  const bool needs_empty = t == FT::FLargePlus || t == FT::FQuarterPlusPlus || stage_ == 5;
  if (!needs_empty) {
    c.advance = true;
    return c;
  }
  if (untouched_sl_nond_ > 0 && !stage6_) {
    stage6_ = true;
    note("violation", "stage 6: no empty bin left while S_L bins remain");
  }
  return c;
}

FillupStep FillupPlan::place(const Item& item) {
  FillupStep step;
  const Q& x = item.size;
  Choice c;
  FT type = FT::FSmall1;
  for (int guard = 0; guard < 6; ++guard) {
    type = classify_fillup(x, beta_, *t_, stage_ == 1);
    c = is_hard(type) ? route_hard(type, x) : route_first_fit(type, x);
    if (!c.advance || !advance_stage()) break;
  }
  step.type = type;
  step.stage = stage_;
  if (c.pos < 0) {
    step.route = FillupRoute::LastResort;
    step.rule = "last-resort";
    step.record = place_best_fit_any(*s_, item, true);
    int p = pos_of_[step.record.bin];
    if (p >= 0) {
      UBin& b = u_[p];
      if (!b.touched) {
        touch(p, -1);
        orphans_.push_back(p);
      }
      ++b.count;
      if (!b.closed) ff_u_.set(p, s_->residual(b.bin));
      if (b.in_d) d_volume_ += x;
      if (b.d_at_touch && credited(b)) leave_u(p);
      if (b.stream >= 0) {
        streams_[b.stream].ff.set(b.slot, s_->residual(b.bin));
        if (b.pooled) repool(p);
      }
      apply_rule2();
    }
    return step;
  }

  const int si = static_cast<int>(type);
  StreamState& st = streams_[si];
  UBin& b = u_[c.pos];
  if (!b.touched) {
    if (st.current >= 0 && st.current != c.pos) close(st.current);
    touch(c.pos, si);
    st.current = c.pos;
    b.target = target_for(type, b.in_d);
    b.stage1 = c.rule == std::string("stage1-d");
  }
  step.rule = c.rule;
  step.record = s_->place(b.bin, item);
  ++b.count;
  if (b.in_d) d_volume_ += x;
  if (!b.closed) ff_u_.set(c.pos, s_->residual(b.bin));
  st.ff.set(b.slot, s_->residual(b.bin));
  if (b.pooled) repool(c.pos);
  if (b.target > 0 && b.count == b.target) complete_hard(c.pos);
  if (b.d_at_touch && credited(b)) leave_u(c.pos);
  apply_rule2();
  return step;
}

GoodKind FillupPlan::detect_good_situation() const {
  const auto& w = s_->total_weight();
  if (w[0] >= 4 * s_->m() || w[1] >= 4 * s_->m()) return GoodKind::WeightExhausted;
  if (untouched_ne_nond_ == 0) return GoodKind::VerySimpleFillUp;
  if (untouched_jq2_ > 0 && untouched_ne_nonjq2_ == 0) return GoodKind::WeightBasedQ2;
  return GoodKind::None;
}

TransitionRecord place_best_fit_any(State& s, const Item& item, bool last_resort) {
  int best = -1;
  Q res;
  auto offer = [&](int id) {
    Q r = s.residual(id) - item.size;
    if (r < 0) return;
    if (best < 0 || r < res || (r == res && id < best)) {
      best = id;
      res = r;
    }
  };
  if (auto b = s.bf_open().best(item.size)) offer(*b);
  for (int id : s.delta_bins()) offer(id);
  if (auto f = s.fresh_bin()) offer(*f);
  if (best < 0) throw CapacityExceeded("item " + std::to_string(item.id) + " fits in no bin");
  return s.place(best, item, last_resort);
}

FillupGoodPacker::FillupGoodPacker(State& s, const FillupPlan& plan, GoodKind kind) : s_(&s), kind_(kind) {
  if (kind == GoodKind::VerySimpleFillUp) {
    for (const UBin& b : plan.ubins())
      if (!b.closed) order_.push_back(b.bin);
    index_.reserve(static_cast<int>(order_.size()));
    for (std::size_t i = 0; i < order_.size(); ++i) index_.set(static_cast<int>(i), s.residual(order_[i]));
  }
}

TransitionRecord FillupGoodPacker::place(const Item& item, bool* fallback) {
  State& s = *s_;
  if (fallback) *fallback = false;
  if (kind_ == GoodKind::VerySimpleFillUp) {
    if (auto p = index_.first_at_least(item.size)) {
      int id = order_[*p];
      TransitionRecord r = s.place(id, item);
      index_.set(*p, s.residual(id));
      return r;
    }
  }
  if (auto b = s.ff_all().first_at_least(item.size)) return s.place(*b, item);
  if (fallback) *fallback = true;
  return place_best_fit_any(s, item, true);
}

std::vector<std::string> audit_fillup(const FillupPlan& plan, const State& s) {
  std::vector<std::string> out;
  const ConstantTable& t = s.table();
  long h = plan.half_full();
  if (h > 13) out.push_back("half-full bins " + std::to_string(h) + " > 13");
  // D may run one bin short while Rule 2 waits for a full 10+6eps
  if (Q(plan.untouched_d() + 1) < plan.invariant4_rhs())
    out.push_back("untouched D bins " + std::to_string(plan.untouched_d()) + " below " +
                  to_string(plan.invariant4_rhs()));
  long v = plan.rule1_violations();
  if (v > 6) out.push_back("rule 1 violated by " + std::to_string(v) + " closed bins");
  if (plan.stage1_paid() + plan.stage1_remaining() != plan.stage1_initial())
    out.push_back("stage 1 credit not conserved");
  if (plan.stage6_reached()) out.push_back("stage 6 reached");
  if (plan.d_exhausted() > 0) out.push_back("D ran out for a hard item");
  (void)t;
  return out;
}

}  // namespace bst
