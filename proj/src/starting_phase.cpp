#include "bstretch/starting_phase.hpp"

#include <algorithm>

#include "bstretch/threats.hpp"

namespace bst {

const char* name(Phase p) {
  switch (p) {
    case Phase::Starting: return "starting";
    case Phase::FillUp: return "fillup";
    case Phase::GoodSituation: return "good-situation";
  }
  return "?";
}

const char* name(GoodKind k) {
  switch (k) {
    case GoodKind::None: return "none";
    case GoodKind::WeightExhausted: return "weight-exhausted";
    case GoodKind::SimpleFillUp: return "simple-fillup";
    case GoodKind::WeightBasedPacking: return "weight-based-packing";
    case GoodKind::VerySimpleFillUp: return "very-simple-fillup";
    case GoodKind::WeightBasedQ2: return "weight-based-justq2";
  }
  return "?";
}

namespace {

using ST = StartingType;

// Best Fit preference: smaller residual, then lower id.
struct Best {
  int bin = -1;
  Q residual;
  void offer(int id, const Q& res) {
    if (bin < 0 || res < residual || (res == residual && id < bin)) {
      bin = id;
      residual = res;
    }
  }
};

bool nice_rule_allows(Tag tag, ST t) {
  if (t == ST::Nice && (tag == Tag::DLarge || in_dhalf(tag))) return false;
  if ((t == ST::Half || t == ST::Large) && tag == Tag::DNice1) return false;
  return true;
}

std::optional<int> delta_first(const State& s, Tag tag, const Q& size) {
  for (int id : s.delta_bins())
    if (s.bin(id).tag == tag && s.fits(id, size)) return id;
  return std::nullopt;
}

Decision make(int bin, const char* rule) {
  Decision d;
  d.bin = bin;
  d.rule = rule;
  return d;
}

}  // namespace

Decision choose_starting(const State& s, const Item& item) {
  const ConstantTable& t = s.table();
  const Q& x = item.size;
  const ST type = classify_starting(x, t);
  const bool small = is_small(type);
  const bool dominant = is_dominant(type);
  const auto fresh = s.fresh_bin();

  // Step 1
  if (type == ST::Half || type == ST::Large)
    if (auto b = delta_first(s, Tag::DNice2, x)) return make(*b, "nice2-to-N");
  if (!small)
    if (auto b = s.ff_qonebig().first_at_least(x)) return make(*b, "qonebig-to-Q15");
  if (auto b = s.ff_c().first_at_least(x)) return make(*b, "use-complete");
  if (dominant) {
    if (auto b = s.ff_justq2().first_at_least(x)) return make(*b, "justQ2-to-Q25");
    if (auto b = s.ff_justq1().first_at_least(x)) return make(*b, "justQ1-dominant");
  }
  if (is_half_or_larger(type))
    if (auto b = delta_first(s, Tag::DHalfQ, x)) return make(*b, "halfQ-to-Q15");
  if (is_half_or_larger(type)) {
    Best best;
    if (dominant)
      if (auto b = s.bf_s().best(x)) best.offer(*b, s.residual(*b) - x);
    for (int id : s.delta_bins()) {
      const BinRecord& b = s.bin(id);
      if (!s.fits(id, x) || !nice_rule_allows(b.tag, type)) continue;
      if (type == ST::Half && b.tag == Tag::DLarge) continue;
      if (State::regular_transition(b.tag, type) != Tag::L) continue;
      best.offer(id, s.residual(id) - x);
    }
    if (best.bin < 0 && dominant && fresh) best.offer(*fresh, t.online_capacity - x);
    if (best.bin >= 0) return make(best.bin, "create-L");
  }

  // Step 2
  switch (type) {
    case ST::Small1:
    case ST::Small2:
      if (auto b = s.ff_small().first_at_least(x)) return make(*b, "small-first-fit");
      if (x <= t.smallslot)
        if (auto b = delta_first(s, Tag::DHalfBar, x)) return make(*b, "small-halfbar");
      if (fresh) return make(*fresh, "small-empty");
      break;
    case ST::Quarter:
      if (s.q1() + s.count(Tag::DHalfQ) >= 2 * s.q2() + t.q_ratio_slack) {
        if (auto b = s.ff_justq1().first_at_least(x)) return make(*b, "quarter-justQ1");
        // no justQ1 bin: the other branch keeps an empty bin available
      }
      if (auto b = delta_first(s, Tag::DHalfBar, x)) return make(*b, "quarter-halfbar");
      if (fresh) return make(*fresh, "quarter-empty");
      break;
    case ST::Nice:
      if (auto b = delta_first(s, Tag::DNice2, x)) return make(*b, "nice-to-N");
      if (s.count(Tag::DNice1) == 2) {
        if (auto b = delta_first(s, Tag::DNice1, x)) return make(*b, "nice-to-nice2");
      } else if (fresh) {
        return make(*fresh, "nice-empty");
      }
      break;
    case ST::Half:
      if (auto b = s.bf_s_justq1().best(x)) return make(*b, "half-best-fit");
      if (auto b = delta_first(s, Tag::DLarge, x)) return make(*b, "half-into-large");
      if (fresh) return make(*fresh, "half-empty");
      break;
    case ST::Large:
      if (fresh) return make(*fresh, "large-empty");
      break;
    case ST::Big:
    case ST::Top:
      if (fresh) return make(*fresh, "dominant-empty");
      break;
  }

  // rule of last resort
  Decision d;
  d.last_resort = true;
  d.rule = "last-resort";
  Best best, any;
  if (auto b = s.bf_open().best(x)) {
    best.offer(*b, s.residual(*b) - x);
    any.offer(*b, s.residual(*b) - x);
  }
  const bool honor = s.nice_rule_violations() == 0;
  for (int id : s.delta_bins()) {
    if (!s.fits(id, x)) continue;
    any.offer(id, s.residual(id) - x);
    if (nice_rule_allows(s.bin(id).tag, type)) best.offer(id, s.residual(id) - x);
  }
  if (fresh) {
    best.offer(*fresh, t.online_capacity - x);
    any.offer(*fresh, t.online_capacity - x);
  }
  if (honor && best.bin >= 0) {
    d.bin = best.bin;
  } else if (any.bin >= 0) {
    d.bin = any.bin;
    d.nice_violation = in_delta(s.bin(any.bin).tag) && !nice_rule_allows(s.bin(any.bin).tag, type);
  }
  return d;
}

StartingStep place_item_starting(State& s, const Item& item) {
  StartingStep step;
  step.decision = choose_starting(s, item);
  if (step.decision.bin < 0)
    throw CapacityExceeded("item " + std::to_string(item.id) + " of size " + to_string(item.size) +
                           " fits in no bin");
  if (step.decision.nice_violation) s.set_nice_violation();
  step.record = s.place(step.decision.bin, item, step.decision.last_resort);

  // Step 3
  while (s.count(Tag::QOneBig) >= 2) {
    auto q = s.oldest_q25();
    if (!q) break;
    auto two = s.oldest_qonebig(2);
    s.match(two[0], two[1], *q);
    ++step.matched;
  }
  // Step 4
  if (step.record.from == Tag::E && step.record.to == Tag::JustQ1) {
    if (auto g = s.swap_candidate()) {
      s.apply_swap(step.record.bin, *g);
      step.swap_target = *g;
    }
  }
  return step;
}

Q tfirst_now(const State& s) {
  return s.table().tfirst(s.m(), s.c(), s.count(Tag::QOneBig), s.table().tfirst_k);
}

bool check_fillup_trigger(const State& s) { return s.counted() >= tfirst_now(s); }

bool simple_fillup_prefix(const State& s) {
  const ConstantTable& t = s.table();
  long k0 = std::max(0L, ceil_long(t.ffcond(s.m(), s.count(Tag::N))));
  if (k0 == 0) return true;
  auto sum = s.top_high_levels(k0);
  return sum && *sum >= t.f_avg_target * k0;
}

GoodKind detect_good_situation(const State& s) {
  const ConstantTable& t = s.table();
  const auto& w = s.total_weight();
  if (w[0] >= 4 * s.m() || w[1] >= 4 * s.m()) return GoodKind::WeightExhausted;
  if (s.mid_level_bins() <= 4 && simple_fillup_prefix(s)) {
    WeightCertificate cert = build_invariant1_certificate(s);
    if (cert.success && cert.applicable) return GoodKind::SimpleFillUp;
  }
  long n = s.count(Tag::N);
  if (s.count(Tag::S) + s.count(Tag::JustQ1) + s.count(Tag::JustQ2) == 0 && Q(s.c()) >= t.ffcond(s.m(), n) &&
      Q(s.empty_count()) >= t.e0(s.m(), s.count(Tag::L), s.count(Tag::QMatch), n))
    return GoodKind::WeightBasedPacking;
  return GoodKind::None;
}

GoodSituationPacker::GoodSituationPacker(State& s, GoodKind kind) : s_(&s), kind_(kind) {
  if (kind == GoodKind::SimpleFillUp) {
    const Q& limit = s.table().big_block;
    for (const BinRecord& b : s.bins())
      if (b.level <= limit) order_.push_back(b.id);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return s.bin(a).level > s.bin(b).level; });
    index_.reserve(static_cast<int>(order_.size()));
    for (std::size_t i = 0; i < order_.size(); ++i) index_.set(static_cast<int>(i), s.residual(order_[i]));
  }
}

TransitionRecord GoodSituationPacker::place(const Item& item, bool* fallback) {
  State& s = *s_;
  if (fallback) *fallback = false;
  if (kind_ == GoodKind::WeightBasedPacking) return place_item_starting(s, item).record;
  if (kind_ == GoodKind::SimpleFillUp) {
    if (auto p = index_.first_at_least(item.size)) {
      int id = order_[*p];
      TransitionRecord r = s.place(id, item);
      index_.set(*p, s.residual(id));
      return r;
    }
  } else if (auto b = s.ff_all().first_at_least(item.size)) {
    return s.place(*b, item);
  }
  if (fallback) *fallback = true;
  Best best;
  if (auto b = s.bf_open().best(item.size)) best.offer(*b, s.residual(*b));
  for (int id : s.delta_bins())
    if (s.fits(id, item.size)) best.offer(id, s.residual(id));
  if (auto f = s.fresh_bin()) best.offer(*f, s.table().online_capacity);
  if (best.bin < 0) throw CapacityExceeded("item " + std::to_string(item.id) + " fits in no bin");
  return s.place(best.bin, item);
}

}  // namespace bst
