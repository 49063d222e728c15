#include "bstretch/threats.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace bst {

const char* name(ThreatKind k) {
  switch (k) {
    case ThreatKind::Top: return "top";
    case ThreatKind::Big: return "big";
    case ThreatKind::Large: return "large";
  }
  return "?";
}

WeightScheme scheme_for(ThreatKind k) {
  switch (k) {
    case ThreatKind::Top: return WeightScheme::WTop;
    case ThreatKind::Big: return WeightScheme::WBig;
    case ThreatKind::Large: return WeightScheme::WLarge;
  }
  return WeightScheme::WTop;
}

ThreatBound threat_upper_bound_by_weight(const State& s, ThreatKind kind) {
  long w = s.total_weight()[static_cast<int>(scheme_for(kind))];
  return {kind, s.m() - w / 4, BoundProvenance::WeightBound};
}

long weight_bound(const std::vector<Q>& items, long m, ThreatKind kind, const ConstantTable& t) {
  long w = 0;
  for (const Q& x : items) w += weight(x, scheme_for(kind), t);
  return m - w / 4;
}

namespace {

Q lower_size(ThreatKind kind, const ConstantTable& t) {
  switch (kind) {
    case ThreatKind::Top: return t.big_max;
    case ThreatKind::Big: return t.large_max;
    case ThreatKind::Large: return t.half_max;
  }
  return Q(0);
}

}  // namespace

long exact_threat_oracle(const std::vector<Q>& items, int m, ThreatKind kind, const ConstantTable& t) {
  if (m < 1 || m > 8 || items.size() > 16) throw TooLarge("oracle limited to m <= 8 and 16 items");
  std::vector<Q> xs = items;
  std::sort(xs.begin(), xs.end(), std::greater<>());
  const Q cap = t.offline_capacity;
  const Q free_below = cap - lower_size(kind, t);
  std::map<std::string, long> memo;

  std::function<long(std::size_t, std::vector<Q>&)> go = [&](std::size_t i, std::vector<Q>& loads) -> long {
    if (i == xs.size()) {
      long n = 0;
      for (const Q& l : loads) n += l < free_below;
      return n;
    }
    std::vector<Q> sorted = loads;
    std::sort(sorted.begin(), sorted.end());
    std::string key = std::to_string(i);
    for (const Q& l : sorted) key += "|" + l.get_str();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    long best = -1;
    for (int b = 0; b < m; ++b) {
      bool dup = false;
      for (int a = 0; a < b && !dup; ++a) dup = loads[a] == loads[b];
      if (dup || loads[b] + xs[i] > cap) continue;
      loads[b] += xs[i];
      best = std::max(best, go(i + 1, loads));
      loads[b] -= xs[i];
    }
    memo.emplace(std::move(key), best);
    return best;
  };
  std::vector<Q> loads(m, Q(0));
  long r = go(0, loads);
  if (r < 0) throw std::invalid_argument("items do not fit into m bins of size 12");
  return r;
}

namespace {

constexpr Tag kC[] = {Tag::L, Tag::Q15, Tag::Q25, Tag::QMatch, Tag::N};
constexpr Tag kDelta[] = {Tag::DLarge, Tag::DHalfBar, Tag::DHalfS, Tag::DHalfQ, Tag::DNice1, Tag::DNice2};
constexpr Tag kReceivers[] = {Tag::JustQ2, Tag::DLarge, Tag::DHalfBar, Tag::DHalfS, Tag::DHalfQ, Tag::DNice1};

long wsum(const State& s, WeightScheme w, std::initializer_list<Tag> tags) {
  long n = 0;
  for (Tag t : tags) n += s.aggregate(t).wsum[static_cast<int>(w)];
  return n;
}

long z_weight(const State& s, WeightScheme w, bool with_qonebig) {
  long n = 0;
  for (Tag t : kC) n += s.aggregate(t).wsum[static_cast<int>(w)];
  for (Tag t : kDelta) n += s.aggregate(t).wsum[static_cast<int>(w)];
  if (with_qonebig) n += s.aggregate(Tag::QOneBig).wsum[static_cast<int>(w)];
  return n;
}

long tag_top_block(const State& s) {
  long n = s.c() + s.count(Tag::JustQ2) + s.count(Tag::QOneBig);
  n += s.delta_count() - s.count(Tag::DNice1);
  return n;
}

void detail_justq2(const State& s, WeightCertificate& cert) {
  std::vector<int> w(s.m());
  long before = 0;
  for (const BinRecord& b : s.bins()) {
    w[b.id] = b.weight(WeightScheme::WTop);
    before += w[b.id];
  }
  std::vector<int> donors;
  for (const BinRecord& b : s.bins()) {
    if (b.tag == Tag::JustQ1 && w[b.id] >= 1) donors.push_back(b.id);
    if (b.tag == Tag::Q15 && w[b.id] >= 5) donors.push_back(b.id);
  }
  std::size_t next = 0;
  for (const BinRecord& b : s.bins()) {
    bool receiver = std::find(std::begin(kReceivers), std::end(kReceivers), b.tag) != std::end(kReceivers);
    while (receiver && w[b.id] < 4 && next < donors.size()) {
      --w[donors[next++]];
      ++w[b.id];
    }
  }
  long after = 0;
  for (const BinRecord& b : s.bins()) {
    after += w[b.id];
    bool in_block = in_c(b.tag) || b.tag == Tag::JustQ2 || b.tag == Tag::QOneBig || in_delta(b.tag);
    if (w[b.id] < 0 && cert.reason.empty()) cert.reason = "negative weight on bin " + std::to_string(b.id);
    if (in_block && w[b.id] < 4 && cert.reason.empty())
      cert.reason = "bin " + std::to_string(b.id) + " below 4 after reassignment";
    cert.per_bin.push_back({b.id, w[b.id]});
  }
  if (before != after && cert.reason.empty()) cert.reason = "reassignment does not conserve weight";
}

}  // namespace

WeightCertificate build_invariant1_certificate(const State& s, bool detail) {
  WeightCertificate cert;
  const long jq2 = s.count(Tag::JustQ2);
  const long topblock = s.blocks().top;
  const long tagged = tag_top_block(s);
  cert.applicable = !s.last_resort_into_top_block();
  auto fail = [&](const std::string& why) {
    if (cert.reason.empty()) cert.reason = why;
  };
  if (topblock > tagged) fail("TopBlock holds bins outside C, justQ2, Qonebig and delta");

  if (jq2 > 0) {
    cert.claim = "w_top(TopBlock + Dnice1) >= 4 |TopBlock + Dnice1|";
    cert.scheme = WeightScheme::WTop;
    const long dq = s.count(Tag::DHalfQ);
    if (s.q1() + dq < 2 * s.q2() + 12) fail("not enough Q1 bins to reassign weight from");
    long need = 0;
    for (Tag t : kReceivers) {
      const TagAggregate& a = s.aggregate(t);
      need += a.deficit(WeightScheme::WTop, 4);
      if (a.below(WeightScheme::WTop, 2) > 0) fail(std::string("a bin in ") + name(t) + " needs more than 2");
    }
    long donors = s.aggregate(Tag::JustQ1).at_least(WeightScheme::WTop, 1) +
                  s.aggregate(Tag::Q15).at_least(WeightScheme::WTop, 5);
    if (donors < need) fail("not enough Q1 weight to reassign");
    for (Tag t : {Tag::L, Tag::Q15, Tag::Q25, Tag::QMatch, Tag::N, Tag::QOneBig, Tag::DNice2})
      if (s.aggregate(t).below(WeightScheme::WTop, 4) > 0)
        fail(std::string("a bin in ") + name(t) + " has w_top below 4");
    cert.moved = need;
    cert.block = tagged + s.count(Tag::DNice1);
    cert.weight = wsum(s, WeightScheme::WTop,
                       {Tag::L, Tag::Q15, Tag::Q25, Tag::QMatch, Tag::N, Tag::JustQ2, Tag::QOneBig,
                        Tag::DLarge, Tag::DHalfBar, Tag::DHalfS, Tag::DHalfQ, Tag::DNice1, Tag::DNice2}) +
                  need;
    if (cert.weight < 4 * cert.block) fail("reassigned block weight below 4 per bin");
    if (detail) detail_justq2(s, cert);
  } else {
    bool use_big = s.bins_with_wbig_at_least6() > 0 || s.count(Tag::DNice1) > 0;
    cert.scheme = use_big ? WeightScheme::WBig : WeightScheme::WLarge;
    cert.claim = std::string(use_big ? "w_big" : "w_large") + "(C + Qonebig + delta) >= 4 |TopBlock| - 2";
    cert.block = topblock;
    cert.weight = z_weight(s, cert.scheme, true);
    if (cert.weight < 4 * topblock - 2) fail("weight of C, Qonebig and delta below 4 |TopBlock| - 2");
    if (detail) {
      for (const BinRecord& b : s.bins()) cert.per_bin.push_back({b.id, b.weight(cert.scheme)});
    }
  }
  long bb = s.blocks().big;
  cert.big_block_ok = z_weight(s, WeightScheme::WBig, true) >= 4 * bb - 2 ||
                      z_weight(s, WeightScheme::WLarge, true) >= 4 * bb - 2;
  if (!cert.big_block_ok) fail("weight below 4 |BigBlock| - 2");
  cert.success = cert.reason.empty();
  return cert;
}

}  // namespace bst
