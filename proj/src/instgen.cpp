#include "bstretch/instgen.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace bst {

const char* name(Order o) {
  switch (o) {
    case Order::Shuffle: return "shuffle";
    case Order::Decreasing: return "decreasing";
    case Order::Increasing: return "increasing";
    case Order::Interleave: return "interleave";
  }
  return "?";
}

Order parse_order(const std::string& s) {
  for (Order o : kAllOrders)
    if (s == name(o)) return o;
  throw std::invalid_argument("unknown order: " + s);
}

const char* name(Pattern p) {
  switch (p) {
    case Pattern::AllTwelve: return "AllTwelve";
    case Pattern::QuarterFlood: return "QuarterFlood";
    case Pattern::HalfFlood: return "HalfFlood";
    case Pattern::LargeThenGiants: return "LargeThenGiants";
    case Pattern::NiceLargeTrap: return "NiceLargeTrap";
    case Pattern::SmallThenBigs: return "SmallThenBigs";
    case Pattern::SmallThenSevens: return "SmallThenSevens";
    case Pattern::MixedRandom: return "MixedRandom";
    case Pattern::StageStress: return "StageStress";
  }
  return "?";
}

Pattern parse_pattern(const std::string& s) {
  for (Pattern p : kAllPatterns)
    if (s == name(p)) return p;
  throw std::invalid_argument("unknown pattern: " + s);
}

namespace {

using Weights = std::array<int, 8>;

// Weights over small1, quarter, small2, nice, half, large, big, top.
const std::map<std::string, Weights>& profiles() {
  static const std::map<std::string, Weights> p = {
      {"mixed", {3, 2, 2, 1, 1, 2, 1, 1}},          {"small-heavy", {6, 1, 2, 0, 0, 1, 1, 1}},
      {"half-heavy", {1, 1, 0, 1, 4, 1, 0, 0}},     {"large-heavy", {2, 1, 1, 1, 1, 4, 1, 0}},
      {"nice-heavy", {1, 0, 1, 4, 1, 2, 0, 0}},     {"dominant-heavy", {3, 1, 1, 0, 0, 0, 3, 3}},
      {"quarter-mix", {2, 5, 1, 0, 1, 1, 1, 0}},
  };
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

struct Builder {
  std::vector<Q> sizes;
  std::vector<int> bins;
  void add(const Q& x, int bin) {
    sizes.push_back(x);
    bins.push_back(bin);
  }
};

void shuffle_together(Rng& rng, Builder& b) {
  for (std::size_t i = b.sizes.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(b.sizes[i - 1], b.sizes[j]);
    std::swap(b.bins[i - 1], b.bins[j]);
  }
}

// Uniform on the grid 1/den inside (lo, hi].
Q sample(Rng& rng, const Q& lo, const Q& hi, long den) {
  mpz_class a = floor_q(lo * den) + 1;
  mpz_class b = floor_q(hi * den);
  if (b < a) return hi;
  mpz_class span = b - a + 1;
  std::uint64_t k = rng.below(span.get_ui());
  Q x(mpz_class(a + k), den);
  x.canonicalize();
  return x;
}

long grid(const ConstantTable& t) { return t.eps.get_den().get_si() * 120; }

void fill_bin(Rng& rng, const Weights& w, const ConstantTable& t, int bin, Builder& out) {
  const long den = grid(t);
  Q rem = t.offline_capacity;
  while (rem > 0) {
    if (rem < 1 && rng.chance(50)) break;
    if (rng.chance(15)) {
      out.add(rem, bin);
      break;
    }
    int total = 0;
    std::array<int, 8> ok{};
    for (int i = 0; i < 8; ++i) {
      if (type_infimum(static_cast<StartingType>(i), t) < rem) ok[i] = w[i];
      total += ok[i];
    }
    if (total == 0) {
      out.add(rem, bin);
      break;
    }
    int r = static_cast<int>(rng.below(total));
    int i = 0;
    while (r >= ok[i]) r -= ok[i++];
    auto type = static_cast<StartingType>(i);
    Q x = sample(rng, type_infimum(type, t), qmin(type_maximum(type, t), rem), den);
    out.add(x, bin);
    rem -= x;
  }
}

Instance finish(const Config& cfg, std::string generator, std::uint64_t seed, Builder& b, Order order,
                Rng& rng, const ConstantTable& t) {
  std::vector<std::size_t> idx(b.sizes.size());
  std::iota(idx.begin(), idx.end(), 0);
  switch (order) {
    case Order::Shuffle: rng.shuffle(idx); break;
    case Order::Decreasing:
      std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return b.sizes[x] > b.sizes[y]; });
      break;
    case Order::Increasing:
      std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return b.sizes[x] < b.sizes[y]; });
      break;
    case Order::Interleave: {
      std::vector<std::size_t> low, high;
      for (auto i : idx) (b.sizes[i] > t.large_max ? high : low).push_back(i);
      rng.shuffle(low);
      rng.shuffle(high);
      idx = low;
      idx.insert(idx.end(), high.begin(), high.end());
      break;
    }
  }
  Instance inst;
  inst.config = cfg;
  inst.generator = std::move(generator);
  inst.seed = seed;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    inst.items.push_back({static_cast<long>(k), b.sizes[idx[k]]});
    inst.cert.push_back(b.bins[idx[k]]);
  }
  return inst;
}

// Keeps the arrival order of the builder.
Instance as_is(const Config& cfg, std::string generator, std::uint64_t seed, Builder& b) {
  Instance inst;
  inst.config = cfg;
  inst.generator = std::move(generator);
  inst.seed = seed;
  for (std::size_t k = 0; k < b.sizes.size(); ++k) {
    inst.items.push_back({static_cast<long>(k), b.sizes[k]});
    inst.cert.push_back(b.bins[k]);
  }
  return inst;
}

}  // namespace

std::vector<std::string> profile_names() {
  std::vector<std::string> v{"all-top", "quarter-heavy"};
  for (const auto& [k, w] : profiles()) v.push_back(k);
  return v;
}

std::vector<std::string> mixed_profiles() {
  return {"mixed", "small-heavy", "half-heavy", "large-heavy", "nice-heavy", "dominant-heavy", "quarter-mix",
          "quarter-heavy"};
}

Instance gen_random_feasible(const Config& cfg, std::uint64_t seed, const std::string& profile, Order order) {
  validate_config(cfg);
  const ConstantTable t = derive_constants(cfg);
  Rng rng(seed);
  Builder b;
  const int m = static_cast<int>(cfg.m);
  if (profile == "all-top") {
    for (int i = 0; i < m; ++i) b.add(t.top_max, i);
  } else if (profile == "quarter-heavy") {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 3; ++j) b.add(sample(rng, t.small_max_1, t.quarter_max, grid(t)), i);
  } else {
    auto it = profiles().find(profile);
    if (it == profiles().end()) throw std::invalid_argument("unknown profile: " + profile);
    for (int i = 0; i < m; ++i) fill_bin(rng, it->second, t, i, b);
  }
  std::string gen = "random:" + profile + ":" + name(order);
  return finish(cfg, gen, seed, b, order, rng, t);
}

Instance gen_pattern(const Config& cfg, const PatternSpec& spec) {
  validate_config(cfg);
  const ConstantTable t = derive_constants(cfg);
  const int m = static_cast<int>(cfg.m);
  const Q& e = t.eps;
  Builder b;
  std::string gen = std::string("pattern:") + name(spec.pattern);
  switch (spec.pattern) {
    case Pattern::AllTwelve:
      for (int i = 0; i < m; ++i) b.add(Q(12), i);
      break;
    case Pattern::QuarterFlood:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < 4; ++j) b.add(Q(3), i);
      break;
    case Pattern::HalfFlood:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < 2; ++j) b.add(Q(6), i);
      break;
    case Pattern::LargeThenGiants: {
      if (m < 2) throw InfeasiblePattern("LargeThenGiants needs m >= 2");
      b.add(6 + 3 * e, 0);
      b.add(6 - 3 * e, 0);
      Q tiny = 2 * e / (m - 1);
      for (int i = 1; i < m; ++i) b.add(tiny, i);
      for (int i = 1; i < m; ++i) b.add(12 - tiny, i);
      break;
    }
    case Pattern::NiceLargeTrap:
      for (int i = 0; i < m; ++i) b.add(6 - 3 * e, i);
      for (int i = 0; i < m; ++i) b.add(6 + 3 * e, i);
      break;
    case Pattern::SmallThenBigs:
      // Four items of size 3 share one offline bin, then m-1 items of size 12.
      for (int j = 0; j < 4; ++j) b.add(Q(3), 0);
      for (int i = 1; i < m; ++i) b.add(Q(12), i);
      break;
    case Pattern::SmallThenSevens: {
      Q s = (5 - e) / 2;
      for (int i = 0; i < m; ++i) {
        b.add(s, i);
        b.add(s, i);
      }
      for (int i = 0; i < m; ++i) b.add(7 + e, i);
      break;
    }
    case Pattern::MixedRandom:
      return gen_random_feasible(cfg, spec.seed, "mixed", Order::Shuffle);
    case Pattern::StageStress: {
      // Small items bring every offline bin to `level`; the rest of the bin
      // arrives afterwards as one large item or as quarter+ sized items.
      Q level = spec.level == 0 ? t.quarter_max : spec.level;
      if (level <= 0 || level >= 12 - t.half_max) throw InfeasiblePattern("StageStress level out of range");
      Rng rng(spec.seed);
      Builder smalls, hard;
      const long den = grid(t);
      for (int i = 0; i < m; ++i) {
        Q rem = level;
        while (rem > 0) {
          Q x = rem <= t.small_max_1 ? rem : sample(rng, Q(1), t.small_max_1, den);
          smalls.add(x, i);
          rem -= x;
        }
        Q rest = 12 - level;
        if (rest <= t.large_max || rng.chance(50)) {
          if (rest > t.large_max) {
            Q x = sample(rng, t.half_max, t.large_max, den);
            hard.add(x, i);
            rest -= x;
          }
          hard.add(rest, i);
        } else {
          Q q = rest / 3;
          for (int j = 0; j < 3; ++j) hard.add(q, i);
        }
      }
      shuffle_together(rng, smalls);
      shuffle_together(rng, hard);
      gen += ":" + to_string(level);
      b = std::move(smalls);
      for (std::size_t k = 0; k < hard.sizes.size(); ++k) b.add(hard.sizes[k], hard.bins[k]);
      break;
    }
  }
  return as_is(cfg, gen, spec.seed, b);
}

CertificateAudit audit_certificate(const Instance& inst) {
  CertificateAudit a;
  const long m = inst.config.m;
  if (inst.cert.size() != inst.items.size()) {
    a.ok = false;
    a.detail = "certificate has " + std::to_string(inst.cert.size()) + " entries for " +
               std::to_string(inst.items.size()) + " items";
    return a;
  }
  std::vector<Q> load(m);
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    int bin = inst.cert[i];
    if (bin < 0 || bin >= m) {
      a.ok = false;
      a.detail = "item " + std::to_string(i) + " is not assigned to a bin";
      return a;
    }
    const Q& x = inst.items[i].size;
    if (x <= 0 || x > 12) {
      a.ok = false;
      a.detail = "item " + std::to_string(i) + " has size " + to_string(x);
      return a;
    }
    load[bin] += x;
  }
  for (long i = 0; i < m; ++i)
    if (load[i] > 12) {
      a.ok = false;
      a.detail = "offline bin " + std::to_string(i) + " holds " + to_string(load[i]);
      return a;
    }
  return a;
}

void write_instance(std::ostream& os, const Instance& inst) {
  nlohmann::ordered_json h;
  h["m"] = inst.config.m;
  h["eps"] = to_string(inst.config.eps);
  h["generator"] = inst.generator;
  h["seed"] = inst.seed;
  os << h.dump() << '\n';
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    nlohmann::ordered_json r;
    r["index"] = inst.items[i].id;
    r["size"] = to_string(inst.items[i].size);
    r["cert_bin"] = inst.cert[i];
    os << r.dump() << '\n';
  }
}

Instance read_instance(std::istream& is) {
  Instance inst;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty instance file");
  auto h = nlohmann::json::parse(line);
  inst.config.m = h.at("m").get<long>();
  inst.config.eps = parse_rational(h.at("eps").get<std::string>());
  inst.generator = h.value("generator", "");
  inst.seed = h.value("seed", std::uint64_t{0});
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = nlohmann::json::parse(line);
    inst.items.push_back({r.at("index").get<long>(), parse_rational(r.at("size").get<std::string>())});
    inst.cert.push_back(r.value("cert_bin", -1));
  }
  return inst;
}

std::string fingerprint(const std::vector<Item>& items) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const Item& it : items) {
    mix(to_string(it.size));
    mix(";");
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

Q total_size(const Instance& inst) {
  Q s;
  for (const Item& it : inst.items) s += it.size;
  return s;
}

}  // namespace bst
