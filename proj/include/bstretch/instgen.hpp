#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bstretch/constants.hpp"
#include "bstretch/items.hpp"

namespace bst {

struct Instance {
  Config config;
  std::string generator;
  std::uint64_t seed = 0;
  std::vector<Item> items;  // item.id is the arrival index
  std::vector<int> cert;    // offline bin of each item
};

enum class Order { Shuffle, Decreasing, Increasing, Interleave };
const char* name(Order o);
Order parse_order(const std::string& s);
inline constexpr Order kAllOrders[] = {Order::Shuffle, Order::Decreasing, Order::Increasing, Order::Interleave};

// Type mixtures over the eight starting types.
std::vector<std::string> profile_names();
// Profiles used for the mixed random runs.
std::vector<std::string> mixed_profiles();

Instance gen_random_feasible(const Config& cfg, std::uint64_t seed, const std::string& profile,
                             Order order = Order::Shuffle);

enum class Pattern {
  AllTwelve,
  QuarterFlood,
  HalfFlood,
  LargeThenGiants,
  NiceLargeTrap,
  SmallThenBigs,
  SmallThenSevens,
  MixedRandom,
  StageStress
};
const char* name(Pattern p);
Pattern parse_pattern(const std::string& s);
inline constexpr Pattern kAllPatterns[] = {Pattern::AllTwelve,       Pattern::QuarterFlood,  Pattern::HalfFlood,
                                           Pattern::LargeThenGiants, Pattern::NiceLargeTrap, Pattern::SmallThenBigs,
                                           Pattern::SmallThenSevens, Pattern::MixedRandom,   Pattern::StageStress};

struct PatternSpec {
  Pattern pattern = Pattern::AllTwelve;
  std::uint64_t seed = 1;
  // StageStress: small load of every offline bin before its hard items arrive.
  // Zero selects 4 - 4eps.
  Q level;
};

struct InfeasiblePattern : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Instance gen_pattern(const Config& cfg, const PatternSpec& spec);

struct CertificateAudit {
  bool ok = true;
  std::string detail;
};
CertificateAudit audit_certificate(const Instance& inst);

// JSON lines: a header record, then one record per item.
void write_instance(std::ostream& os, const Instance& inst);
Instance read_instance(std::istream& is);

// FNV-1a over the item sizes in arrival order.
std::string fingerprint(const std::vector<Item>& items);

Q total_size(const Instance& inst);

}  // namespace bst
