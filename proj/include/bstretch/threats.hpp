#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bstretch/state.hpp"

namespace bst {

enum class ThreatKind { Top, Big, Large };
enum class BoundProvenance { WeightBound, ExactOracle, Certificate };

const char* name(ThreatKind k);
WeightScheme scheme_for(ThreatKind k);

struct ThreatBound {
  ThreatKind kind = ThreatKind::Top;
  long value = 0;
  BoundProvenance provenance = BoundProvenance::WeightBound;
};

// m - floor(w(I_partial) / 4) under the scheme that matches the kind.
ThreatBound threat_upper_bound_by_weight(const State& s, ThreatKind kind);
long weight_bound(const std::vector<Q>& items, long m, ThreatKind kind, const ConstantTable& t);

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Largest t such that the items fit into m bins of size 12 with at least t bins
// whose load is strictly below 12 - s0 (s0 = 10+6eps, 9-eps, 6+2eps).  Throws
// TooLarge beyond m = 8 or 16 items and std::invalid_argument if the items
// cannot be packed at all.
long exact_threat_oracle(const std::vector<Q>& items, int m, ThreatKind kind, const ConstantTable& t);

struct WeightCertificate {
  bool applicable = true;  // false once a bin entered TopBlock by the rule of last resort
  bool success = false;
  std::string claim;
  std::string reason;  // failure reason, empty on success
  WeightScheme scheme = WeightScheme::WTop;
  long block = 0;   // size of the certified block
  long weight = 0;  // weight of the certified block after reassignment
  long moved = 0;   // weight moved by the reassignment
  bool big_block_ok = false;
  std::vector<std::pair<int, int>> per_bin;  // (bin, reassigned weight) with detail = true
};

// With detail = true the reassignment is also carried out bin by bin and
// checked for conservation and nonnegativity.
WeightCertificate build_invariant1_certificate(const State& s, bool detail = false);

}  // namespace bst
