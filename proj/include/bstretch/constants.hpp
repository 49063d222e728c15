#pragma once

#include <optional>
#include <string>

#include "bstretch/rational.hpp"

namespace bst {

struct Config {
  long m = 0;
  Q eps = make_q(1, 31);

  // "guaranteed" presets: (1/31, m >= 60000) and (1/62, m >= 3300).
  bool guaranteed() const;
  std::string validity() const;  // "guaranteed" or "experimental"
};

// Throws std::invalid_argument unless 0 < eps < 1/5 and m >= 1.
void validate_config(const Config& cfg);

struct ConstantTable {
  Q eps;
  Q offline_capacity;  // 12
  Q online_capacity;   // 18 - 2eps

  // starting-phase type maxima
  Q small_max_1;  // 3 - 3eps
  Q quarter_max;  // 4 - 4eps
  Q small_max_2;  // 5 + eps
  Q nice_max;     // 6 - 2eps
  Q half_max;     // 6 + 2eps
  Q large_max;    // 9 - eps
  Q big_max;      // 10 + 6eps
  Q top_max;      // 12

  Q smallslot;  // 6 - 6eps
  long q_ratio_slack = 15;

  // fill-up fixed thresholds
  Q f_small1_max;    // (10+6eps)/3
  Q f_quarter_max;   // 4 + eps
  Q f_qpp_max;       // (9-eps)/2
  Q f_small2_max;    // 5 + 3eps
  Q f_easy_max;      // 6 + 2eps
  Q f_large_max;     // 9 - eps
  Q f_big_max;       // 10 + 6eps
  Q f_top_max;       // 12

  // block thresholds
  Q top_block;    // 6 - 2eps
  Q big_block;    // 8 - 8eps
  Q large_block;  // 9 - eps

  // misc derived
  Q x_ell_limit;     // 12 + 4eps
  Q n_min;           // 15 + 3eps
  Q match_min;       // 3 (13 - 5eps)
  Q swap_min;        // 14 + 2eps
  Q f_avg_target;    // 13 - 3eps
  Q rule1_quota;     // 9 - eps
  Q rule3_quota;     // 10 + 6eps
  Q q15_credit;      // 1 + 7eps

  // FFcond(alpha) with alpha = 1 - 3eps and mid constant 2
  Q ff_alpha;
  Q ff_m_coef;   // (3+eps)/(3+eps+alpha)
  Q ff_n_coef;   // (3+3eps-alpha)/(3+eps)
  Q ff_const;    // 24/alpha + 2(4+8eps)/alpha + 2
  long ff_mid_constant = 2;

  // Tfirst(k) = tfirst_slope * m + tfirst_per_bin * (c + q1big + k)
  Q tfirst_slope;    // 3 + eps
  Q tfirst_per_bin;  // 9 - eps
  long tfirst_k = 14;

  // initial D size = d_u_coef * u + d_const_coef * 14
  Q d_u_coef;      // (1+7eps)/(10+6eps)
  Q d_const_coef;  // (9-eps)/(10+6eps)

  // E0 = e0_a (m~) + e0_n n + e0_a qmatch + e0_l l - 48 with m~ = m - l - qmatch
  Q e0_a;  // (1-5eps)/(4-4eps)
  Q e0_n;  // (2+8eps)/(4-4eps)
  Q e0_l;  // 4eps/(4-4eps)
  long e0_const = 48;

  Q ffcond(long m, long n) const;
  Q tfirst(long m, long c, long q1big, long k) const;
  Q initial_d(long u) const;
  Q e0(long m, long ell, long qmatch, long n) const;
  long r0(long m, long ell, long qmatch, long n) const;

  Q q_plus_max(const Q& beta) const;   // (18 - 2eps - beta)/3
  Q large_minus_max(const Q& beta) const;  // (18 - 2eps - beta)/2
};

ConstantTable derive_constants(const Config& cfg);
ConstantTable derive_constants_eps(const Q& eps);

// Smallest m for which the empty-bin margin of the fill-up phase is proven;
// only the eps = 1/31 closed form is available.
std::optional<long> validate_m_threshold(const Q& eps);
bool m_threshold_inequality(const Q& eps, long m);

}  // namespace bst
