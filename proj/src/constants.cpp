#include "bstretch/constants.hpp"

#include <stdexcept>

namespace bst {

bool Config::guaranteed() const {
  return (eps == make_q(1, 31) && m >= 60000) || (eps == make_q(1, 62) && m >= 3300);
}

std::string Config::validity() const { return guaranteed() ? "guaranteed" : "experimental"; }

void validate_config(const Config& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("m must be positive");
  if (cfg.eps <= 0 || cfg.eps >= make_q(1, 5))
    throw std::invalid_argument("eps must satisfy 0 < eps < 1/5");
}

ConstantTable derive_constants_eps(const Q& e) {
  if (e < 0 || e >= make_q(1, 5)) throw std::invalid_argument("eps must satisfy 0 <= eps < 1/5");
  ConstantTable t;
  t.eps = e;
  t.offline_capacity = 12;
  t.online_capacity = 18 - 2 * e;
  t.small_max_1 = 3 - 3 * e;
  t.quarter_max = 4 - 4 * e;
  t.small_max_2 = 5 + e;
  t.nice_max = 6 - 2 * e;
  t.half_max = 6 + 2 * e;
  t.large_max = 9 - e;
  t.big_max = 10 + 6 * e;
  t.top_max = 12;
  t.smallslot = 6 - 6 * e;

  t.f_small1_max = (10 + 6 * e) / 3;
  t.f_quarter_max = 4 + e;
  t.f_qpp_max = (9 - e) / 2;
  t.f_small2_max = 5 + 3 * e;
  t.f_easy_max = 6 + 2 * e;
  t.f_large_max = 9 - e;
  t.f_big_max = 10 + 6 * e;
  t.f_top_max = 12;

  t.top_block = 6 - 2 * e;
  t.big_block = 8 - 8 * e;
  t.large_block = 9 - e;

  t.x_ell_limit = 12 + 4 * e;
  t.n_min = 15 + 3 * e;
  t.match_min = 3 * (13 - 5 * e);
  t.swap_min = 14 + 2 * e;
  t.f_avg_target = 13 - 3 * e;
  t.rule1_quota = 9 - e;
  t.rule3_quota = 10 + 6 * e;
  t.q15_credit = 1 + 7 * e;

  t.ff_alpha = 1 - 3 * e;
  const Q& a = t.ff_alpha;
  t.ff_m_coef = (3 + e) / (3 + e + a);
  t.ff_n_coef = (3 + 3 * e - a) / (3 + e);
  t.ff_const = Q(24) / a + 2 * (4 + 8 * e) / a + t.ff_mid_constant;

  t.tfirst_slope = 3 + e;
  t.tfirst_per_bin = 9 - e;

  t.d_u_coef = (1 + 7 * e) / (10 + 6 * e);
  t.d_const_coef = (9 - e) / (10 + 6 * e);

  t.e0_a = (1 - 5 * e) / (4 - 4 * e);
  t.e0_n = (2 + 8 * e) / (4 - 4 * e);
  t.e0_l = 4 * e / (4 - 4 * e);
  return t;
}

ConstantTable derive_constants(const Config& cfg) {
  validate_config(cfg);
  return derive_constants_eps(cfg.eps);
}

Q ConstantTable::ffcond(long m, long n) const { return ff_m_coef * m - ff_n_coef * n + ff_const; }

Q ConstantTable::tfirst(long m, long c, long q1big, long k) const {
  return tfirst_slope * m + tfirst_per_bin * (c + q1big + k);
}

Q ConstantTable::initial_d(long u) const { return d_u_coef * u + d_const_coef * tfirst_k; }

Q ConstantTable::e0(long m, long ell, long qmatch, long n) const {
  long mt = m - ell - qmatch;
  return e0_a * mt + e0_n * n + e0_a * qmatch + e0_l * ell - e0_const;
}

long ConstantTable::r0(long m, long ell, long qmatch, long n) const {
  long mt = m - ell - qmatch;
  return floor_long(Q(mt) - e0(m, ell, qmatch, n));
}

Q ConstantTable::q_plus_max(const Q& beta) const { return (online_capacity - beta) / 3; }

Q ConstantTable::large_minus_max(const Q& beta) const { return (online_capacity - beta) / 2; }

bool m_threshold_inequality(const Q& eps, long m) {
  ConstantTable t = derive_constants_eps(eps);
  // (1-5eps)/(4-4eps) m - (4-4eps)/(18-2eps) m >= 49 with qmatch = l = 0
  Q coef = t.e0_a - t.quarter_max / t.online_capacity;
  return coef * m >= 49;
}

std::optional<long> validate_m_threshold(const Q& eps) {
  if (eps != make_q(1, 31)) return std::nullopt;
  ConstantTable t = derive_constants_eps(eps);
  Q coef = t.e0_a - t.quarter_max / t.online_capacity;
  return ceil_long(Q(49) / coef);
}

}  // namespace bst
