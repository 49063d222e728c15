#include "bstretch/rational.hpp"

#include <stdexcept>

namespace bst {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

mpz_class parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("bad integer: " + std::string(s));
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace

Q parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    mpz_class num = parse_int(text.substr(0, slash));
    mpz_class den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    Q r(num, den);
    r.canonicalize();
    return r;
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Q(parse_int(text));
  std::string_view ip = text.substr(0, dot);
  std::string_view fp = text.substr(dot + 1);
  bool neg = !ip.empty() && ip[0] == '-';
  if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.remove_prefix(1);
  if (ip.empty()) ip = "0";
  if (fp.empty() || !all_digits(fp) || !all_digits(ip))
    throw std::invalid_argument("bad decimal: " + std::string(text));
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
  mpz_class num = parse_int(ip) * scale + parse_int(fp);
  Q r(neg ? mpz_class(-num) : num, scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Q& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_decimal(const Q& x, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Q scaled = abs(x) * scale + Q(1, 2);
  mpz_class v = floor_q(scaled);
  std::string s = v.get_str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (x < 0 && v != 0) out = "-" + out;
  return out;
}

Q make_q(long num, long den) {
  Q r(num, den);
  r.canonicalize();
  return r;
}

mpz_class floor_q(const Q& x) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const Q& x) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

long floor_long(const Q& x) { return floor_q(x).get_si(); }
long ceil_long(const Q& x) { return ceil_q(x).get_si(); }

}  // namespace bst
