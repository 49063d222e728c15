#include "bstretch/lpcheck.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bstretch/constants.hpp"

namespace bst {

int LinearProgram::var_index(const std::string& v) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return static_cast<int>(i);
  return -1;
}

int LinearProgram::add_var(const std::string& v, bool nonnegative) {
  int i = var_index(v);
  if (i >= 0) return i;
  vars.push_back(v);
  nonneg.push_back(nonnegative);
  for (auto& r : rows) r.coef.resize(vars.size());
  if (has_objective) objective.resize(vars.size());
  return static_cast<int>(vars.size()) - 1;
}

namespace {

std::string affine_text(const std::vector<Q>& coef, const std::vector<std::string>& vars) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (coef[j] == 0) continue;
    Q a = coef[j];
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    Q abs_a = abs(a);
    if (abs_a != 1) os << "(" << to_string(abs_a) << ")*";
    os << vars[j];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::string LinearProgram::to_text() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < vars.size(); ++j)
    os << "var " << vars[j] << (nonneg[j] ? " >= 0" : "") << ";\n";
  if (has_objective)
    os << (maximize ? "maximize" : "minimize") << "\nobj: " << affine_text(objective, vars)
       << ";\nsubject to\n";
  for (const auto& r : rows) {
    os << r.name << ": " << affine_text(r.coef, vars) << " "
       << (r.rel == Relation::Le ? "<=" : r.rel == Relation::Ge ? ">=" : "=") << " "
       << to_string(r.rhs) << ";\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Affine {
  std::map<std::string, Q> terms;
  Q c;

  bool constant() const {
    for (const auto& [_, v] : terms)
      if (v != 0) return false;
    return true;
  }
  Affine& operator+=(const Affine& o) {
    for (const auto& [k, v] : o.terms) terms[k] += v;
    c += o.c;
    return *this;
  }
  Affine& scale(const Q& s) {
    for (auto& [_, v] : terms) v *= s;
    c *= s;
    return *this;
  }
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Affine parse() {
    Affine a = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return a;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("LP expression: " + what + " at '" + std::string(s_.substr(pos_)) +
                                "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Affine expr() {
    Affine a = term();
    for (;;) {
      if (eat('+')) a += term();
      else if (eat('-')) a += term().scale(-1);
      else return a;
    }
  }

  Affine term() {
    Affine a = factor();
    for (;;) {
      if (eat('*')) {
        Affine b = factor();
        if (a.constant()) a = b.scale(a.c);
        else if (b.constant()) a.scale(b.c);
        else fail("product of two non-constant terms");
      } else if (eat('/')) {
        Affine b = factor();
        if (!b.constant() || b.c == 0) fail("division by a non-constant or zero");
        a.scale(1 / b.c);
      } else {
        return a;
      }
    }
  }

  Affine factor() {
    skip();
    if (eat('-')) return factor().scale(-1);
    if (eat('+')) return factor();
    if (eat('(')) {
      Affine a = expr();
      if (!eat(')')) fail("missing ')'");
      return a;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      Affine a;
      a.c = parse_rational(s_.substr(start, pos_ - start));
      return a;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      Affine a;
      a.terms[std::string(s_.substr(start, pos_ - start))] = 1;
      return a;
    }
    fail("unexpected character");
  }
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool strip_keyword(std::string& s, const std::string& kw) {
  if (s.compare(0, kw.size(), kw) != 0) return false;
  if (s.size() > kw.size() && !std::isspace(static_cast<unsigned char>(s[kw.size()]))) return false;
  s = trim(std::string_view(s).substr(kw.size()));
  return true;
}

std::string strip_comments(const std::string& text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "/*") == 0) {
      auto end = text.find("*/", i + 2);
      if (end == std::string::npos) throw std::invalid_argument("LP text: unterminated comment");
      i = end + 2;
      out.push_back(' ');
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

void add_terms(LinearProgram& lp, std::vector<Q>& coef, const Affine& a, const Q& sign) {
  for (const auto& [v, x] : a.terms) {
    if (x == 0) continue;
    int j = lp.add_var(v);
    coef.resize(lp.vars.size());
    coef[j] += sign * x;
  }
}

}  // namespace

LinearProgram parse_lp(const std::string& text, const std::string& name) {
  LinearProgram lp;
  lp.name = name;
  std::string body = strip_comments(text);
  std::size_t start = 0;
  int row_no = 0;
  for (;;) {
    auto semi = body.find(';', start);
    if (semi == std::string::npos) {
      if (!trim(std::string_view(body).substr(start)).empty())
        throw std::invalid_argument("LP text: statement without ';'");
      break;
    }
    std::string st = trim(std::string_view(body).substr(start, semi - start));
    start = semi + 1;
    bool objective = false;
    for (bool again = true; again;) {
      again = false;
      if (strip_keyword(st, "subject to") || strip_keyword(st, "s.t.")) again = true;
      if (strip_keyword(st, "maximize")) objective = again = true, lp.maximize = true;
      if (strip_keyword(st, "minimize")) objective = again = true, lp.maximize = false;
    }
    if (st.empty()) continue;

    if (strip_keyword(st, "var")) {
      std::string v = st;
      bool nonneg = false;
      if (auto ge = st.find(">="); ge != std::string::npos) {
        v = trim(std::string_view(st).substr(0, ge));
        if (parse_rational(trim(std::string_view(st).substr(ge + 2))) != 0)
          throw std::invalid_argument("LP text: only 'var x >= 0' bounds are supported");
        nonneg = true;
      }
      if (lp.var_index(v) >= 0) throw std::invalid_argument("LP text: duplicate var " + v);
      lp.add_var(v, nonneg);
      continue;
    }

    std::string label;
    if (auto colon = st.find(':'); colon != std::string::npos) {
      label = trim(std::string_view(st).substr(0, colon));
      st = trim(std::string_view(st).substr(colon + 1));
    }
    if (objective) {
      Affine a = ExprParser(st).parse();
      lp.has_objective = true;
      lp.objective.assign(lp.vars.size(), Q(0));
      add_terms(lp, lp.objective, a, 1);
      continue;
    }

    Relation rel;
    std::size_t at, len = 2;
    if ((at = st.find("<=")) != std::string::npos) rel = Relation::Le;
    else if ((at = st.find(">=")) != std::string::npos) rel = Relation::Ge;
    else if ((at = st.find("==")) != std::string::npos) rel = Relation::Eq;
    else if ((at = st.find('=')) != std::string::npos) rel = Relation::Eq, len = 1;
    else throw std::invalid_argument("LP text: no relation in '" + st + "'");

    Affine lhs = ExprParser(std::string_view(st).substr(0, at)).parse();
    Affine rhs = ExprParser(std::string_view(st).substr(at + len)).parse();
    LinearConstraint row;
    row.name = label.empty() ? "r" + std::to_string(row_no + 1) : label;
    row.rel = rel;
    row.coef.assign(lp.vars.size(), Q(0));
    add_terms(lp, row.coef, lhs, 1);
    add_terms(lp, row.coef, rhs, -1);
    row.rhs = rhs.c - lhs.c;
    row.coef.resize(lp.vars.size());
    lp.rows.push_back(std::move(row));
    ++row_no;
  }
  for (auto& r : lp.rows) r.coef.resize(lp.vars.size());
  if (lp.has_objective) lp.objective.resize(lp.vars.size());
  return lp;
}

// ---------------------------------------------------------------------------
// Witness checks

bool verify_point(const LinearProgram& lp, const std::vector<Q>& x) {
  if (x.size() != lp.vars.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (lp.nonneg[j] && x[j] < 0) return false;
  for (const auto& r : lp.rows) {
    Q lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += r.coef[j] * x[j];
    if (r.rel == Relation::Le && lhs > r.rhs) return false;
    if (r.rel == Relation::Ge && lhs < r.rhs) return false;
    if (r.rel == Relation::Eq && lhs != r.rhs) return false;
  }
  return true;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<Q>& y) {
  if (y.size() != lp.rows.size()) return false;
  std::vector<Q> comb(lp.vars.size());
  Q rhs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto& r = lp.rows[i];
    if (r.rel != Relation::Eq && y[i] < 0) return false;
    Q s = r.rel == Relation::Ge ? Q(-y[i]) : y[i];
    for (std::size_t j = 0; j < comb.size(); ++j) comb[j] += s * r.coef[j];
    rhs += s * r.rhs;
  }
  for (std::size_t j = 0; j < comb.size(); ++j) {
    if (lp.nonneg[j] ? comb[j] < 0 : comb[j] != 0) return false;
  }
  return rhs < 0;
}

// ---------------------------------------------------------------------------
// Phase-1 simplex

FeasibilityResult solve_feasibility(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.rows.size());
  const int nv = static_cast<int>(lp.vars.size());

  // Structural columns: x_j (or x_j^+ and x_j^- when free), then one slack per
  // inequality row, then artificials for rows whose slack cannot start basic.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int ncol = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = ncol++;
    if (!lp.nonneg[j]) neg_col[j] = ncol++;
  }
  std::vector<int> slack_col(m, -1);
  std::vector<int> sign(m, 1);
  for (int i = 0; i < m; ++i) {
    if (lp.rows[i].rel != Relation::Eq) slack_col[i] = ncol++;
    if (lp.rows[i].rhs < 0) sign[i] = -1;
  }
  std::vector<int> basic_col(m, -1);  // initial identity column of each row
  for (int i = 0; i < m; ++i) {
    if (slack_col[i] < 0) continue;
    int slack_sign = lp.rows[i].rel == Relation::Le ? 1 : -1;
    if (slack_sign * sign[i] == 1) basic_col[i] = slack_col[i];
  }
  std::vector<bool> artificial;
  artificial.assign(ncol, false);
  for (int i = 0; i < m; ++i) {
    if (basic_col[i] < 0) {
      basic_col[i] = ncol++;
      artificial.push_back(true);
    }
  }
  std::vector<Q> cost(ncol);
  for (int c = 0; c < ncol; ++c) cost[c] = artificial[c] ? 1 : 0;

  // Tableau rows, last entry is the right-hand side.
  std::vector<std::vector<Q>> t(m, std::vector<Q>(ncol + 1));
  for (int i = 0; i < m; ++i) {
    const auto& r = lp.rows[i];
    for (int j = 0; j < nv; ++j) {
      t[i][pos_col[j]] = sign[i] * r.coef[j];
      if (neg_col[j] >= 0) t[i][neg_col[j]] = -sign[i] * r.coef[j];
    }
    if (slack_col[i] >= 0) t[i][slack_col[i]] = sign[i] * (r.rel == Relation::Le ? 1 : -1);
    t[i][basic_col[i]] = 1;
    t[i][ncol] = sign[i] * r.rhs;
  }
  std::vector<int> basis = basic_col;
  std::vector<Q> red(ncol + 1);
  for (int c = 0; c <= ncol; ++c) red[c] = c < ncol ? cost[c] : Q(0);
  for (int i = 0; i < m; ++i) {
    if (!artificial[basis[i]]) continue;
    for (int c = 0; c <= ncol; ++c) red[c] -= t[i][c];
  }

  FeasibilityResult res;
  for (;;) {
    int enter = -1;
    for (int c = 0; c < ncol; ++c) {
      if (red[c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    Q best;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Q ratio = t[i][ncol] / t[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) throw std::logic_error("phase-1 simplex: unbounded direction");
    Q piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Q f = t[i][enter];
      for (int c = 0; c <= ncol; ++c) t[i][c] -= f * t[leave][c];
    }
    Q f = red[enter];
    for (int c = 0; c <= ncol; ++c) red[c] -= f * t[leave][c];
    basis[leave] = enter;
    ++res.pivots;
  }

  Q infeas = -red[ncol];
  if (infeas == 0) {
    std::vector<Q> col(ncol, Q(0));
    for (int i = 0; i < m; ++i) col[basis[i]] = t[i][ncol];
    res.feasible = true;
    res.point.resize(nv);
    for (int j = 0; j < nv; ++j) {
      res.point[j] = col[pos_col[j]];
      if (neg_col[j] >= 0) res.point[j] -= col[neg_col[j]];
    }
    if (!verify_point(lp, res.point))
      throw std::logic_error("phase-1 simplex: point failed verification");
    return res;
  }

  // Simplex multipliers of the sign-normalized rows, read off the initial
  // identity columns; their negation is a Farkas vector.
  res.farkas.resize(m);
  Q combined_rhs = 0;
  for (int i = 0; i < m; ++i) {
    Q pi = cost[basic_col[i]] - red[basic_col[i]];
    Q u = -pi * sign[i];  // multiplier on the row as written
    res.farkas[i] = lp.rows[i].rel == Relation::Ge ? Q(-u) : u;
    combined_rhs += u * lp.rows[i].rhs;
  }
  if (combined_rhs < 0)
    for (auto& y : res.farkas) y /= -combined_rhs;
  if (!verify_farkas(lp, res.farkas))
    throw std::logic_error("phase-1 simplex: Farkas vector failed verification");
  return res;
}

// ---------------------------------------------------------------------------
// The stored programs

namespace {

const char* kBetaSmallA = R"(var e0 >= 0;
var x1 >= 0;
var x2 >= 0;
var x3 >= 0;
var x4 >= 0;
var y1 >= 0;
var y5 >= 0;
maximize
obj: e0;
subject to
/* nonempty bins packed early */
c1: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 +2*y1 <= 1-e0;
/* large items packed */
c2: 1.4222*x1 + x2 + 3*x3 + 4*y1 + 3*y5 <= 1;
/* number of bins packed total */
c3: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 3*y1 + 2*y5 + 4*(e0-y1-y5) <= 1;
/* to ensure that (90-278*e0)/57 > e0 */
c4: e0 <= 18/67;
/* number of used bins with low level */
c5: x1 + x2 + x3 + x4 >= (90-278*e0)/57;
/* pairs of large items in empty bins */
c6: y1 + y5 <= e0;
)";

const char* kBetaSmallB = R"(c1: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 2*y1 <= 1-e0;
c2: 1.4222*x1 + x2 + 3*x3 + 4*y1 + 3*y5 <= 1;
c3: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 3*y1 + 2*y5 + 4*(e0-y1-y5) <= 1;
c4: e0 >= 18/67;
c5: x1 + x2 + x3 + x4 >= e0;
c6: y1 + y5 <= e0;
)";

const char* kStage5 = R"(c1: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + y1 <= 1-e0;
c2: 1.4222*x1 + x2 + 3*x3 + 3*y1 + 3*y5 <= 1;
c3: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 2*y1 + 2*y5 + 4*(e0-y1-y5) <= 1;
c4: e0 >= 18/67;
c5: x1 + x2 + x3 + x4 >= e0;
c6: y1 + y5 <= e0;
)";

const char* kStage4High = R"(c1: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 1.088*y1 <= 1-e0;
c2: 1.4222*x1 + x2 + 3*x3 + 3.088*y1 <= 1;
c3: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 2.088*y1 + 9.17*(e0-y1) <= 1;
c4: e0 >= 18/67;
c5: x1 + x2 + x3 + x4 >= (188-278*e0+62*5.2*(2*e0-1))/(82-31*5.2);
c6: y1 <= e0;
)";

const char* kStage4Low = R"(c1: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 1.449*y1 <= 1-e0;
c2: 1.4222*x1 + x2 + 3*x3 + 3.449*y1 <= 1;
c3: 1.4222*x1 + 2.357*x2 + 2*x3 + 4*x4 + 2.449*y1 + 17.78*(e0-y1) <= 1;
c4: e0 >= 18/67;
c5: x1 + x2 + x3 + x4 >=
    (188-278*e0+62*(9-1/31)/2*(2*e0-1))/(82-31*(9-1/31)/2);
c6: y1 <= e0;
)";

}  // namespace

std::vector<NamedLp> paper_lps() {
  std::vector<NamedLp> out;
  for (auto [name, text] : {std::pair{"betasmall-A", kBetaSmallA}, {"betasmall-B", kBetaSmallB},
                            {"stage5", kStage5}, {"stage4-high", kStage4High},
                            {"stage4-low", kStage4Low}}) {
    out.push_back({name, text, parse_lp(text, name)});
  }
  return out;
}

std::vector<ProvenanceLine> check_coefficient_provenance() {
  const Q eps = make_q(1, 31);
  const Q slot = 6 - 6 * eps;
  const Q nine = 9 - eps;
  const Q five_two = make_q(52, 10);
  std::string all_text;
  for (const auto& lp : paper_lps()) all_text += lp.text;

  std::vector<ProvenanceLine> out;
  auto above = [&](std::string name, Q exact, const std::string& literal) {
    ProvenanceLine l{std::move(name), std::move(exact), parse_rational(literal), ">", false};
    l.holds = l.exact > l.literal && all_text.find(literal) != std::string::npos;
    out.push_back(std::move(l));
  };
  above("x1 coefficient 1+(1+7eps)/(3-3eps)", 1 + (1 + 7 * eps) / (3 - 3 * eps), "1.4222");
  above("x2 coefficient 1+(1+7eps)/(1-3eps)", 1 + (1 + 7 * eps) / (1 - 3 * eps), "2.357");
  above("large+ ratio at beta = 6-6eps", (18 - 2 * eps) / slot - 2, "1.088");
  above("large+ ratio at beta = 5.2", (18 - 2 * eps) / five_two - 2, "1.449");
  above("quarter++ group at beta = 6-6eps", (45 - 4 * slot - 5 * eps) / (2 * slot - nine) + 1,
        "9.17");
  above("quarter++ group at beta = 5.2",
        (45 - 4 * five_two - 5 * eps) / (2 * five_two - nine) + 1, "17.78");

  ProvenanceLine key{"empty-bin fraction 30/139 < 13/60", make_q(30, 139), make_q(13, 60), "<",
                     false};
  key.holds = key.exact < key.literal;
  out.push_back(std::move(key));

  ProvenanceLine half{"(9-eps)/2 = 278/62", nine / 2, make_q(278, 62), "=", false};
  half.holds = half.exact == half.literal;
  out.push_back(std::move(half));
  return out;
}

}  // namespace bst
