#pragma once

#include <string>
#include <vector>

#include "bstretch/rational.hpp"

namespace bst {

enum class Relation { Le, Ge, Eq };

struct LinearConstraint {
  std::string name;
  std::vector<Q> coef;  // one per variable
  Relation rel = Relation::Le;
  Q rhs;
};

struct LinearProgram {
  std::string name;
  std::vector<std::string> vars;
  std::vector<bool> nonneg;
  std::vector<LinearConstraint> rows;
  bool has_objective = false;
  bool maximize = true;
  std::vector<Q> objective;  // ignored by the feasibility check

  int var_index(const std::string& v) const;  // -1 if absent
  int add_var(const std::string& v, bool nonnegative = true);
  std::string to_text() const;
};

// Text format: "var x >= 0;" declarations, optional "maximize/minimize obj: ...;",
// optional "subject to", and "name: expr (<=|>=|=) expr;" rows.  Comments are
// /* ... */.  Variables that are used without a declaration are nonnegative.
// Expressions may contain + - * / and parentheses as long as every product has
// a constant side and every divisor is constant.
LinearProgram parse_lp(const std::string& text, const std::string& name = "");

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Q> point;    // when feasible
  std::vector<Q> farkas;   // when infeasible: one multiplier per row
  int pivots = 0;
};

// Farkas multipliers refer to each row written in "<=" orientation: a Ge row
// a.x >= b is used as -a.x <= -b, so every multiplier on an inequality is >= 0
// and multipliers on Eq rows are free.  A certificate is valid iff the combined
// coefficient is >= 0 on nonnegative variables and 0 on free ones while the
// combined right-hand side is negative.
bool verify_point(const LinearProgram& lp, const std::vector<Q>& x);
bool verify_farkas(const LinearProgram& lp, const std::vector<Q>& y);

// Exact phase-1 simplex with the smallest-index (Bland) rule.  The witness is
// verified before returning; a failed verification throws std::logic_error.
FeasibilityResult solve_feasibility(const LinearProgram& lp);

struct NamedLp {
  std::string name;
  std::string text;
  LinearProgram lp;
};

std::vector<NamedLp> paper_lps();

struct ProvenanceLine {
  std::string name;
  Q exact;
  Q literal;
  std::string relation;  // ">" or "=" (exact vs literal), "<" for the plain inequality
  bool holds = false;
};

// Ties every decimal coefficient of the fill-up LPs to the expression it
// rounds (at eps = 1/31), and checks that each literal appears in the LPs.
std::vector<ProvenanceLine> check_coefficient_provenance();

}  // namespace bst
