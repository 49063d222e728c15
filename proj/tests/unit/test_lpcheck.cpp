#include "doctest.h"

#include <functional>
#include <random>

#include "bstretch/lpcheck.hpp"

using namespace bst;

namespace {

// Feasibility by vertex enumeration; all variables nonnegative, so a
// nonempty region has a vertex.
bool feasible_by_vertices(const LinearProgram& lp) {
  int n = static_cast<int>(lp.vars.size());
  std::vector<std::vector<Q>> a;
  std::vector<Q> b;
  for (const auto& r : lp.rows) {
    a.push_back(r.coef);
    b.push_back(r.rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Q> e(n);
    e[j] = 1;
    a.push_back(e);
    b.push_back(0);
  }
  int total = static_cast<int>(a.size());
  std::vector<int> pick(n);
  std::function<bool(int, int)> rec = [&](int depth, int from) -> bool {
    if (depth == n) {
      std::vector<std::vector<Q>> mtx(n, std::vector<Q>(n + 1));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) mtx[i][j] = a[pick[i]][j];
        mtx[i][n] = b[pick[i]];
      }
      for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
          if (mtx[i][c] != 0) p = i;
        if (p < 0) return false;
        std::swap(mtx[c], mtx[p]);
        for (int i = 0; i < n; ++i) {
          if (i == c || mtx[i][c] == 0) continue;
          Q f = mtx[i][c] / mtx[c][c];
          for (int j = c; j <= n; ++j) mtx[i][j] -= f * mtx[c][j];
        }
      }
      std::vector<Q> x(n);
      for (int i = 0; i < n; ++i) x[i] = mtx[i][n] / mtx[i][i];
      return verify_point(lp, x);
    }
    for (int k = from; k < total; ++k) {
      pick[depth] = k;
      if (rec(depth + 1, k + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace

TEST_CASE("trivial programs") {
  auto f = solve_feasibility(parse_lp("var x >= 0; c: x <= 1;"));
  REQUIRE(f.feasible);
  CHECK(f.point[0] == 0);
  auto g = solve_feasibility(parse_lp("var x >= 0; a: x >= 1; b: x <= 0;"));
  REQUIRE_FALSE(g.feasible);
  CHECK(g.farkas == std::vector<Q>{1, 1});
}

TEST_CASE("parser") {
  auto lp = parse_lp("/* c */ var y; r: 2*(x - y)/4 + 1.5 >= -y*3; s: x = 2;");
  REQUIRE(lp.vars.size() == 2);
  CHECK(lp.vars[0] == "y");
  CHECK_FALSE(lp.nonneg[0]);
  CHECK(lp.nonneg[1]);
  CHECK(lp.rows[0].coef == std::vector<Q>{make_q(5, 2), make_q(1, 2)});
  CHECK(lp.rows[0].rhs == make_q(-3, 2));
  CHECK(lp.rows[1].rel == Relation::Eq);
  CHECK_THROWS(parse_lp("r: x*y <= 1;"));
  CHECK_THROWS(parse_lp("r: x / y <= 1;"));
  CHECK_THROWS(parse_lp("r: x + 1"));
  auto f = solve_feasibility(lp);
  REQUIRE(f.feasible);
  CHECK(f.point[1] == 2);
}

TEST_CASE("free variables") {
  auto f = solve_feasibility(parse_lp("var z; a: z <= -3; b: z >= -5;"));
  REQUIRE(f.feasible);
  CHECK(f.point[0] <= -3);
  auto g = solve_feasibility(parse_lp("var z; a: z <= -3; b: z >= -2;"));
  CHECK_FALSE(g.feasible);
}

TEST_CASE("the five fill-up programs are infeasible") {
  auto lps = paper_lps();
  REQUIRE(lps.size() == 5);
  CHECK(lps[0].name == "betasmall-A");
  CHECK(lps[0].lp.rows.size() == 6);
  CHECK(lps[0].lp.vars.size() == 7);
  CHECK(lps[0].lp.rows[0].coef[1] == make_q(14222, 10000));
  for (const auto& n : lps) {
    auto r = solve_feasibility(n.lp);
    CHECK_MESSAGE(!r.feasible, n.name);
    CHECK(verify_farkas(n.lp, r.farkas));
  }
}

TEST_CASE("stage4-low c5 right-hand side at e0 = 18/67") {
  auto lp = paper_lps()[4].lp;
  const auto& c5 = lp.rows[4];
  int e0 = lp.var_index("e0");
  // row reads (x-sum) - k*e0 >= const, so rhs(e0) = const + k*e0
  Q k = -c5.coef[e0];
  Q at = c5.rhs + k * make_q(18, 67);
  Q half = (9 - make_q(1, 31)) / 2;
  Q expect = (188 - 278 * make_q(18, 67) + 62 * half * (2 * make_q(18, 67) - 1)) / (82 - 31 * half);
  CHECK(at == expect);
  CHECK(expect == make_q(18, 67));
}

TEST_CASE("provenance") {
  auto lines = check_coefficient_provenance();
  CHECK(lines.size() == 8);
  for (const auto& l : lines) CHECK_MESSAGE(l.holds, l.name);
  CHECK(1 + (1 + 7 * make_q(1, 31)) / (3 - 3 * make_q(1, 31)) == make_q(128, 90));
}

TEST_CASE("random programs agree with vertex enumeration") {
  std::mt19937_64 rng(17);
  int feas = 0;
  for (int t = 0; t < 200; ++t) {
    LinearProgram lp;
    int n = 1 + static_cast<int>(rng() % 4);
    int m = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < n; ++j) lp.add_var("x" + std::to_string(j));
    for (int i = 0; i < m; ++i) {
      LinearConstraint r;
      r.name = "r" + std::to_string(i);
      for (int j = 0; j < n; ++j) r.coef.push_back(Q(static_cast<long>(rng() % 9) - 4));
      r.rel = static_cast<Relation>(rng() % 3);
      r.rhs = Q(static_cast<long>(rng() % 11) - 5);
      lp.rows.push_back(r);
    }
    auto res = solve_feasibility(lp);
    CHECK(res.feasible == feasible_by_vertices(lp));
    if (res.feasible) ++feas;
    else CHECK(verify_farkas(lp, res.farkas));
  }
  CHECK(feas > 20);
  CHECK(feas < 180);
}

TEST_CASE("text round trip") {
  for (const auto& n : paper_lps()) {
    auto again = parse_lp(n.lp.to_text());
    CHECK(again.vars == n.lp.vars);
    REQUIRE(again.rows.size() == n.lp.rows.size());
    for (std::size_t i = 0; i < again.rows.size(); ++i) {
      CHECK(again.rows[i].coef == n.lp.rows[i].coef);
      CHECK(again.rows[i].rhs == n.lp.rows[i].rhs);
    }
  }
}
