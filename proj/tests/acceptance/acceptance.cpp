// Acceptance checks A1-A10.  One PASS/FAIL line per criterion on stdout,
// details on stderr.
//
//   acceptance [--only A1,A5] [--expect-fail A2,A3]
//
// Exit status is 0 iff every selected criterion matches its expectation:
// PASS normally, FAIL for the ids given to --expect-fail.  An expected failure
// that starts passing is reported as a mismatch too.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bstretch/engine.hpp"
#include "bstretch/fitpack.hpp"
#include "bstretch/lpcheck.hpp"
#include "bstretch/threats.hpp"

using namespace bst;

namespace {

struct Result {
  bool pass = false;
  std::string summary;
};

std::set<std::string> split_ids(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) out.insert(id);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Reports shared by A1 to A4.
struct RunSet {
  struct Entry {
    std::string label;
    RunReport report;
  };
  std::vector<Entry> runs;
  bool a1_done = false, a2_done = false;
};

RunSet runs;

// Runs the jobs on all hardware threads; results keep the job order.
std::vector<RunReport> run_parallel(const std::vector<std::function<Instance()>>& jobs) {
  std::vector<RunReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) out[i] = run_instance(jobs[i]());
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

Result a1() {
  auto t0 = std::chrono::steady_clock::now();
  const auto profiles = mixed_profiles();
  struct Job {
    std::string label;
    Q eps;
  };
  std::vector<Job> meta;
  std::vector<std::function<Instance()>> jobs;
  // the long runs first
  for (int i = 0; i < 10; ++i) {
    const auto prof = profiles[i % profiles.size()];
    Order ord = kAllOrders[i % 4];
    meta.push_back({"m=60000 seed=" + std::to_string(1 + i) + " " + prof + "/" + name(ord), make_q(1, 31)});
    jobs.push_back([=] { return gen_random_feasible({60000, make_q(1, 31)}, 1 + i, prof, ord); });
  }
  for (int i = 0; i < 200; ++i) {
    const auto prof = profiles[i % profiles.size()];
    Order ord = kAllOrders[(i / profiles.size()) % 4];
    meta.push_back({"m=3300 seed=" + std::to_string(1 + i) + " " + prof + "/" + name(ord), make_q(1, 62)});
    jobs.push_back([=] { return gen_random_feasible({3300, make_q(1, 62)}, 1 + i, prof, ord); });
  }
  auto reports = run_parallel(jobs);

  int bad = 0;
  Q worst62, worst31;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const RunReport& r = reports[i];
    const Q& eps = meta[i].eps;
    if (!r.all_packed || r.max_load > Q(18) - 2 * eps) {
      ++bad;
      std::cerr << "A1 " << meta[i].label << ": " << (r.all_packed ? "load above 18-2eps" : r.failure) << "\n";
    }
    Q& worst = eps == make_q(1, 31) ? worst31 : worst62;
    if (r.factor > worst) worst = r.factor;
    runs.runs.push_back({meta[i].label, r});
  }
  runs.a1_done = true;
  std::ostringstream os;
  os << reports.size() << " runs, " << bad << " failed; max factor " << worst62 << " (bound 557/372) at eps=1/62, "
     << worst31 << " (bound 139/93) at eps=1/31; " << seconds_since(t0) << " s";
  return {bad == 0 && reports.size() == 210 && worst62 <= make_q(557, 372) && worst31 <= make_q(139, 93), os.str()};
}

Result a2() {
  int bad = 0;
  std::ostringstream os;
  for (auto p : kAllPatterns) {
    auto r = run_instance(gen_pattern({3300, make_q(1, 62)}, {p, 1}));
    runs.runs.push_back({std::string("pattern ") + name(p), r});
    if (!r.ok()) {
      ++bad;
      os << " " << name(p) << "(" << (r.all_packed ? "AllPacked" : "Failure") << ", " << r.audit.violations
         << " violations)";
    }
  }
  runs.a2_done = true;
  return {bad == 0, std::to_string(std::size(kAllPatterns)) + " patterns, " + std::to_string(bad) + " not clean" +
                        os.str()};
}

void ensure_runs() {
  if (!runs.a1_done) a1();
  if (!runs.a2_done) a2();
}

bool is_certificate(const std::string& key) { return key.rfind("certificate:", 0) == 0; }

Result a3() {
  ensure_runs();
  std::map<std::string, long> kinds;
  std::map<std::string, long> runs_with;
  long audited = 0, dirty = 0, stage6 = 0, max_x = 0, max_h = 0;
  for (const auto& e : runs.runs) {
    const auto& a = e.report.audit;
    audited += a.audited_events;
    max_x = std::max(max_x, a.max_x);
    max_h = std::max(max_h, a.max_half_full);
    bool any = false;
    for (const auto& [k, n] : a.by_check) {
      if (is_certificate(k)) continue;
      kinds[k] += n;
      ++runs_with[k];
      any = true;
    }
    if (e.report.stage >= 6) ++stage6;
    if (any) {
      ++dirty;
      std::cerr << "A3 " << e.label << ":";
      for (const auto& [k, n] : a.by_check)
        if (!is_certificate(k)) std::cerr << " [" << k << "] x" << n;
      std::cerr << "\n";
    }
  }
  long total = 0;
  for (const auto& [k, n] : kinds) total += n;
  std::ostringstream os;
  os << runs.runs.size() << " runs, " << audited << " audited events, " << total << " violations in " << dirty
     << " runs; max |X| " << max_x << ", max h " << max_h << ", stage 6 in " << stage6 << " runs";
  for (const auto& [k, n] : kinds) os << "; " << k << ": " << n << " in " << runs_with[k] << " runs";
  return {total == 0 && stage6 == 0, os.str()};
}

Result a4() {
  ensure_runs();
  long checks = 0, na = 0, failed = 0;
  for (const auto& e : runs.runs) {
    checks += e.report.audit.certificate_checks;
    na += e.report.audit.certificate_not_applicable;
    for (const auto& [k, n] : e.report.audit.by_check)
      if (is_certificate(k)) {
        failed += n;
        std::cerr << "A4 " << e.label << ": " << k << " x" << n << "\n";
      }
  }
  // forged: a justQ2 bin with too few Q1 bins to draw weight from
  const auto t = derive_constants({100, make_q(1, 31)});
  int forged_ok = 0;
  for (int nq1 : {5, 7, 9}) {
    State s(20, t);
    long k = 0;
    for (int i = 0; i < nq1; ++i) s.place(*s.fresh_bin(), Item{k++, Q(3)});
    int b = *s.fresh_bin();
    s.place(b, Item{k++, Q(3)});
    s.place(b, Item{k++, Q(3)});
    auto c = build_invariant1_certificate(s, true);
    if (c.applicable && !c.success) ++forged_ok;
  }
  State fresh(20, t);
  bool fresh_ok = build_invariant1_certificate(fresh, true).success;
  std::ostringstream os;
  os << checks << " certificate checks, " << failed << " failed, " << na
     << " not applicable (last resort into TopBlock); forged states rejected " << forged_ok
     << "/3; fresh state " << (fresh_ok ? "ok" : "rejected");
  return {failed == 0 && checks > 0 && forged_ok == 3 && fresh_ok, os.str()};
}

Result a5() {
  std::mt19937_64 rng(2024);
  auto profiles = profile_names();
  long bad = 0, made = 0;
  for (int i = 0; i < 1000; ++i) {
    long m = 1 + static_cast<long>(rng() % 3300);
    Config cfg{m, (i % 2) ? make_q(1, 62) : make_q(1, 31)};
    Instance inst;
    if (i % 10 == 9) {
      try {
        inst = gen_pattern(cfg, {kAllPatterns[(i / 10) % std::size(kAllPatterns)], rng()});
      } catch (const InfeasiblePattern&) {
        inst = gen_random_feasible(cfg, rng(), "mixed");
      }
    } else {
      inst = gen_random_feasible(cfg, rng(), profiles[i % profiles.size()], kAllOrders[i % 4]);
    }
    ++made;
    const auto t = derive_constants(cfg);
    for (auto s : {WeightScheme::WTop, WeightScheme::WBig, WeightScheme::WLarge}) {
      long w = 0;
      for (const auto& it : inst.items) w += weight(it.size, s, t);
      if (w > 4 * m) {
        ++bad;
        std::cerr << "A5 m=" << m << " " << inst.generator << " " << name(s) << ": " << w << " > " << 4 * m << "\n";
      }
    }
  }
  return {bad == 0 && made == 1000, std::to_string(made) + " instances, " + std::to_string(bad) + " weight sums above 4m"};
}

Result a6() {
  auto t0 = std::chrono::steady_clock::now();
  const auto t = derive_constants({100, make_q(1, 31)});
  std::mt19937_64 rng(6);
  const ThreatKind kinds[] = {ThreatKind::Top, ThreatKind::Big, ThreatKind::Large};
  // sizes near the type boundaries are drawn often
  std::vector<Q> edges;
  for (int ty = 0; ty < 8; ++ty) {
    edges.push_back(type_maximum(static_cast<StartingType>(ty), t));
    edges.push_back(type_infimum(static_cast<StartingType>(ty), t) + make_q(1, 248));
  }
  long above = 0, order = 0, mono = 0, states = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int m = 1 + static_cast<int>(rng() % 6);
    int n = static_cast<int>(rng() % 13);
    std::vector<Q> room(m, Q(12));
    std::vector<Q> items;
    for (int i = 0; i < n; ++i) {
      Q x = rng() % 3 == 0 ? edges[rng() % edges.size()] : make_q(1 + static_cast<long>(rng() % 372), 31);
      int b = static_cast<int>(rng() % m);
      if (x <= room[b]) {
        room[b] -= x;
        items.push_back(x);
      }
    }
    std::shuffle(items.begin(), items.end(), rng);
    ++states;
    std::vector<long> prev(3, m);
    for (std::size_t len = 0; len <= items.size(); ++len) {
      std::vector<Q> part(items.begin(), items.begin() + len);
      std::vector<long> o(3);
      for (int k = 0; k < 3; ++k) {
        o[k] = exact_threat_oracle(part, m, kinds[k], t);
        if (o[k] > weight_bound(part, m, kinds[k], t)) ++above;
        if (o[k] > prev[k]) ++mono;
      }
      if (!(o[0] <= o[1] && o[1] <= o[2])) ++order;
      prev = o;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << states << " states; above weight bound " << above << ", ordering " << order << ", monotonicity " << mono
     << "; " << secs << " s";
  return {above == 0 && order == 0 && mono == 0 && secs < 30, os.str()};
}

Result a7() {
  std::mt19937_64 rng(7);
  long varbin_checked = 0, varbin_pre = 0, varbin_bad = 0, replay_bad = 0;
  for (int run_no = 0; run_no < 10000; ++run_no) {
    int v = 3 + static_cast<int>(rng() % 48);
    int k = 1 + static_cast<int>(rng() % 3);
    if (2 * k >= v) k = 1;
    FirstFitRun run;
    int added = 0, short_slots = 0;
    auto add = [&] {
      run.add_slot(make_q(600 + static_cast<long>(rng() % 1201), 100));
      ++added;
      ++short_slots;
    };
    add();
    long id = 0;
    for (int guard = 0; guard < 100000; ++guard) {
      if (added < v && rng() % 4 == 0) add();
      if (added == v && short_slots == 0) break;
      Q size = make_q(1 + static_cast<long>(rng() % (600 / k)), 100);
      auto at = run.pack({id++, size});
      if (!at) {
        if (added == v) break;
        add();
      } else if (static_cast<int>(run.trace().slots[*at].packed.size()) == k) {
        --short_slots;
      }
    }
    if (!replay_first_fit(run.trace())) ++replay_bad;
    auto r = check_varbin_bound(run.trace(), k);
    if (r.status == BoundStatus::PreconditionFailed) {
      ++varbin_pre;
      continue;
    }
    ++varbin_checked;
    if (r.status != BoundStatus::Pass) {
      ++varbin_bad;
      std::cerr << "A7 varbin run " << run_no << ": " << r.detail << "\n";
    }
  }

  long ff11_checked = 0, ff11_pre = 0, ff11_bad = 0;
  for (const Q& eps : {make_q(1, 31), make_q(1, 62)}) {
    const Q bin = Q(18) - 2 * eps;
    for (int run_no = 0; run_no < 5000; ++run_no) {
      Q p = make_q(static_cast<long>(rng() % 700), 100);
      int v = 2 + static_cast<int>(rng() % 30);
      FirstFitRun run;
      std::vector<Q> pre;
      for (int i = 0; i < v; ++i) {
        Q pf = p + make_q(static_cast<long>(rng() % 500), 100);
        pre.push_back(pf);
        run.add_slot(bin - pf);
      }
      long id = 0;
      for (int guard = 0; guard < 10000; ++guard) {
        bool done = true;
        for (const auto& s : run.trace().slots)
          if (s.packed.empty()) done = false;
        if (done) break;
        run.pack({id++, make_q(1 + static_cast<long>(rng() % 1200), 100)});
      }
      if (!replay_first_fit(run.trace())) ++replay_bad;
      auto r = check_ff11_bound(run.trace(), pre, p, bin);
      if (r.status == BoundStatus::PreconditionFailed) {
        ++ff11_pre;
        continue;
      }
      ++ff11_checked;
      if (r.status != BoundStatus::Pass) {
        ++ff11_bad;
        std::cerr << "A7 prefilled run " << run_no << ": " << r.detail << "\n";
      }
    }
  }
  std::ostringstream os;
  os << "variable slots: " << varbin_checked << " checked, " << varbin_pre << " skipped (precondition), "
     << varbin_bad << " violated; prefilled bins: " << ff11_checked << " checked, " << ff11_pre << " skipped, "
     << ff11_bad << " violated; replay mismatches " << replay_bad;
  return {varbin_bad == 0 && ff11_bad == 0 && replay_bad == 0 && varbin_checked + varbin_pre == 10000 &&
              varbin_checked >= 5000 && ff11_checked >= 5000,
          os.str()};
}

Result a8() {
  auto t0 = std::chrono::steady_clock::now();
  int infeasible = 0, certified = 0, total = 0;
  for (const auto& named : paper_lps()) {
    ++total;
    auto r = solve_feasibility(named.lp);
    if (!r.feasible) {
      ++infeasible;
      if (verify_farkas(named.lp, r.farkas)) ++certified;
    } else {
      std::cerr << "A8 " << named.name << " is feasible\n";
    }
  }
  int lines = 0, holds = 0;
  bool footnote = false;
  for (const auto& p : check_coefficient_provenance()) {
    ++lines;
    if (p.holds) ++holds;
    else std::cerr << "A8 provenance " << p.name << " fails\n";
    if (p.exact == make_q(30, 139) && p.literal == make_q(13, 60) && p.relation == "<" && p.holds) footnote = true;
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << infeasible << "/" << total << " infeasible, " << certified << " Farkas certificates verified; provenance "
     << holds << "/" << lines << " (30/139 < 13/60 " << (footnote ? "ok" : "missing") << "); " << secs << " s";
  return {total == 5 && infeasible == 5 && certified == 5 && holds == lines && lines > 0 && footnote && secs < 5,
          os.str()};
}

Result a9() {
  int failed = 0;
  std::ostringstream os;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) {
      ++failed;
      std::cerr << "A9 " << what << "\n";
    }
  };
  auto thr = validate_m_threshold(make_q(1, 31));
  expect(thr && *thr == 58380, "threshold at eps = 1/31");
  expect(m_threshold_inequality(make_q(1, 31), 58380), "inequality at 58380");
  expect(!m_threshold_inequality(make_q(1, 31), 58379), "inequality at 58379");
  int checked = 0;
  for (const Q& e : {make_q(1, 31), make_q(1, 62), make_q(1, 100), make_q(1, 1000)}) {
    const auto t = derive_constants_eps(e);
    const std::string at = " at eps=" + to_string(e);
    const std::pair<Q, Q> id[] = {
        {t.offline_capacity, Q(12)},
        {t.online_capacity, 18 - 2 * e},
        {t.online_capacity / 12, Q(3, 2) - e / 6},
        {t.small_max_1, 3 - 3 * e},
        {t.quarter_max, 4 - 4 * e},
        {t.small_max_2, 5 + e},
        {t.nice_max, 6 - 2 * e},
        {t.half_max, 6 + 2 * e},
        {t.large_max, 9 - e},
        {t.big_max, 10 + 6 * e},
        {t.top_max, Q(12)},
        {t.smallslot, 6 - 6 * e},
        {t.f_small1_max, (10 + 6 * e) / 3},
        {t.f_quarter_max, 4 + e},
        {t.f_qpp_max, (9 - e) / 2},
        {t.f_small2_max, 5 + 3 * e},
        {t.f_easy_max, 6 + 2 * e},
        {t.top_block, 6 - 2 * e},
        {t.big_block, 8 - 8 * e},
        {t.large_block, 9 - e},
        {t.x_ell_limit, 12 + 4 * e},
        {t.n_min, 15 + 3 * e},
        {t.match_min, 3 * (13 - 5 * e)},
        {t.swap_min, 14 + 2 * e},
        {t.f_avg_target, 13 - 3 * e},
        {t.rule1_quota, 9 - e},
        {t.rule3_quota, 10 + 6 * e},
        {t.q15_credit, 1 + 7 * e},
        {t.ff_alpha, 1 - 3 * e},
        {t.d_u_coef, (1 + 7 * e) / (10 + 6 * e)},
        {t.d_const_coef, (9 - e) / (10 + 6 * e)},
        {t.e0_a, (1 - 5 * e) / (4 - 4 * e)},
        {t.e0_n, (2 + 8 * e) / (4 - 4 * e)},
        {t.e0_l, 4 * e / (4 - 4 * e)},
        // thresholds read off the online bin
        {t.online_capacity - t.big_max, t.online_capacity - (10 + 6 * e)},
        {t.online_capacity - t.top_block, Q(12)},
        {t.online_capacity - t.big_block, 10 + 6 * e},
        {t.online_capacity - t.large_block, 9 - e},
        {t.smallslot + t.offline_capacity, 18 - 6 * e},
    };
    for (const auto& [got, want] : id) {
      ++checked;
      expect(got == want, "identity " + std::to_string(checked) + at + ": " + to_string(got) + " != " + to_string(want));
    }
  }
  os << "threshold " << (thr ? std::to_string(*thr) : std::string("none")) << ", " << checked
     << " identities over 4 eps values, " << failed << " failed";
  return {failed == 0, os.str()};
}

Result a10() {
  int cases = 0, mismatches = 0;
  auto same = [&](const std::string& a, const std::string& b, const std::string& what) {
    if (a != b) {
      ++mismatches;
      std::cerr << "A10 " << what << " differs\n";
    }
  };
  struct Case {
    Config cfg;
    std::uint64_t seed;
    const char* profile;
    Order order;
  };
  const Case list[] = {{{3300, make_q(1, 62)}, 7, "mixed", Order::Shuffle},
                       {{3300, make_q(1, 62)}, 11, "quarter-mix", Order::Interleave},
                       {{500, make_q(1, 31)}, 3, "dominant-heavy", Order::Decreasing},
                       {{800, make_q(1, 62)}, 5, "small-heavy", Order::Increasing}};
  for (const auto& c : list) {
    ++cases;
    std::string inst_text[2], trace[2], report[2];
    for (int k = 0; k < 2; ++k) {
      auto inst = gen_random_feasible(c.cfg, c.seed, c.profile, c.order);
      std::ostringstream is, ts;
      write_instance(is, inst);
      inst_text[k] = is.str();
      report[k] = run_instance(inst, {}, &ts).to_json();
      trace[k] = ts.str();
    }
    same(inst_text[0], inst_text[1], "instance");
    same(trace[0], trace[1], "trace");
    same(report[0], report[1], "report");
    std::istringstream in(trace[0]);
    same(run_instance(instance_from_trace(in)).to_json(), report[0], "replayed report");
  }
  auto pat = [] { return run_instance(gen_pattern({3300, make_q(1, 62)}, {Pattern::StageStress, 2})).to_json(); };
  ++cases;
  same(pat(), pat(), "pattern report");
  return {mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only, expect_fail;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = split_ids(argv[++i]);
    else if (a == "--expect-fail" && i + 1 < argc) expect_fail = split_ids(argv[++i]);
    else {
      std::cerr << "usage: acceptance [--only A1,A2] [--expect-fail A2,A3]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Result()>>> all = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  int mismatched = 0;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && !only.count(id)) continue;
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    bool expected_fail = expect_fail.count(id) > 0;
    std::cout << id << " " << (r.pass ? "PASS" : "FAIL") << (expected_fail ? " (expected FAIL)" : "") << ": "
              << r.summary << std::endl;
    if (r.pass == expected_fail) ++mismatched;
  }
  return mismatched == 0 ? 0 : 1;
}
