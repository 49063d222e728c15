// bstretch command line driver.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "bstretch/engine.hpp"
#include "bstretch/lpcheck.hpp"
#include "bstretch/threats.hpp"

using namespace bst;

namespace {

struct Source {
  long m = 3300;
  std::string eps = "1/62";
  std::string pattern;
  std::string profile = "mixed";
  std::string order = "shuffle";
  std::string level;
  std::uint64_t seed = 1;
  std::string instance_file;
  std::string replay_file;
};

void add_source_flags(CLI::App* app, Source& s) {
  app->add_option("--m", s.m, "number of bins")->check(CLI::PositiveNumber);
  app->add_option("--eps", s.eps, "epsilon as p/q");
  app->add_option("--pattern", s.pattern, "named adversarial pattern");
  app->add_option("--seed", s.seed, "generator seed");
  app->add_option("--profile", s.profile, "random profile");
  app->add_option("--order", s.order, "arrival order: shuffle, decreasing, increasing, interleave");
  app->add_option("--level", s.level, "StageStress small level (p/q)");
}

Config config_of(const Source& s) {
  Config c;
  c.m = s.m;
  c.eps = parse_rational(s.eps);
  validate_config(c);
  return c;
}

Instance make_instance(const Source& s) {
  if (!s.replay_file.empty()) {
    std::ifstream in(s.replay_file);
    if (!in) throw std::runtime_error("cannot read " + s.replay_file);
    return instance_from_trace(in);
  }
  if (!s.instance_file.empty()) {
    std::ifstream in(s.instance_file);
    if (!in) throw std::runtime_error("cannot read " + s.instance_file);
    return read_instance(in);
  }
  Config cfg = config_of(s);
  if (!s.pattern.empty()) {
    PatternSpec p;
    p.pattern = parse_pattern(s.pattern);
    p.seed = s.seed;
    if (!s.level.empty()) p.level = parse_rational(s.level);
    return gen_pattern(cfg, p);
  }
  return gen_random_feasible(cfg, s.seed, s.profile, parse_order(s.order));
}

RunOptions options_of(const std::string& audit, bool timing) {
  RunOptions o;
  if (!audit.empty()) o.audit = parse_audit_mode(audit);
  o.timing = timing;
  return o;
}

int cmd_run(const Source& src, const std::string& audit, const std::string& trace_file,
            const std::string& report_file, bool timing) {
  Instance inst = make_instance(src);
  std::ofstream trace;
  if (!trace_file.empty()) {
    trace.open(trace_file);
    if (!trace) throw std::runtime_error("cannot write " + trace_file);
  }
  RunReport r = run_instance(inst, options_of(audit, timing), trace_file.empty() ? nullptr : &trace);
  std::string json = r.to_json(timing);
  if (report_file.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out(report_file);
    out << json << '\n';
    std::cerr << (r.all_packed ? "AllPacked" : "Failure") << " max_load=" << to_string(r.max_load)
              << " factor=" << to_decimal(r.factor, 6) << " violations=" << r.audit.violations << '\n';
  }
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return r.ok() ? 0 : 1;
}

struct BatchJob {
  std::string label;
  std::string profile;
  std::string order;
  std::uint64_t seed = 0;
  Source src;
};

int cmd_batch(const Source& base, long runs, std::uint64_t seed_start, std::vector<std::string> profiles,
              std::vector<std::string> orders, bool patterns, const std::string& audit, int jobs,
              const std::string& csv_file) {
  if (profiles.empty()) profiles = mixed_profiles();
  if (orders.empty())
    for (Order o : kAllOrders) orders.push_back(name(o));
  std::vector<BatchJob> work;
  if (patterns) {
    for (Pattern p : kAllPatterns) {
      BatchJob j;
      j.src = base;
      j.src.pattern = name(p);
      j.label = name(p);
      j.seed = base.seed;
      work.push_back(j);
    }
  }
  for (long i = 0; i < runs; ++i) {
    BatchJob j;
    j.src = base;
    j.src.pattern.clear();
    j.seed = seed_start + static_cast<std::uint64_t>(i);
    j.profile = profiles[static_cast<std::size_t>(i) % profiles.size()];
    j.order = orders[static_cast<std::size_t>(i / static_cast<long>(profiles.size())) % orders.size()];
    j.src.seed = j.seed;
    j.src.profile = j.profile;
    j.src.order = j.order;
    j.label = "random";
    work.push_back(j);
  }

  std::vector<std::string> rows(work.size());
  std::vector<RunReport> reports(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::vector<std::string> errors;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < work.size();) {
      try {
        reports[i] = run_instance(make_instance(work[i].src), options_of(audit, false));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        errors.push_back(work[i].label + " seed " + std::to_string(work[i].seed) + ": " + e.what());
      }
    }
  };
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "run,generator,seed,profile,order,m,eps,outcome,max_load,factor,events,violations,final_phase,stage,"
         "fingerprint\n";
  Q worst;
  bool all_ok = errors.empty();
  for (std::size_t i = 0; i < work.size(); ++i) {
    const RunReport& r = reports[i];
    if (r.items == 0 && r.events == 0 && !r.all_packed) continue;  // errored
    csv << i << ',' << work[i].label << ',' << work[i].seed << ',' << work[i].profile << ',' << work[i].order << ','
        << r.config.m << ',' << to_string(r.config.eps) << ',' << (r.all_packed ? "AllPacked" : "Failure") << ','
        << to_string(r.max_load) << ',' << to_string(r.factor) << ',' << r.events << ',' << r.audit.violations
        << ',' << r.final_phase << ',' << r.stage << ',' << r.fingerprint << '\n';
    worst = qmax(worst, r.factor);
    all_ok = all_ok && r.ok();
  }
  if (!work.empty()) csv << "aggregate,,,,,,,," << (all_ok ? "ok" : "fail") << ',' << to_string(worst) << ",,,,,\n";
  if (csv_file.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream(csv_file) << csv.str();
  }
  for (const std::string& e : errors) std::cerr << "error: " << e << '\n';
  std::cerr << work.size() << " runs, max factor " << to_string(worst) << " (" << to_decimal(worst, 6) << ")"
            << (all_ok ? "" : ", FAILED") << '\n';
  return all_ok ? 0 : 1;
}

int cmd_gen(const Source& src, const std::string& out_file) {
  Instance inst = make_instance(src);
  CertificateAudit a = audit_certificate(inst);
  if (!a.ok) throw std::runtime_error("generated instance is not feasible: " + a.detail);
  if (out_file.empty()) {
    write_instance(std::cout, inst);
  } else {
    std::ofstream out(out_file);
    write_instance(out, inst);
  }
  return 0;
}

std::string vec_str(const std::vector<Q>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

void print_result(const std::string& label, const LinearProgram& lp, const FeasibilityResult& r) {
  std::cout << label << ": " << (r.feasible ? "Feasible" : "Infeasible") << " (" << r.pivots << " pivots)\n";
  if (r.feasible) {
    for (std::size_t i = 0; i < lp.vars.size(); ++i) std::cout << "  " << lp.vars[i] << " = " << to_string(r.point[i]) << '\n';
  } else {
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
      if (r.farkas[i] != 0) std::cout << "  y[" << lp.rows[i].name << "] = " << to_string(r.farkas[i]) << '\n';
    std::cout << "  farkas check: " << (verify_farkas(lp, r.farkas) ? "ok" : "FAILED") << '\n';
  }
}

int cmd_verify_lps(const std::vector<std::string>& files) {
  bool ok = true;
  if (!files.empty()) {
    for (const std::string& f : files) {
      std::ifstream in(f);
      if (!in) throw std::runtime_error("cannot read " + f);
      std::stringstream ss;
      ss << in.rdbuf();
      LinearProgram lp = parse_lp(ss.str(), f);
      print_result(f, lp, solve_feasibility(lp));
    }
    return 0;
  }
  for (const NamedLp& n : paper_lps()) {
    FeasibilityResult r = solve_feasibility(n.lp);
    print_result(n.name, n.lp, r);
    ok = ok && !r.feasible && verify_farkas(n.lp, r.farkas);
  }
  std::cout << "coefficient provenance (eps = 1/31):\n";
  for (const ProvenanceLine& p : check_coefficient_provenance()) {
    std::cout << "  " << (p.holds ? "pass " : "FAIL ") << p.name << ": " << to_string(p.exact) << ' ' << p.relation
              << ' ' << to_string(p.literal) << '\n';
    ok = ok && p.holds;
  }
  std::cout << (ok ? "all LPs infeasible, provenance ok" : "LP suite FAILED") << '\n';
  return ok ? 0 : 1;
}

int cmd_oracle(long m, const std::string& eps, const std::vector<std::string>& sizes, const std::string& kind) {
  Config c;
  c.m = m;
  c.eps = parse_rational(eps);
  validate_config(c);
  ConstantTable t = derive_constants(c);
  std::vector<Q> items;
  for (const std::string& s : sizes) items.push_back(parse_rational(s));
  std::vector<ThreatKind> kinds;
  if (kind.empty() || kind == "all")
    kinds = {ThreatKind::Top, ThreatKind::Big, ThreatKind::Large};
  else if (kind == "top")
    kinds = {ThreatKind::Top};
  else if (kind == "big")
    kinds = {ThreatKind::Big};
  else if (kind == "large")
    kinds = {ThreatKind::Large};
  else
    throw std::invalid_argument("unknown threat kind: " + kind);
  for (ThreatKind k : kinds) {
    long exact = exact_threat_oracle(items, static_cast<int>(m), k, t);
    long bound = weight_bound(items, m, k, t);
    std::cout << name(k) << ": oracle " << exact << ", weight bound " << bound << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online bin stretching with factor 139/93"};
  app.require_subcommand(1);

  Source src;
  std::string audit, trace_file, report_file, csv_file, out_file, kind;
  bool timing = false, patterns = false;
  long runs = 0, oracle_m = 2;
  std::uint64_t seed_start = 1;
  int jobs = 0;
  std::vector<std::string> profiles, orders, lp_files, sizes;
  std::string oracle_eps = "1/31";

  auto* run = app.add_subcommand("run", "pack one instance with online auditing");
  add_source_flags(run, src);
  run->add_option("--instance", src.instance_file, "instance JSON-lines file");
  run->add_option("--replay", src.replay_file, "trace file to replay");
  run->add_option("--trace", trace_file, "write the trace (JSON lines)");
  run->add_option("--audit", audit, "full or sampled")->check(CLI::IsMember({"full", "sampled"}));
  run->add_option("--report", report_file, "write the report JSON");
  run->add_flag("--timing", timing, "include wall time in the report");

  auto* batch = app.add_subcommand("batch", "many seeded runs, CSV output");
  add_source_flags(batch, src);
  batch->add_option("--runs", runs, "number of random runs")->check(CLI::NonNegativeNumber);
  batch->add_option("--seed-start", seed_start, "first seed");
  batch->add_option("--profiles", profiles, "profiles to cycle through")->delimiter(',');
  batch->add_option("--orders", orders, "orders to cycle through")->delimiter(',');
  batch->add_flag("--patterns", patterns, "add one run of every named pattern");
  batch->add_option("--audit", audit, "full or sampled")->check(CLI::IsMember({"full", "sampled"}));
  batch->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  batch->add_option("--csv", csv_file, "write the CSV here");

  auto* gen = app.add_subcommand("gen", "write an instance file");
  add_source_flags(gen, src);
  gen->add_option("--out", out_file, "output file (default stdout)");

  auto* lps = app.add_subcommand("verify-lps", "solve the fill-up LPs and check coefficient provenance");
  lps->add_option("files", lp_files, "LP text files to solve instead");

  auto* oracle = app.add_subcommand("oracle", "exact threat oracle for a tiny item list");
  oracle->add_option("--m", oracle_m, "bins (at most 8)")->check(CLI::PositiveNumber);
  oracle->add_option("--eps", oracle_eps, "epsilon as p/q");
  oracle->add_option("--kind", kind, "top, big, large or all");
  oracle->add_option("sizes", sizes, "item sizes")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(src, audit, trace_file, report_file, timing);
    if (*batch)
      return cmd_batch(src, runs, seed_start, profiles, orders, patterns, audit, jobs, csv_file);
    if (*gen) return cmd_gen(src, out_file);
    if (*lps) return cmd_verify_lps(lp_files);
    if (*oracle) return cmd_oracle(oracle_m, oracle_eps, sizes, kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
