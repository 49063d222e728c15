#include "bstretch/engine.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "bstretch/threats.hpp"

namespace bst {

using ojson = nlohmann::ordered_json;

const char* name(AuditMode a) { return a == AuditMode::Full ? "full" : "sampled"; }

AuditMode parse_audit_mode(const std::string& s) {
  if (s == "full") return AuditMode::Full;
  if (s == "sampled") return AuditMode::Sampled;
  throw std::invalid_argument("unknown audit mode: " + s);
}

AuditMode default_audit_mode(long m) { return m <= 5000 ? AuditMode::Full : AuditMode::Sampled; }

namespace {

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

ojson exact(const Q& x) {
  ojson j;
  j["exact"] = to_string(x);
  j["decimal"] = to_decimal(x, 6);
  return j;
}

// Drops a leading "event N: ".
std::string_view strip_event(std::string_view d) {
  if (d.rfind("event ", 0) != 0) return d;
  auto colon = d.find(": ");
  return colon == std::string_view::npos ? d : d.substr(colon + 2);
}

// Detail with the event prefix, bin ids and numbers removed.
std::string violation_kind(const std::string& detail) {
  std::string_view d = strip_event(detail);
  std::string k;
  if (d.rfind("bin ", 0) == 0) {
    auto open = d.find(" ("), close = d.find(") ");
    if (open != std::string_view::npos && close != std::string_view::npos && open < close) {
      d = d.substr(close + 2);
      k = "bin ";
    }
  }
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  for (std::size_t i = 0; i < d.size();) {
    if (!digit(d[i])) {
      k += d[i++];
      continue;
    }
    while (i < d.size() && digit(d[i])) ++i;
    if (i + 1 < d.size() && d[i] == '/' && digit(d[i + 1])) {
      ++i;
      while (i < d.size() && digit(d[i])) ++i;
    }
    k += '#';
  }
  return k;
}

}  // namespace

Engine::Engine(const Config& cfg, RunOptions opt, std::ostream* trace)
    : cfg_(cfg), table_(derive_constants(cfg)), opt_(opt), trace_(trace) {
  validate_config(cfg);
  mode_ = opt.audit.value_or(default_audit_mode(cfg.m));
  state_ = std::make_unique<State>(cfg.m, table_);
  report_.config = cfg;
  report_.generator = opt.generator;
  start_ = now_seconds();
  if (trace_) {
    ojson h;
    h["trace"] = "bstretch";
    h["m"] = cfg.m;
    h["eps"] = to_string(cfg.eps);
    h["generator"] = opt.generator;
    *trace_ << h.dump() << '\n';
  }
  timeline("starting");
}

Engine::~Engine() = default;

void Engine::timeline(const std::string& what) { report_.timeline.push_back({state_->events(), what}); }

void Engine::violation(const std::string& check, const std::string& detail) {
  AuditSummary& a = report_.audit;
  ++a.violations;
  const std::string key = check + ": " + violation_kind(detail);
  if (a.by_check[key]++ == 0) a.first_event[key] = state_->events();
  if (a.first.size() < opt_.keep_violations)
    a.first.push_back("event " + std::to_string(state_->events()) + ": " + check + ": " + std::string(strip_event(detail)));
}

void Engine::trace_event(const TransitionRecord& r, const std::string& rule, int stage, const char* ftype) {
  if (!trace_) return;
  ojson j;
  j["event"] = r.event;
  j["item"] = r.item;
  j["size"] = to_string(r.size);
  j["bin"] = r.bin;
  j["phase"] = ctl_.phase == Phase::GoodSituation ? std::string(name(ctl_.kind)) : std::string(name(ctl_.phase));
  j["from"] = name(r.from);
  j["to"] = name(r.to);
  j["counted_delta"] = to_string(r.counted_delta);
  j["rule"] = rule;
  j["last_resort"] = r.last_resort;
  if (stage > 0) j["stage"] = stage;
  if (ftype) j["ftype"] = ftype;
  *trace_ << j.dump() << '\n';
}

void Engine::trace_notes() {
  if (!plan_) return;
  const auto& notes = plan_->notes();
  for (; notes_seen_ < notes.size(); ++notes_seen_) {
    const FillupNote& n = notes[notes_seen_];
    if (n.kind == "stage") timeline("fillup stage " + n.detail);
    if (!trace_) continue;
    ojson j;
    j["note"] = n.kind;
    j["event"] = n.event;
    j["detail"] = n.detail;
    *trace_ << j.dump() << '\n';
  }
}

void Engine::audit_starting(bool boundary) {
  const State& s = *state_;
  AuditSummary& a = report_.audit;
  const long ev = s.events();
  const bool batch =
      boundary || (mode_ == AuditMode::Full ? ev % opt_.batch_every == 0 : ev % opt_.sample_every == 0);
  ++a.audited_events;
  if (batch) ++a.batch_audits;
  if (s.count(Tag::S) + s.count(Tag::JustQ1) > 0) a.max_x = std::max(a.max_x, s.x_size());
  for (const std::string& v : audit_invariants(s, batch)) violation("invariant", v);

  BlockCounts b = s.blocks();
  if (b.top < last_blocks_.top || b.big < last_blocks_.big || b.large < last_blocks_.large)
    violation("blocks", "block counts decreased");
  last_blocks_ = b;

  if (ctl_.phase != Phase::Starting) return;
  if (cfg_.guaranteed() && s.count(Tag::S) + s.count(Tag::JustQ1) > 0 && !check_fillup_trigger(s)) {
    const long n = s.count(Tag::N), l = s.count(Tag::L), qm = s.count(Tag::QMatch);
    if (s.r() > table_.r0(s.m(), l, qm, n) - 1) violation("r-bound", "r = " + std::to_string(s.r()));
    if (Q(s.empty_count()) < table_.e0(s.m(), l, qm, n) + 1)
      violation("e-bound", "e = " + std::to_string(s.empty_count()));
  }
  if (opt_.certificate && (mode_ == AuditMode::Full || batch)) {
    ++a.certificate_checks;
    WeightCertificate c = build_invariant1_certificate(s, false);
    if (!c.applicable)
      ++a.certificate_not_applicable;
    else if (!c.success)
      violation("certificate", c.reason);
  }
}

void Engine::audit_fillup_now() {
  AuditSummary& a = report_.audit;
  ++a.fillup_audits;
  for (const std::string& v : audit_fillup(*plan_, *state_)) violation("fillup", v);
  a.max_half_full = std::max(a.max_half_full, plan_->half_full());
  a.max_rule1_violations = std::max(a.max_rule1_violations, plan_->rule1_violations());
  Q slack = Q(plan_->untouched_d()) - plan_->invariant4_rhs();
  if (!a.min_invariant4_slack || slack < *a.min_invariant4_slack) a.min_invariant4_slack = slack;
}

void Engine::enter_good(GoodKind k, bool from_fillup) {
  ctl_.phase = Phase::GoodSituation;
  ctl_.kind = k;
  if (k == GoodKind::VerySimpleFillUp || k == GoodKind::WeightBasedQ2)
    fgood_ = std::make_unique<FillupGoodPacker>(*state_, *plan_, k);
  else
    good_ = std::make_unique<GoodSituationPacker>(*state_, k);
  timeline(std::string("good situation ") + name(k) + (from_fillup ? " (fill-up)" : ""));
}

void Engine::maybe_start_fillup() {
  plan_ = std::make_unique<FillupPlan>(*state_);
  ctl_.phase = Phase::FillUp;
  timeline("fillup");
  trace_notes();
  GoodKind k = plan_->entry_good_situation();
  if (k == GoodKind::None) k = plan_->detect_good_situation();
  if (k != GoodKind::None) {
    enter_good(k, true);
    return;
  }
  audit_fillup_now();
}

bool Engine::feed(const Item& item) {
  if (failed_ || finished_) return false;
  items_.push_back(item);
  State& s = *state_;
  try {
    switch (ctl_.phase) {
      case Phase::Starting: {
        StartingStep st = place_item_starting(s, item);
        trace_event(st.record, st.decision.rule);
        GoodKind k = detect_good_situation(s);
        if (k != GoodKind::None) {
          audit_starting(true);
          enter_good(k, false);
        } else if (check_fillup_trigger(s)) {
          audit_starting(true);
          maybe_start_fillup();
        } else {
          audit_starting(false);
        }
        break;
      }
      case Phase::FillUp: {
        FillupStep st = plan_->place(item);
        trace_event(st.record, st.rule, st.stage, name(st.type));
        trace_notes();
        audit_fillup_now();
        GoodKind k = plan_->detect_good_situation();
        if (k != GoodKind::None) enter_good(k, true);
        break;
      }
      case Phase::GoodSituation: {
        bool fallback = false;
        TransitionRecord r = good_ ? good_->place(item, &fallback) : fgood_->place(item, &fallback);
        if (fallback) ++report_.audit.good_situation_fallbacks;
        trace_event(r, fallback ? "good-situation-fallback" : "good-situation");
        if (ctl_.kind == GoodKind::WeightBasedPacking) audit_starting(false);
        break;
      }
    }
  } catch (const CapacityExceeded& e) {
    failed_ = true;
    report_.failure_event = s.events();
    report_.failure = e.what();
  } catch (const IllegalTransition& e) {
    failed_ = true;
    report_.failure_event = s.events();
    report_.failure = std::string("illegal transition: ") + e.what();
  }
  return !failed_;
}

RunReport Engine::finish() {
  finished_ = true;
  const State& s = *state_;
  RunReport& r = report_;
  r.all_packed = !failed_;
  r.items = static_cast<long>(items_.size());
  r.events = s.events();
  r.max_load = 0;
  for (const BinRecord& b : s.bins()) r.max_load = qmax(r.max_load, b.level);
  r.factor = r.max_load / 12;
  if (r.all_packed && r.max_load > table_.online_capacity) violation("capacity", "max load above 18-2eps");
  r.final_phase = name(ctl_.phase);
  r.good_situation = name(ctl_.kind);
  r.audit.last_resort = s.last_resort_count();
  if (plan_) {
    r.stage = plan_->stage();
    r.beta0 = plan_->beta0();
    r.fillup_initial_u = plan_->initial_u();
    r.fillup_initial_d = plan_->initial_d();
    r.fillup_e0 = plan_->e0();
    r.fillup_d_added = plan_->d_added();
    r.stage1_initial = plan_->stage1_initial();
    r.stage1_paid = plan_->stage1_paid();
  }
  if (!cfg_.guaranteed()) {
    if (cfg_.eps == make_q(1, 31) && cfg_.m < 58380)
      r.warnings.push_back("experimental: below m >= 58380 threshold");
    else
      r.warnings.push_back("experimental: outside the guaranteed presets");
  }
  r.fingerprint = fingerprint(items_);
  r.wall_seconds = now_seconds() - start_;
  return r;
}

std::string RunReport::to_json(bool timing) const {
  ojson j;
  j["m"] = config.m;
  j["eps"] = to_string(config.eps);
  j["validity"] = config.validity();
  j["warnings"] = warnings;
  j["generator"] = generator;
  j["fingerprint"] = fingerprint;
  j["outcome"] = all_packed ? "AllPacked" : "Failure";
  if (!all_packed) {
    j["failure_event"] = failure_event;
    j["failure"] = failure;
  }
  j["items"] = items;
  j["events"] = events;
  j["max_load"] = exact(max_load);
  j["factor"] = exact(factor);
  j["final_phase"] = final_phase;
  j["good_situation"] = good_situation;
  if (beta0) {
    ojson f;
    f["stage"] = stage;
    f["beta0"] = exact(*beta0);
    f["initial_u"] = fillup_initial_u;
    f["initial_d"] = fillup_initial_d;
    f["e0"] = fillup_e0;
    f["d_added"] = fillup_d_added;
    f["stage1_initial"] = to_string(stage1_initial);
    f["stage1_paid"] = to_string(stage1_paid);
    j["fillup"] = f;
  }
  ojson tl = ojson::array();
  for (const TimelineEntry& e : timeline) tl.push_back({{"event", e.event}, {"what", e.what}});
  j["timeline"] = tl;
  ojson a;
  a["audited_events"] = audit.audited_events;
  a["batch_audits"] = audit.batch_audits;
  a["certificate_checks"] = audit.certificate_checks;
  a["certificate_not_applicable"] = audit.certificate_not_applicable;
  a["fillup_audits"] = audit.fillup_audits;
  a["violations"] = audit.violations;
  a["by_check"] = audit.by_check;
  a["first_event"] = audit.first_event;
  a["first"] = audit.first;
  a["max_x"] = audit.max_x;
  a["max_half_full"] = audit.max_half_full;
  a["max_rule1_violations"] = audit.max_rule1_violations;
  if (audit.min_invariant4_slack) a["min_invariant4_slack"] = exact(*audit.min_invariant4_slack);
  a["last_resort"] = audit.last_resort;
  a["good_situation_fallbacks"] = audit.good_situation_fallbacks;
  j["audit"] = a;
  if (timing) j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

RunReport run_instance(const Instance& inst, const RunOptions& opt, std::ostream* trace) {
  RunOptions o = opt;
  o.generator = inst.generator;
  Engine e(inst.config, o, trace);
  for (const Item& it : inst.items)
    if (!e.feed(it)) break;
  return e.finish();
}

Instance instance_from_trace(std::istream& is) {
  Instance inst;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty trace");
  auto h = nlohmann::json::parse(line);
  if (h.value("trace", "") != "bstretch") throw std::runtime_error("not a trace file");
  inst.config.m = h.at("m").get<long>();
  inst.config.eps = parse_rational(h.at("eps").get<std::string>());
  inst.generator = h.value("generator", "trace");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = nlohmann::json::parse(line);
    if (r.contains("note")) continue;
    inst.items.push_back({r.at("item").get<long>(), parse_rational(r.at("size").get<std::string>())});
  }
  return inst;
}

}  // namespace bst
