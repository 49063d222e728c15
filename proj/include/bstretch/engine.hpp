#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bstretch/fillup_phase.hpp"
#include "bstretch/instgen.hpp"
#include "bstretch/starting_phase.hpp"
#include "bstretch/state.hpp"

namespace bst {

enum class AuditMode { Full, Sampled };
const char* name(AuditMode a);
AuditMode parse_audit_mode(const std::string& s);
// Full up to m = 5000, sampled above.
AuditMode default_audit_mode(long m);

struct RunOptions {
  std::optional<AuditMode> audit;
  long sample_every = 1000;  // sampled mode: audit cadence
  long batch_every = 64;     // full mode: cadence of the O(m) recount audits
  bool certificate = true;
  bool timing = false;  // wall time in the JSON report
  std::size_t keep_violations = 20;
  std::string generator;  // copied into the report and the trace header
};

struct AuditSummary {
  long audited_events = 0;
  long batch_audits = 0;
  long certificate_checks = 0;
  long certificate_not_applicable = 0;
  long fillup_audits = 0;
  long violations = 0;
  std::map<std::string, long> by_check;
  std::map<std::string, long> first_event;  // per by_check key
  std::vector<std::string> first;
  long max_x = 0;
  long max_half_full = 0;
  long max_rule1_violations = 0;
  std::optional<Q> min_invariant4_slack;  // untouched D minus the bound
  long last_resort = 0;
  long good_situation_fallbacks = 0;
};

struct TimelineEntry {
  long event = 0;
  std::string what;
};

struct RunReport {
  Config config;
  std::vector<std::string> warnings;
  std::string generator;
  std::string fingerprint;
  bool all_packed = false;
  long failure_event = -1;
  std::string failure;
  long items = 0;
  long events = 0;
  Q max_load;
  Q factor;  // max load / 12
  std::string final_phase;
  std::string good_situation;
  int stage = 0;
  std::optional<Q> beta0;
  long fillup_initial_u = 0, fillup_initial_d = 0, fillup_e0 = 0, fillup_d_added = 0;
  Q stage1_initial, stage1_paid;
  std::vector<TimelineEntry> timeline;
  AuditSummary audit;
  double wall_seconds = 0;

  bool ok() const { return all_packed && audit.violations == 0; }
  std::string to_json(bool timing = false) const;
};

// Runs the algorithm item by item with online auditing.
class Engine {
 public:
  explicit Engine(const Config& cfg, RunOptions opt = {}, std::ostream* trace = nullptr);
  ~Engine();

  // Returns false once the run has failed; later items are ignored.
  bool feed(const Item& item);
  RunReport finish();

  const State& state() const { return *state_; }
  Phase phase() const { return ctl_.phase; }
  GoodKind good_kind() const { return ctl_.kind; }
  const FillupPlan* plan() const { return plan_.get(); }
  const ConstantTable& table() const { return table_; }

 private:
  void violation(const std::string& check, const std::string& detail);
  void audit_starting(bool boundary);
  void audit_fillup_now();
  void enter_good(GoodKind k, bool from_fillup);
  void maybe_start_fillup();
  void timeline(const std::string& what);
  void trace_event(const TransitionRecord& r, const std::string& rule, int stage = 0, const char* ftype = nullptr);
  void trace_notes();

  Config cfg_;
  ConstantTable table_;
  RunOptions opt_;
  AuditMode mode_;
  std::ostream* trace_;
  std::unique_ptr<State> state_;
  PhaseController ctl_;
  std::unique_ptr<FillupPlan> plan_;
  std::unique_ptr<GoodSituationPacker> good_;
  std::unique_ptr<FillupGoodPacker> fgood_;
  std::size_t notes_seen_ = 0;
  RunReport report_;
  BlockCounts last_blocks_;
  bool failed_ = false;
  bool finished_ = false;
  std::vector<Item> items_;
  double start_ = 0;
};

RunReport run_instance(const Instance& inst, const RunOptions& opt = {}, std::ostream* trace = nullptr);

// Items in arrival order from a trace written by the engine, plus its config.
Instance instance_from_trace(std::istream& is);

}  // namespace bst
