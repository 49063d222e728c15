#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bstretch/engine.hpp"
#include "bstretch/lpcheck.hpp"
#include "bstretch/threats.hpp"

namespace py = pybind11;
using namespace bst;

namespace {

Config config(long m, const std::string& eps) {
  Config c{m, parse_rational(eps)};
  validate_config(c);
  return c;
}

RunOptions options(const std::optional<std::string>& audit) {
  RunOptions o;
  if (audit) o.audit = parse_audit_mode(*audit);
  return o;
}

Instance make(long m, const std::string& eps, std::uint64_t seed, const std::string& profile, const std::string& order,
              const std::optional<std::string>& pattern) {
  Config c = config(m, eps);
  if (pattern) return gen_pattern(c, {parse_pattern(*pattern), seed});
  return gen_random_feasible(c, seed, profile, parse_order(order));
}

ThreatKind kind_of(const std::string& k) {
  if (k == "top") return ThreatKind::Top;
  if (k == "big") return ThreatKind::Big;
  if (k == "large") return ThreatKind::Large;
  throw std::invalid_argument("kind must be top, big or large");
}

}  // namespace

PYBIND11_MODULE(_bstretch, mod) {
  mod.doc() = "Online bin stretching with exact rational arithmetic";

  mod.def(
      "constants",
      [](const std::string& eps) {
        auto t = derive_constants_eps(parse_rational(eps));
        return std::map<std::string, std::string>{
            {"online_capacity", to_string(t.online_capacity)}, {"smallslot", to_string(t.smallslot)},
            {"quarter_max", to_string(t.quarter_max)},         {"nice_max", to_string(t.nice_max)},
            {"half_max", to_string(t.half_max)},               {"large_max", to_string(t.large_max)},
            {"big_max", to_string(t.big_max)},                 {"top_block", to_string(t.top_block)},
            {"big_block", to_string(t.big_block)},             {"large_block", to_string(t.large_block)}};
      },
      py::arg("eps"));

  mod.def(
      "m_threshold", [](const std::string& eps) { return validate_m_threshold(parse_rational(eps)); },
      py::arg("eps"));

  mod.def(
      "generate",
      [](long m, const std::string& eps, std::uint64_t seed, const std::string& profile, const std::string& order,
         const std::optional<std::string>& pattern) {
        std::ostringstream os;
        write_instance(os, make(m, eps, seed, profile, order, pattern));
        return os.str();
      },
      py::arg("m"), py::arg("eps"), py::arg("seed") = 1, py::arg("profile") = "mixed", py::arg("order") = "shuffle",
      py::arg("pattern") = py::none());

  mod.def(
      "audit_certificate",
      [](const std::string& text) {
        std::istringstream is(text);
        auto a = audit_certificate(read_instance(is));
        return py::make_tuple(a.ok, a.detail);
      },
      py::arg("instance"));

  mod.def(
      "run",
      [](long m, const std::string& eps, std::uint64_t seed, const std::string& profile, const std::string& order,
         const std::optional<std::string>& pattern, const std::optional<std::string>& audit) {
        Instance inst = make(m, eps, seed, profile, order, pattern);
        py::gil_scoped_release unlock;
        return run_instance(inst, options(audit)).to_json();
      },
      py::arg("m"), py::arg("eps"), py::arg("seed") = 1, py::arg("profile") = "mixed", py::arg("order") = "shuffle",
      py::arg("pattern") = py::none(), py::arg("audit") = py::none());

  mod.def(
      "run_instance",
      [](const std::string& text, const std::optional<std::string>& audit) {
        std::istringstream is(text);
        Instance inst = read_instance(is);
        py::gil_scoped_release unlock;
        return run_instance(inst, options(audit)).to_json();
      },
      py::arg("instance"), py::arg("audit") = py::none());

  mod.def(
      "trace",
      [](long m, const std::string& eps, std::uint64_t seed, const std::string& profile, const std::string& order,
         const std::optional<std::string>& pattern) {
        Instance inst = make(m, eps, seed, profile, order, pattern);
        std::ostringstream os;
        std::string report = run_instance(inst, {}, &os).to_json();
        return py::make_tuple(report, os.str());
      },
      py::arg("m"), py::arg("eps"), py::arg("seed") = 1, py::arg("profile") = "mixed", py::arg("order") = "shuffle",
      py::arg("pattern") = py::none());

  mod.def(
      "replay",
      [](const std::string& trace) {
        std::istringstream is(trace);
        return run_instance(instance_from_trace(is)).to_json();
      },
      py::arg("trace"));

  mod.def("verify_lps", [] {
    std::vector<py::dict> out;
    for (const auto& named : paper_lps()) {
      auto r = solve_feasibility(named.lp);
      py::dict d;
      d["name"] = named.name;
      d["feasible"] = r.feasible;
      d["certificate_ok"] = !r.feasible && verify_farkas(named.lp, r.farkas);
      std::vector<std::string> y;
      for (const auto& v : r.farkas) y.push_back(to_string(v));
      d["farkas"] = y;
      out.push_back(d);
    }
    return out;
  });

  mod.def("coefficient_provenance", [] {
    std::vector<py::tuple> out;
    for (const auto& p : check_coefficient_provenance())
      out.push_back(py::make_tuple(p.name, to_string(p.exact), p.relation, to_string(p.literal), p.holds));
    return out;
  });

  mod.def(
      "oracle",
      [](const std::vector<std::string>& sizes, int m, const std::string& kind, const std::string& eps) {
        auto t = derive_constants_eps(parse_rational(eps));
        std::vector<Q> items;
        for (const auto& s : sizes) items.push_back(parse_rational(s));
        return py::make_tuple(exact_threat_oracle(items, m, kind_of(kind), t),
                              weight_bound(items, m, kind_of(kind), t));
      },
      py::arg("sizes"), py::arg("m"), py::arg("kind"), py::arg("eps") = "1/31");

  mod.attr("patterns") = [] {
    std::vector<std::string> v;
    for (auto p : kAllPatterns) v.push_back(name(p));
    return v;
  }();
  mod.attr("profiles") = profile_names();
}
