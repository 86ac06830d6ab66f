#include "loopinvar/serialize.hpp"

#include <sstream>

namespace loopinvar {

Json partition_json(const Partition& part, const std::vector<std::string>& names) {
  Json j;
  Json eff = Json::array();
  Json def = Json::array();
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (part.defective.count(v) != 0) {
      def.push_back(names[v]);
    } else {
      eff.push_back(names[v]);
    }
  }
  j["effective"] = std::move(eff);
  j["defective"] = std::move(def);
  j["solvable"] = part.defective.empty();
  return j;
}

std::string partition_text(const Partition& part,
                           const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "effective:";
  bool any = false;
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (part.defective.count(v) == 0) {
      os << ' ' << names[v];
      any = true;
    }
  }
  if (!any) os << " (none)";
  os << "\ndefective:";
  any = false;
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (part.defective.count(v) != 0) {
      os << ' ' << names[v];
      any = true;
    }
  }
  if (!any) os << " (none)";
  os << "\nsolvable: " << (part.defective.empty() ? "yes" : "no") << '\n';
  return os.str();
}

std::string graph_dot(const DependencyGraph& g) {
  std::ostringstream os;
  os << "digraph dependencies {\n";
  for (const std::string& name : g.names) {
    os << "  \"" << name << "\";\n";
  }
  for (const auto& [edge, label] : g.edges) {
    os << "  \"" << g.names[edge.first] << "\" -> \"" << g.names[edge.second]
       << "\" [label=\"" << (label == EdgeLabel::N ? 'N' : 'L') << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

Json invariant_json(const Invariant& inv, const std::vector<Monomial>& candidate,
                    const std::vector<std::string>& names,
                    const std::string& benchmark) {
  Json j;
  j["benchmark"] = benchmark;
  j["degree"] = static_cast<std::uint64_t>(inv.degree);
  j["kappa"] = to_string(inv.kappa);
  Json cand = Json::array();
  for (const Monomial& m : candidate) cand.push_back(mono_to_string(m, names));
  j["candidate"] = std::move(cand);
  Json coeffs = Json::array();
  for (const Scalar& c : inv.coefficients) coeffs.push_back(c.to_string());
  j["coefficients"] = std::move(coeffs);
  if (!inv.weights.empty()) j["weights"] = inv.weights;
  j["space_dim"] = inv.space_dim;
  j["combination"] = inv.s_poly.to_string(names);
  j["initial_value"] = inv.initial_value.to_string();
  Json form = Json::array();
  for (const ExpTerm& t : inv.closed_form.terms()) {
    Json term;
    term["base"] = to_string(t.base);
    Json poly = Json::array();
    for (const Scalar& c : t.coeff) poly.push_back(c.to_string());
    term["poly_in_n"] = std::move(poly);
    form.push_back(std::move(term));
  }
  j["closed_form"] = std::move(form);
  j["valid_from"] = inv.valid_from;
  j["kind"] = inv.expectation ? "expectation" : "value";
  return j;
}

Json synthesis_json(const SynthesisResult& res, const std::vector<std::string>& names,
                    const std::string& benchmark) {
  Json arr = Json::array();
  for (const Invariant& inv : res.invariants) {
    arr.push_back(invariant_json(inv, res.candidate, names, benchmark));
  }
  return arr;
}

std::string invariant_text(const Invariant& inv,
                           const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "kappa " << to_string(inv.kappa) << ", dimension " << inv.space_dim
     << ", valid from " << inv.valid_from << ", kind "
     << (inv.expectation ? "expectation" : "value") << '\n';
  os << "  " << (inv.expectation ? "E[" : "") << inv.s_poly.to_string(names)
     << (inv.expectation ? "]" : "") << " = " << inv.closed_form.to_string()
     << '\n';
  return os.str();
}

std::string synthesis_text(const SynthesisResult& res,
                           const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "degree " << res.degree << ": " << res.candidate.size()
     << " candidates, " << res.equation_count << " cancellation constraints, "
     << res.invariants.size() << " eigenvalue"
     << (res.invariants.size() == 1 ? "" : "s") << '\n';
  for (const Invariant& inv : res.invariants) {
    os << invariant_text(inv, names);
  }
  if (res.invariants.empty()) {
    os << "  no invariant of degree up to " << res.degree << '\n';
  }
  return os.str();
}

Json check_json(const CheckReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["weights"] = report.weights;
  Json assigns = Json::array();
  for (const auto& a : report.assignments) {
    Json one = Json::array();
    for (const Rational& r : a) one.push_back(to_string(r));
    assigns.push_back(std::move(one));
  }
  j["assignments"] = std::move(assigns);
  Json entries = Json::array();
  for (const CheckEntry& e : report.entries) {
    Json one;
    one["assignment"] = e.assignment;
    one["n"] = e.n;
    one["expected"] = e.expected.to_string();
    one["actual"] = e.actual.to_string();
    one["equal"] = e.equal;
    entries.push_back(std::move(one));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string check_text(const CheckReport& report) {
  std::ostringstream os;
  for (const CheckEntry& e : report.entries) {
    os << "assignment " << e.assignment << " n=" << e.n << ": closed form "
       << e.expected.to_string() << ", oracle " << e.actual.to_string() << " -> "
       << (e.equal ? "ok" : "MISMATCH") << '\n';
  }
  os << (report.pass ? "check passed" : "check FAILED") << '\n';
  return os.str();
}

}  // namespace loopinvar
