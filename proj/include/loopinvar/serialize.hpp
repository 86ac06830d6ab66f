#pragma once

// JSON, text, and DOT renderings of analysis results. JSON uses ordered
// objects and exact decimal-free strings for every rational quantity so
// output is stable and lossless.

#include <string>
#include <vector>

#include <json.hpp>

#include "loopinvar/dependency.hpp"
#include "loopinvar/oracle.hpp"
#include "loopinvar/synthesis.hpp"

namespace loopinvar {

using Json = nlohmann::ordered_json;

Json partition_json(const Partition& part, const std::vector<std::string>& names);
std::string partition_text(const Partition& part,
                           const std::vector<std::string>& names);

/// Graphviz rendering with L/N edge labels, stable order.
std::string graph_dot(const DependencyGraph& g);

Json invariant_json(const Invariant& inv, const std::vector<Monomial>& candidate,
                    const std::vector<std::string>& names,
                    const std::string& benchmark);
/// Array with one entry per eigenvalue.
Json synthesis_json(const SynthesisResult& res, const std::vector<std::string>& names,
                    const std::string& benchmark);

std::string invariant_text(const Invariant& inv,
                           const std::vector<std::string>& names);
std::string synthesis_text(const SynthesisResult& res,
                           const std::vector<std::string>& names);

Json check_json(const CheckReport& report);
std::string check_text(const CheckReport& report);

}  // namespace loopinvar
