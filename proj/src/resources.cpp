// Copyright 2026 The Quixer Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quixer/resources.hpp"

#include <algorithm>
#include <sstream>
#include <utility>
#include <vector>

#include "quixer/errors.hpp"

namespace quixer {

void ResourceQuery::validate() const {
  if (q < 1 || l < 1 || d < 1) throw ConfigError("q, l and d must be positive");
  if (n < 2) throw ConfigError("n must be at least 2");
  if (g_override && *g_override == 0) throw ConfigError("g must be positive");
  if (ancilla_select_multiplier == 0) throw ConfigError("ancilla-select multiplier must be positive");
}

std::uint64_t control_bits(std::uint64_t n) {
  if (n < 2) throw ConfigError("n must be at least 2");
  std::uint64_t m = 0;
  while ((std::uint64_t{1} << m) < n) ++m;
  return m;
}

std::uint64_t qubit_count(const ResourceQuery& query) {
  query.validate();
  const std::uint64_t m = control_bits(query.n);
  std::uint64_t total = static_cast<std::uint64_t>(query.q) + m + 3;
  if (query.use_ancilla_select && m > 2) total += m - 2;
  return total;
}

std::uint64_t multicontrolled_gate_count(std::uint64_t m) {
  if (m == 0) throw ConfigError("a controlled gate needs at least one control");
  return m == 1 ? 1 : 2 * (m - 1) + 1;
}

ResourceEstimate estimate(const ResourceQuery& query) {
  query.validate();
  ResourceEstimate e;
  const std::uint64_t m = control_bits(query.n);
  const auto d = static_cast<std::uint64_t>(query.d);
  e.data_qubits = static_cast<std::uint64_t>(query.q);
  e.control_qubits = m;
  e.ancilla_qubits = query.use_ancilla_select && m > 2 ? m - 2 : 0;
  e.total_qubits = qubit_count(query);
  e.gates_per_token = query.g_override.value_or(4ULL * static_cast<std::uint64_t>(query.l) *
                                                    static_cast<std::uint64_t>(query.q) + 1);
  e.multicontrolled_cost = multicontrolled_gate_count(m);

  if (query.use_ancilla_select) {
    // Ladder computed once per token into a single flag qubit; every gate of
    // U_j is then singly controlled on that flag.
    const std::uint64_t ladder = m == 1 ? 0 : 2 * (m - 1);
    e.gates_select = d * query.n * (e.gates_per_token * query.ancilla_select_multiplier + ladder);
    e.asymptotic_class = "O(d n g) = O(d n q l)";
    e.note = "ancilla-select constant is a configurable multiplier (default 1); exact constant not fixed by the construction";
  } else {
    e.gates_select = d * query.n * e.gates_per_token * e.multicontrolled_cost;
    e.asymptotic_class = "O(d n g log2(n))";
  }
  e.gates_qsvt_projectors = d * e.multicontrolled_cost;
  e.gates_total = e.gates_select + e.gates_qsvt_projectors;
  if (query.prep_override) {
    e.gates_prep = 2 * d * *query.prep_override;
    e.gates_total += *e.gates_prep;
  }
  return e;
}

std::string format_table(const ResourceQuery& query, const ResourceEstimate& est) {
  std::vector<std::pair<std::string, std::string>> rows{
      {"q", std::to_string(query.q)},
      {"n", std::to_string(query.n)},
      {"l", std::to_string(query.l)},
      {"d", std::to_string(query.d)},
      {"ancilla_select", query.use_ancilla_select ? "yes" : "no"},
      {"data_qubits", std::to_string(est.data_qubits)},
      {"control_qubits", std::to_string(est.control_qubits)},
      {"qsvt_ancillae", std::to_string(est.qsvt_ancillae)},
      {"ladder_ancillae", std::to_string(est.ancilla_qubits)},
      {"total_qubits", std::to_string(est.total_qubits)},
      {"gates_per_token", std::to_string(est.gates_per_token)},
      {"multicontrolled_cost", std::to_string(est.multicontrolled_cost)},
      {"gates_select", std::to_string(est.gates_select)},
      {"gates_qsvt_projectors", std::to_string(est.gates_qsvt_projectors)},
      {"gates_prep", est.gates_prep ? std::to_string(*est.gates_prep) : "unsupplied"},
      {"gates_total", std::to_string(est.gates_total) + (est.gates_prep ? "" : " (+ prep)")},
      {"asymptotic_class", est.asymptotic_class},
  };
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  if (!est.note.empty()) out << "note: " << est.note << '\n';
  return out.str();
}

nlohmann::json to_json(const ResourceQuery& query, const ResourceEstimate& est) {
  nlohmann::json j{
      {"schema", "quixer-resources/1"},
      {"query",
       {{"q", query.q}, {"n", query.n}, {"l", query.l}, {"d", query.d},
        {"ancilla_select", query.use_ancilla_select},
        {"ancilla_select_multiplier", query.ancilla_select_multiplier}}},
      {"data_qubits", est.data_qubits},
      {"control_qubits", est.control_qubits},
      {"qsvt_ancillae", est.qsvt_ancillae},
      {"ancilla_qubits", est.ancilla_qubits},
      {"total_qubits", est.total_qubits},
      {"gates_per_token", est.gates_per_token},
      {"multicontrolled_cost", est.multicontrolled_cost},
      {"gates_select", est.gates_select},
      {"gates_qsvt_projectors", est.gates_qsvt_projectors},
      {"gates_prep", est.gates_prep ? nlohmann::json(*est.gates_prep) : nlohmann::json("unsupplied")},
      {"gates_total", est.gates_total},
      {"asymptotic_class", est.asymptotic_class},
  };
  if (!est.note.empty()) j["note"] = est.note;
  return j;
}

}  // namespace quixer
