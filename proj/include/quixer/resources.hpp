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

/**
 * @file
 * Fault-tolerant resource counts for a single Quixer layer.
 *
 * Gate set: single-qubit, singly-controlled single-qubit and Toffoli gates.
 * A single-qubit gate controlled on m qubits costs 2(m-1) Toffolis plus one
 * controlled gate (a Toffoli ladder computed and uncomputed around it).
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace quixer {

struct ResourceQuery {
  int q = 6;
  std::uint64_t n = 32;
  int l = 4;
  int d = 3;
  /// Gates per token unitary; defaults to 4lq rotations plus one phase gate.
  std::optional<std::uint64_t> g_override;
  /// Gates for one PREP application; unset means the cost is not reported.
  std::optional<std::uint64_t> prep_override;
  bool use_ancilla_select = false;
  /// Constant factor on g for the ancilla-assisted select.
  std::uint64_t ancilla_select_multiplier = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct ResourceEstimate {
  std::uint64_t data_qubits = 0;
  std::uint64_t control_qubits = 0;
  std::uint64_t qsvt_ancillae = 3;
  std::uint64_t ancilla_qubits = 0;  // Toffoli-ladder ancillae (ancilla-select only)
  std::uint64_t total_qubits = 0;
  std::uint64_t gates_per_token = 0;
  std::uint64_t multicontrolled_cost = 0;
  std::uint64_t gates_select = 0;
  std::uint64_t gates_qsvt_projectors = 0;
  std::optional<std::uint64_t> gates_prep;  // total over the d PREP/PREP^dagger pairs
  std::uint64_t gates_total = 0;            // excludes PREP when unsupplied
  std::string asymptotic_class;
  std::string note;
};

/// ceil(log2 n) for n >= 2.
std::uint64_t control_bits(std::uint64_t n);
std::uint64_t qubit_count(const ResourceQuery& query);
/// 1 for m == 1, otherwise 2(m-1) + 1.
std::uint64_t multicontrolled_gate_count(std::uint64_t m);
ResourceEstimate estimate(const ResourceQuery& query);

std::string format_table(const ResourceQuery& query, const ResourceEstimate& est);
nlohmann::json to_json(const ResourceQuery& query, const ResourceEstimate& est);

}  // namespace quixer
