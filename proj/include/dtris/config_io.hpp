// SPDX-License-Identifier: Apache-2.0
//
// dtris: dual-tier RIS-assisted downlink network simulator
// Copyright (C) 2026 dtris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Plain key=value config files, canonical serialization, and the CSV/JSON
// result emitters. Missing keys take the reference defaults; unknown keys
// are rejected with their line number. All output uses '.' decimals, LF
// line endings and UTF-8.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtris/simulation.hpp"

namespace dtris {

// Parses and validates; throws ParseError (with <origin>:<line>) or
// ValidationError (naming the field).
SimConfig parse_config_text(const std::string &text,
                            const std::string &origin = "config");
SimConfig parse_config_file(const std::string &path);

// Canonical form: one key=value per line, keys sorted, schemes in fixed
// order, shortest round-trip float formatting. parse(serialize(c)) == c.
std::string serialize_config(const SimConfig &config);

// FNV-1a over the canonical serialization; invariant under key reordering
// in the source file.
std::uint64_t config_hash(const SimConfig &config);

// Sweep CSV: header plus one row per (grid point, scheme).
std::string render_sweep_csv(const AggregateReport &report);

// Convergence trace CSV: one row per (trial, iteration) with the achieved
// and best-so-far sum rate.
std::string render_trace_csv(const std::vector<TrialReport> &reports);

struct RunManifest {
  std::string version;
  std::uint64_t config_hash = 0;
  std::uint64_t base_seed = 0;
  std::string timestamp_utc;
  std::vector<std::string> outputs;
  std::string config_canonical;
};

std::string render_manifest_json(const RunManifest &manifest);

std::string utc_timestamp();

// Throws IoError on failure; writes bytes verbatim.
void write_text_file(const std::string &path, const std::string &content);

} // namespace dtris
