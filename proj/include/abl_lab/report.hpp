// Copyright 2026 The ABL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON and aligned-text renderings of every report. JSON documents carry
 * "schema": 1 and keep key order stable, so equal inputs give byte-identical
 * output. Missing values (nothing survived a selection) are written as the
 * string "undefined".
 */

#pragma once

#include <string>
#include <vector>

#include "abl_lab/abl.hpp"
#include "abl_lab/ensemble.hpp"
#include "abl_lab/fallacies.hpp"
#include "abl_lab/verify.hpp"
#include "json.hpp"

namespace abl {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;
inline constexpr const char* kUndefined = "undefined";

/// Serialises with two-space indentation and a trailing newline.
std::string dump(const Json& doc);

Json exact_json(const Protocol& p, const std::vector<SequenceProbability>& dist);
std::string exact_text(const Protocol& p, const std::vector<SequenceProbability>& dist);

Json mc_json(const EnsembleStats& stats, const Comparison& cmp);
std::string mc_text(const EnsembleStats& stats, const Comparison& cmp);

Json aad_json(const AadReport& report);
std::string aad_text(const AadReport& report);

Json robertson_json(const RobertsonReport& r, const std::string& c_name, const std::string& d_name);
std::string robertson_text(const RobertsonReport& r, const std::string& c_name, const std::string& d_name);

Json robertson_sweep_json(const RobertsonSweep& s);
std::string robertson_sweep_text(const RobertsonSweep& s);

Json verify_json(const VerifyReport& report);
std::string verify_text(const VerifyReport& report);
/// Replay document for the first failure; empty object when none failed.
Json replay_json(const VerifyReport& report);

Json berkson_json(const BerksonParams& params, std::uint64_t seed, const BerksonExact& exact,
                  const BerksonSample& sample);
std::string berkson_text(const BerksonParams& params, std::uint64_t seed, const BerksonExact& exact,
                         const BerksonSample& sample);

Json coins_json(const CoinParams& params, std::uint64_t seed, const CoinResult& exact, const CoinResult& mc);
std::string coins_text(const CoinParams& params, std::uint64_t seed, const CoinResult& exact, const CoinResult& mc);

Json shutter_json(const ShutterParams& params, std::uint64_t seed, const ShutterResult& exact,
                  const ShutterResult& mc);
std::string shutter_text(const ShutterParams& params, std::uint64_t seed, const ShutterResult& exact,
                         const ShutterResult& mc);

Json boxes_json(std::uint64_t n, std::uint64_t seed, const BoxesResult& exact, const BoxesResult& mc);
std::string boxes_text(std::uint64_t n, std::uint64_t seed, const BoxesResult& exact, const BoxesResult& mc);

}  // namespace abl
