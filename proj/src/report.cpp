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

#include "abl_lab/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <type_traits>

namespace abl {

namespace {

Json header(const char* command) {
    Json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    return j;
}

template <class T>
Json value_or_undefined(const std::optional<T>& v) {
    return v ? Json(*v) : Json(kUndefined);
}

std::string num(double v) { return fmt::format("{:.6f}", v); }

template <class T>
std::string num(const std::optional<T>& v) {
    if (!v) {
        return kUndefined;
    }
    if constexpr (std::is_same_v<T, bool>) {
        return *v ? "pass" : "FAIL";
    } else {
        return num(static_cast<double>(*v));
    }
}

Json labels_json(const OutcomeSequence& s) { return Json(s.labels); }

std::string seq_text(const OutcomeSequence& s) { return s.labels.empty() ? "()" : to_string(s); }

Json flags_json(const FallacyFlags& f) {
    Json j;
    j["post_selected"] = f.post_selected;
    j["ensemble_level"] = f.ensemble_level;
    j["distinct_ensembles"] = f.distinct_ensembles;
    return j;
}

std::string flags_text(const FallacyFlags& f) {
    std::string out = "caveats: ";
    out += f.post_selected ? "post-selected" : "not post-selected";
    out += f.ensemble_level ? ", ensemble-level frequencies (not properties of any single member)" : "";
    if (f.distinct_ensembles) {
        out += ", compares distinct sub-ensembles";
    }
    return out + "\n";
}

Json selection_json(const Selection& s) {
    Json j;
    j["observable"] = s.observable.name();
    j["label"] = s.label;
    return j;
}

std::size_t seq_width(const std::vector<OutcomeSequence>& seqs) {
    std::size_t w = 8;
    for (const auto& s : seqs) {
        w = std::max(w, seq_text(s).size() + 2);
    }
    return w;
}

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------- exact

Json exact_json(const Protocol& p, const std::vector<SequenceProbability>& dist) {
    Json j = header("exact");
    j["protocol_fingerprint"] = fingerprint(p);
    j["dim"] = p.dim();
    j["pre"] = selection_json(p.pre());
    Json mids = Json::array();
    for (const Observable& c : p.intermediates()) {
        mids.push_back(c.name());
    }
    j["intermediates"] = mids;
    j["post"] = selection_json(p.post());
    j["normalization"] = abl_normalization(p);
    Json rows = Json::array();
    double total = 0;
    for (const auto& sp : dist) {
        Json r;
        r["labels"] = labels_json(sp.sequence);
        r["probability"] = sp.probability;
        rows.push_back(r);
        total += sp.probability;
    }
    j["rows"] = rows;
    j["sum"] = total;
    return j;
}

std::string exact_text(const Protocol& p, const std::vector<SequenceProbability>& dist) {
    std::vector<OutcomeSequence> seqs;
    for (const auto& sp : dist) {
        seqs.push_back(sp.sequence);
    }
    const std::size_t w = seq_width(seqs);
    std::string out = fmt::format("ABL probabilities: pre {} {}, post {} {}, {} intermediate(s)\n",
                                  p.pre().observable.name(), p.pre().label, p.post().observable.name(),
                                  p.post().label, p.n());
    out += fmt::format("{:<{}}{:>14}\n", "sequence", w, "probability");
    double total = 0;
    for (const auto& sp : dist) {
        out += fmt::format("{:<{}}{:>14.10f}\n", seq_text(sp.sequence), w, sp.probability);
        total += sp.probability;
    }
    out += fmt::format("{:<{}}{:>14.10f}\n", "sum", w, total);
    return out;
}

// ------------------------------------------------------------------- mc

Json mc_json(const EnsembleStats& stats, const Comparison& cmp) {
    Json j = header("mc");
    j["protocol_fingerprint"] = stats.protocol_fingerprint;
    j["seed"] = stats.seed;
    j["mode"] = stats.postselected ? "postselected" : "no_postselect";
    j["n_total"] = stats.n_total;
    j["n_pre"] = stats.n_pre;
    j["n_selected"] = stats.n_selected;
    j["denominator"] = stats.postselected ? "n_selected" : "n_pre";
    j["exact_kind"] = cmp.exact_kind;
    if (!cmp.exact_error.empty()) {
        j["exact_error"] = cmp.exact_error;
    }
    Json rows = Json::array();
    for (const ComparisonRow& r : cmp.rows) {
        Json row;
        row["labels"] = labels_json(r.sequence);
        row["count"] = r.count;
        row["ratio"] = value_or_undefined(r.ratio);
        row["exact"] = value_or_undefined(r.exact);
        row["deviation"] = value_or_undefined(r.deviation);
        row["ci_halfwidth"] = value_or_undefined(r.ci_halfwidth);
        row["ci_pass"] = value_or_undefined(r.ci_pass);
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["all_pass"] = cmp.all_pass();
    return j;
}

std::string mc_text(const EnsembleStats& stats, const Comparison& cmp) {
    const std::size_t w = seq_width(stats.sequences);
    std::string out = fmt::format("Monte Carlo: N = {}, seed = {}, {}\n", stats.n_total, stats.seed,
                                  stats.postselected ? "post-selected on b" : "no post-selection (ratios over N_a)");
    out += fmt::format("N_a = {}, N_ab = {}\n", stats.n_pre, stats.n_selected);
    if (!cmp.exact_error.empty()) {
        out += "exact values unavailable: " + cmp.exact_error + "\n";
    }
    out += fmt::format("{:<{}}{:>10}{:>12}{:>12}{:>12}{:>8}\n", "sequence", w, "count", "ratio", cmp.exact_kind == "abl" ? "abl" : "exact",
                       "deviation", "3sigma");
    for (const ComparisonRow& r : cmp.rows) {
        out += fmt::format("{:<{}}{:>10}{:>12}{:>12}{:>12}{:>8}\n", seq_text(r.sequence), w, r.count, num(r.ratio),
                           num(r.exact), num(r.deviation), num(r.ci_pass));
    }
    return out;
}

// ------------------------------------------------------------------ aad

Json aad_json(const AadReport& report) {
    Json j = header("aad");
    Json branches = Json::array();
    for (const AadBranch& b : report.branches) {
        Json jb;
        jb["protocol"] = b.protocol;
        jb["ensemble"] = b.ensemble;
        jb["mid_label"] = b.mid_label;
        jb["conditional"] = value_or_undefined(b.conditional);
        jb["without_postselection"] = value_or_undefined(b.without_postselection);
        if (!b.error.empty()) {
            jb["error"] = b.error;
        }
        branches.push_back(jb);
    }
    j["branches"] = branches;
    j["distinct_ensembles"] = true;
    j["cross_ensemble_comparisons"] = report.cross_ensemble_comparisons;
    return j;
}

std::string aad_text(const AadReport& report) {
    std::string out = "Three protocols, three separate ensembles (values must not be combined):\n";
    out += fmt::format("{:<10}{:>10}{:>8}{:>14}{:>22}\n", "protocol", "ensemble", "mid", "conditional",
                       "without post-select");
    for (const AadBranch& b : report.branches) {
        out += fmt::format("{:<10}{:>10}{:>8}{:>14}{:>22}\n", b.protocol, b.ensemble, b.mid_label,
                           num(b.conditional), num(b.without_postselection));
        if (!b.error.empty()) {
            out += "  " + b.error + "\n";
        }
    }
    for (const auto& c : report.cross_ensemble_comparisons) {
        out += "cross-ensemble comparison: " + c + "\n";
    }
    return out;
}

// ------------------------------------------------------------ robertson

Json robertson_json(const RobertsonReport& r, const std::string& c_name, const std::string& d_name) {
    Json j = header("uncertainty");
    j["c"] = c_name;
    j["d"] = d_name;
    j["delta_c"] = r.delta_c;
    j["delta_d"] = r.delta_d;
    j["product"] = r.product;
    j["bound"] = r.bound;
    j["slack"] = kRobertsonSlack;
    j["satisfied"] = r.satisfied;
    return j;
}

std::string robertson_text(const RobertsonReport& r, const std::string& c_name, const std::string& d_name) {
    std::string out = fmt::format("Robertson bound for C = {}, D = {}\n", c_name, d_name);
    out += fmt::format("  delta C          {:.12g}\n", r.delta_c);
    out += fmt::format("  delta D          {:.12g}\n", r.delta_d);
    out += fmt::format("  product          {:.12g}\n", r.product);
    out += fmt::format("  |<[C,D]>| / 2    {:.12g}\n", r.bound);
    out += fmt::format("  satisfied        {}\n", r.satisfied ? "yes" : "NO");
    return out;
}

Json robertson_sweep_json(const RobertsonSweep& s) {
    Json j = header("uncertainty_sweep");
    j["triples"] = s.triples;
    j["max_dim"] = s.max_dim;
    j["seed"] = s.seed;
    j["violations"] = s.violations;
    j["worst_margin"] = s.worst_margin;
    j["slack"] = kRobertsonSlack;
    return j;
}

std::string robertson_sweep_text(const RobertsonSweep& s) {
    return fmt::format("Robertson sweep: {} random triples (dim <= {}, seed {}): {} violation(s), worst bound - product = {:.3e}\n",
                       s.triples, s.max_dim, s.seed, s.violations, s.worst_margin);
}

// --------------------------------------------------------------- verify

Json verify_json(const VerifyReport& report) {
    Json j = header("verify");
    j["seed"] = report.options.seed;
    j["max_dim"] = report.options.max_dim;
    j["max_n"] = report.options.max_n;
    j["instances"] = report.options.instances;
    if (report.options.only_instance) {
        j["only_instance"] = *report.options.only_instance;
    }
    j["skipped"] = report.skipped;
    Json checks = Json::array();
    for (const CheckResult& c : report.checks) {
        Json jc;
        jc["name"] = c.name;
        jc["tolerance"] = c.tolerance;
        jc["evaluated"] = c.evaluated;
        jc["failures"] = c.failures;
        jc["max_deviation"] = c.max_deviation;
        jc["passed"] = c.passed();
        checks.push_back(jc);
    }
    j["checks"] = checks;
    j["warnings"] = report.warnings;
    j["passed"] = report.passed();
    return j;
}

std::string verify_text(const VerifyReport& report) {
    std::string out;
    for (const auto& w : report.warnings) {
        out += "warning: " + w + "\n";
    }
    out += fmt::format("{:<28}{:>10}{:>10}{:>16}{:>12}\n", "check", "evaluated", "failures", "max deviation",
                       "tolerance");
    for (const CheckResult& c : report.checks) {
        out += fmt::format("{:<28}{:>10}{:>10}{:>16.3e}{:>12.0e}\n", c.name, c.evaluated, c.failures,
                           c.max_deviation, c.tolerance);
    }
    if (report.skipped > 0) {
        out += fmt::format("{} instance(s) skipped: impossible (a, b)\n", report.skipped);
    }
    out += report.passed() ? "PASS\n" : "FAIL\n";
    return out;
}

Json replay_json(const VerifyReport& report) {
    if (report.failures.empty()) {
        return Json::object();
    }
    const FailureRecord& f = report.failures.front();
    Json j = header("verify_replay");
    j["check"] = f.check;
    j["seed"] = f.seed;
    j["instance"] = f.instance;
    j["max_dim"] = report.options.max_dim;
    j["max_n"] = report.options.max_n;
    j["inject_fault"] = report.options.inject_fault;
    j["deviation"] = f.deviation;
    j["tolerance"] = f.tolerance;
    j["replay_command"] = fmt::format("abl_lab verify --seed {} --dims {} --max-n {} --instance {}", f.seed,
                                      report.options.max_dim, report.options.max_n, f.instance);
    j["protocol"] = f.protocol_text;
    j["failure_count"] = report.failures.size();
    return j;
}

// ------------------------------------------------------------ fallacies

Json berkson_json(const BerksonParams& params, std::uint64_t seed, const BerksonExact& exact,
                  const BerksonSample& sample) {
    Json j = header("fallacy");
    j["scenario"] = "berkson";
    j["params"] = {{"p_a", params.p_a}, {"p_b", params.p_b}, {"n", params.n}, {"seed", seed}};
    j["flags"] = flags_json(exact.flags);
    j["exact"] = {{"frac_a", exact.frac_a},
                  {"frac_b", exact.frac_b},
                  {"frac_ab", exact.frac_ab},
                  {"independence_gap", exact.independence_gap},
                  {"selected_fraction", exact.selected_fraction},
                  {"population_gap", exact.population_gap}};
    j["mc"] = {{"n", sample.n},
               {"n_a", sample.n_a},
               {"n_b", sample.n_b},
               {"n_ab", sample.n_ab},
               {"n_s", sample.n_s},
               {"frac_a", value_or_undefined(sample.frac_a)},
               {"frac_b", value_or_undefined(sample.frac_b)},
               {"frac_ab", value_or_undefined(sample.frac_ab)},
               {"independence_gap", value_or_undefined(sample.independence_gap)}};
    return j;
}

std::string berkson_text(const BerksonParams& params, std::uint64_t seed, const BerksonExact& exact,
                         const BerksonSample& sample) {
    std::string out = fmt::format("Berkson: p_A = {}, p_B = {}, N = {}, seed = {}\n", params.p_a, params.p_b,
                                  params.n, seed);
    out += fmt::format("N_A = {}, N_B = {}, N_AB = {}, N_S = {}\n", sample.n_a, sample.n_b, sample.n_ab, sample.n_s);
    out += fmt::format("{:<24}{:>12}{:>12}\n", "among S", "exact", "mc");
    out += fmt::format("{:<24}{:>12}{:>12}\n", "frac A", num(exact.frac_a), num(sample.frac_a));
    out += fmt::format("{:<24}{:>12}{:>12}\n", "frac B", num(exact.frac_b), num(sample.frac_b));
    out += fmt::format("{:<24}{:>12}{:>12}\n", "frac AB", num(exact.frac_ab), num(sample.frac_ab));
    out += fmt::format("{:<24}{:>12}{:>12}\n", "frac AB - frac A frac B", num(exact.independence_gap),
                       num(sample.independence_gap));
    out += fmt::format("gap in the whole population: {}\n", num(exact.population_gap));
    return out + flags_text(exact.flags);
}

Json coins_json(const CoinParams& params, std::uint64_t seed, const CoinResult& exact, const CoinResult& mc) {
    Json j = header("fallacy");
    j["scenario"] = "coins";
    j["params"] = {{"n_flips", params.n_flips},
                   {"darken_per_tail", params.darken_per_tail},
                   {"darkness_threshold", params.darkness_threshold},
                   {"p_heads", params.p_heads},
                   {"n", params.n},
                   {"seed", seed}};
    j["flags"] = flags_json(mc.flags);
    auto body = [](const CoinResult& r) {
        return Json{{"n_selected", r.n_selected},
                    {"selected_fraction", r.selected_fraction},
                    {"heads_frequency_in_selected", value_or_undefined(r.heads_frequency_in_selected)},
                    {"heads_frequency_all", r.heads_frequency_all}};
    };
    j["exact"] = body(exact);
    j["exact"].erase("n_selected");
    j["mc"] = body(mc);
    return j;
}

std::string coins_text(const CoinParams& params, std::uint64_t seed, const CoinResult& exact, const CoinResult& mc) {
    std::string out = fmt::format("Coins: {} flips, +{} darkness per tail, keep if darkness >= {}, N = {}, seed = {}\n",
                                  params.n_flips, params.darken_per_tail, params.darkness_threshold, params.n, seed);
    out += fmt::format("{:<28}{:>12}{:>12}\n", "", "exact", "mc");
    out += fmt::format("{:<28}{:>12}{:>12}\n", "selected fraction", num(exact.selected_fraction),
                       num(mc.selected_fraction));
    out += fmt::format("{:<28}{:>12}{:>12}\n", "heads frequency (selected)", num(exact.heads_frequency_in_selected),
                       num(mc.heads_frequency_in_selected));
    out += fmt::format("{:<28}{:>12}{:>12}\n", "heads frequency (all)", num(exact.heads_frequency_all),
                       num(mc.heads_frequency_all));
    return out + flags_text(mc.flags);
}

Json shutter_json(const ShutterParams& params, std::uint64_t seed, const ShutterResult& exact,
                  const ShutterResult& mc) {
    Json j = header("fallacy");
    j["scenario"] = "shutter";
    j["params"] = {{"n_holes", params.n_holes},
                   {"clang_prob_if_blocked", params.clang_prob_if_blocked},
                   {"n", params.n},
                   {"seed", seed}};
    j["flags"] = flags_json(mc.flags);
    j["exact"] = {{"blocked_fraction_in_selected", value_or_undefined(exact.blocked_fraction_in_selected)},
                  {"blocked_fraction_all", exact.blocked_fraction_all}};
    j["mc"] = {{"n_selected", mc.n_selected},
               {"n_blocked", mc.n_blocked},
               {"blocked_fraction_in_selected", value_or_undefined(mc.blocked_fraction_in_selected)},
               {"blocked_fraction_all", mc.blocked_fraction_all}};
    return j;
}

std::string shutter_text(const ShutterParams& params, std::uint64_t seed, const ShutterResult& exact,
                         const ShutterResult& mc) {
    std::string out = fmt::format("Shutter: {} holes, clang probability {} when blocked, N = {}, seed = {}\n",
                                  params.n_holes, params.clang_prob_if_blocked, params.n, seed);
    out += fmt::format("clangs heard: {}\n", mc.n_selected);
    out += fmt::format("{:<30}{:>12}{:>12}\n", "", "exact", "mc");
    out += fmt::format("{:<30}{:>12}{:>12}\n", "blocked fraction (clang heard)", num(exact.blocked_fraction_in_selected),
                       num(mc.blocked_fraction_in_selected));
    out += fmt::format("{:<30}{:>12}{:>12}\n", "blocked fraction (all stones)", num(exact.blocked_fraction_all),
                       num(mc.blocked_fraction_all));
    return out + flags_text(mc.flags);
}

Json boxes_json(std::uint64_t n, std::uint64_t seed, const BoxesResult& exact, const BoxesResult& mc) {
    Json j = header("fallacy");
    j["scenario"] = "boxes";
    j["params"] = {{"n", n}, {"seed", seed}};
    j["flags"] = flags_json(mc.flags);
    j["exact"] = {{"p_box1_given_checked1_green", value_or_undefined(exact.p_box1_given_checked1_green)},
                  {"p_box2_given_checked2_green", value_or_undefined(exact.p_box2_given_checked2_green)},
                  {"p_box1_unconditioned", exact.p_box1_unconditioned}};
    j["mc"] = {{"n_checked1_green", mc.n_checked1_green},
               {"n_checked2_green", mc.n_checked2_green},
               {"p_box1_given_checked1_green", value_or_undefined(mc.p_box1_given_checked1_green)},
               {"p_box2_given_checked2_green", value_or_undefined(mc.p_box2_given_checked2_green)},
               {"p_box1_unconditioned", mc.p_box1_unconditioned}};
    return j;
}

std::string boxes_text(std::uint64_t n, std::uint64_t seed, const BoxesResult& exact, const BoxesResult& mc) {
    std::string out = fmt::format("Three boxes: N = {}, seed = {}\n", n, seed);
    out += fmt::format("{:<36}{:>12}{:>12}\n", "", "exact", "mc");
    out += fmt::format("{:<36}{:>12}{:>12}\n", "P(box 1 | checked 1, green)", num(exact.p_box1_given_checked1_green),
                       num(mc.p_box1_given_checked1_green));
    out += fmt::format("{:<36}{:>12}{:>12}\n", "P(box 2 | checked 2, green)", num(exact.p_box2_given_checked2_green),
                       num(mc.p_box2_given_checked2_green));
    out += fmt::format("{:<36}{:>12}{:>12}\n", "P(box 1), no selection", num(exact.p_box1_unconditioned),
                       num(mc.p_box1_unconditioned));
    out += "The two conditional values come from disjoint sub-ensembles; they do not place the object in both boxes.\n";
    return out + flags_text(mc.flags);
}

}  // namespace abl
