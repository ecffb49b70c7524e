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

// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any of them fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "abl_lab/abl.hpp"
#include "abl_lab/cli.hpp"
#include "abl_lab/ensemble.hpp"
#include "abl_lab/fallacies.hpp"
#include "abl_lab/protocol_file.hpp"
#include "abl_lab/random_models.hpp"
#include "abl_lab/report.hpp"
#include "abl_lab/verify.hpp"
#include "fmt/core.h"

using namespace abl;

namespace {

const std::string kData = ABL_LAB_DATA_DIR;

struct Verdict {
    bool pass;
    std::string detail;
};

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str()};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Protocol spin() { return Protocol({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_z(), "z-"}); }

Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const CliRun r = cli({"exact", kData + "/spin_zxyz.protocol", "--json"});
    if (r.code != 0) {
        return {false, fmt::format("exit code {}", r.code)};
    }
    const Json j = Json::parse(r.out);
    double worst = 0;
    for (const auto& row : j["rows"]) {
        worst = std::max(worst, std::abs(row["probability"].get<double>() - 0.25));
    }
    const double dt = seconds_since(t0);
    const bool ok = j["rows"].size() == 4 && worst <= 1e-12 && dt < 1.0;
    return {ok, fmt::format("4 sequences, max |p - 0.25| = {:.2e}, {:.3f} s", worst, dt)};
}

Verdict criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const Protocol p = spin();
    int n_ab_ok = 0, ratios_ok = 0;
    double longest = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto t1 = std::chrono::steady_clock::now();
        const EnsembleStats s = run_ensemble(p, 10000, seed);
        longest = std::max(longest, seconds_since(t1));
        n_ab_ok += s.n_selected >= 4700 && s.n_selected <= 5300;
        bool all = s.n_selected > 0;
        for (std::size_t k = 0; k < s.counts.size(); ++k) {
            all = all && std::abs(*s.ratio(k) - 0.25) <= 0.02;
        }
        ratios_ok += all;
    }
    const bool ok = n_ab_ok >= 95 && ratios_ok >= 95 && longest < 10.0;
    return {ok, fmt::format("N_ab in [4700, 5300] for {}/100 seeds, all ratios within 0.25 +/- 0.02 for {}/100, "
                            "slowest run {:.3f} s (total {:.2f} s)",
                            n_ab_ok, ratios_ok, longest, seconds_since(t0))};
}

Verdict criterion3() {
    std::string detail;
    bool ok = true;
    for (const auto& [file, mid] : {std::pair{"aad_xx.protocol", "x+"}, std::pair{"aad_zz.protocol", "z+"}}) {
        const Protocol p = build_protocol(load_protocol_file(kData + "/" + file));
        const double exact = abl_probability(p, {{mid}});
        const EnsembleStats post = run_ensemble(p, 10000, 12345);
        const EnsembleStats pre = run_ensemble(p, 10000, 12345, {.postselect = false});
        const std::size_t k = p.intermediates()[0].index_of(mid);
        const double mc_post = post.ratio(k).value_or(NAN);
        const double mc_pre = pre.ratio(k).value_or(NAN);
        ok = ok && std::abs(exact - 1.0) <= 1e-12 && mc_post == 1.0 && std::abs(mc_pre - 0.5) <= 0.02;
        detail += fmt::format("{}: exact {:.15f}, mc {:.4f}, no-postselect {:.4f}; ", file, exact, mc_post, mc_pre);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::size_t evaluated = 0, skipped = 0;
    for (std::uint64_t i = 0; evaluated < 500 && i < 5000; ++i) {
        RandomStream rng = RandomStream::stream(4, i);
        const Protocol p = random_protocol(2 + rng.below(3), 1 + rng.below(3), rng);
        if (abl_normalization(p) <= kImpossibleTol) {
            ++skipped;
            continue;
        }
        worst = std::max(worst, checks::reverse_ordering_symmetry(p));
        ++evaluated;
    }
    const double dt = seconds_since(t0);
    return {evaluated == 500 && worst <= 1e-10 && dt < 30.0,
            fmt::format("{} protocols ({} impossible skipped), max deviation {:.2e}, {:.2f} s", evaluated, skipped,
                        worst, dt)};
}

Verdict criterion5() {
    double worst_oracle = 0, worst_abl = 0;
    std::size_t evaluated = 0;
    for (std::uint64_t i = 0; evaluated < 200 && i < 2000; ++i) {
        RandomStream rng = RandomStream::stream(5, i);
        const Protocol base = random_protocol(2 + rng.below(2), rng.below(3), rng);
        if (abl_normalization(base) <= kImpossibleTol) {
            continue;
        }
        const Protocol p = base.with_initial_state(random_overlapping_state(base, rng));
        worst_oracle = std::max(worst_oracle, checks::oracle_equivalence(p, p, rng.next_u64()));
        // Psi = |a>: oracle, conditional and ABL all coincide.
        worst_abl = std::max(worst_abl, checks::oracle_equivalence(base, base, std::nullopt));
        const auto cond = conditional_distribution(base);
        const auto ablp = abl_distribution(base);
        for (std::size_t k = 0; k < cond.size(); ++k) {
            worst_abl = std::max(worst_abl, std::abs(cond[k].probability - ablp[k].probability));
        }
        ++evaluated;
    }
    return {evaluated == 200 && worst_oracle <= 1e-10 && worst_abl <= 1e-10,
            fmt::format("{} protocols, oracle vs engine {:.2e}, with Psi=|a> vs ABL {:.2e}", evaluated, worst_oracle,
                        worst_abl)};
}

Verdict criterion6() {
    double worst = 0;
    std::size_t evaluated = 0;
    for (std::uint64_t i = 0; evaluated < 100 && i < 1000; ++i) {
        RandomStream rng = RandomStream::stream(6, i);
        const Protocol p = random_protocol(2 + rng.below(3), 1 + rng.below(3), rng);
        if (abl_normalization(p) <= kImpossibleTol) {
            continue;
        }
        const QuantumState psi1 = random_overlapping_state(p, rng);
        const QuantumState psi2 = random_overlapping_state(p, rng);
        worst = std::max(worst, checks::psi_independence(p, psi1, psi2));
        ++evaluated;
    }
    return {evaluated == 100 && worst <= 1e-10,
            fmt::format("{} triples, max deviation {:.2e}", evaluated, worst)};
}

Verdict criterion7() {
    const BerksonExact e = berkson_exact({0.1, 0.1, 10000});
    const bool exact_ok = e.frac_a == 10.0 / 19.0 && e.frac_b == 10.0 / 19.0 && e.frac_ab == 1.0 / 19.0;
    int within = 0, ns_ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const BerksonSample s = berkson_mc({0.1, 0.1, 10000}, seed);
        ns_ok += s.n_s >= 1750 && s.n_s <= 2050;
        const double n = static_cast<double>(s.n_s);
        auto in3 = [&](std::optional<double> v, double p) {
            return v && std::abs(*v - p) <= 3 * std::sqrt(p * (1 - p) / n) + 1e-12;
        };
        within += in3(s.frac_a, e.frac_a) && in3(s.frac_b, e.frac_b) && in3(s.frac_ab, e.frac_ab);
    }
    return {exact_ok && within >= 95 && ns_ok >= 95,
            fmt::format("exact {} (10/19, 10/19, 1/19), mc within 3 sigma for {}/100 seeds, N_S in [1750, 2050] "
                        "for {}/100",
                        exact_ok ? "bit-exact" : "MISMATCH", within, ns_ok)};
}

Verdict criterion8() {
    const RobertsonSweep s = robertson_sweep(1000, 6, 8);
    const RobertsonReport eq = robertson_check(pauli_x(), pauli_y(), QuantumState::pure(ComplexVector({1, 0})));
    const double gap = std::abs(eq.product - eq.bound);
    return {s.violations == 0 && gap <= 1e-10,
            fmt::format("1000 triples at dim <= 6, {} violations (worst margin {:.2e}); sigma_x/sigma_y/|z+> "
                        "|product - bound| = {:.2e}",
                        s.violations, s.worst_margin, gap)};
}

Verdict criterion9() {
    const std::string f = kData + "/spin_zxyz.protocol";
    const CliRun a = cli({"mc", f, "--n", "10000", "--seed", "2024", "--json"});
    const CliRun b = cli({"mc", f, "--n", "10000", "--seed", "2024", "--json"});
    const CliRun c = cli({"mc", f, "--n", "10000", "--seed", "2024", "--threads", "8", "--json"});
    const CliRun d = cli({"exact", f, "--json"});
    const CliRun e = cli({"exact", f, "--json"});
    const bool ok = a.code == 0 && c.code == 0 && a.out == b.out && a.out == c.out && d.out == e.out;
    return {ok, fmt::format("mc JSON repeated run {}, serial vs 8 threads {}, exact JSON repeated run {}",
                            a.out == b.out ? "identical" : "DIFFERENT", a.out == c.out ? "identical" : "DIFFERENT",
                            d.out == e.out ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3,
                                                            criterion4, criterion5, criterion6,
                                                            criterion7, criterion8, criterion9};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << o.detail << "\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed)) << std::endl;
    return failed == 0 ? 0 : 1;
}
