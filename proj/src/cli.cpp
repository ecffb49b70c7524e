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

#include "abl_lab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "CLI11.hpp"
#include "abl_lab/abl.hpp"
#include "abl_lab/ensemble.hpp"
#include "abl_lab/errors.hpp"
#include "abl_lab/fallacies.hpp"
#include "abl_lab/protocol_file.hpp"
#include "abl_lab/report.hpp"
#include "abl_lab/verify.hpp"

namespace abl {

namespace {

struct Output {
    bool json = false;
    std::string path;
};

void add_output_flags(CLI::App* cmd, Output& o) {
    cmd->add_flag("--json", o.json, "Write the report as JSON");
    cmd->add_option("--out", o.path, "Write the report to this file instead of stdout");
}

void emit(const Output& o, const Json& doc, const std::string& text, std::ostream& out) {
    const std::string body = o.json ? dump(doc) : text;
    if (o.path.empty()) {
        out << body;
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file || !(file << body)) {
        throw std::runtime_error("cannot write '" + o.path + "'");
    }
}

struct Options {
    std::string file;
    Output output;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> seed;
    bool no_postselect = false;
    unsigned threads = 1;

    // verify
    std::size_t dims = 3;
    std::size_t max_n = 2;
    std::size_t instances = 200;
    std::optional<std::uint64_t> instance;
    bool inject_fault = false;
    std::string replay_path = "verify_replay.json";

    // uncertainty
    std::optional<std::size_t> sweep;
    std::size_t sweep_dim = 6;

    // fallacies
    BerksonParams berkson;
    CoinParams coins;
    ShutterParams shutter;
};

int cmd_exact(const Options& o, std::ostream& out) {
    const Protocol p = build_protocol(load_protocol_file(o.file));
    const auto dist = abl_distribution(p);
    emit(o.output, exact_json(p, dist), exact_text(p, dist), out);
    return kExitOk;
}

int cmd_mc(const Options& o, std::ostream& out) {
    const ProtocolFile file = load_protocol_file(o.file);
    const Protocol p = build_protocol(file);
    const std::uint64_t n = o.n.value_or(file.mc.n_trials.value_or(kDefaultTrials));
    if (n == 0) {
        throw ValidationError("--n must be at least 1");
    }
    const std::uint64_t seed = resolve_seed(o.seed, file.mc.seed);
    const EnsembleStats stats = run_ensemble(p, n, seed, {!o.no_postselect, o.threads});
    const Comparison cmp = compare_mc_exact(stats, p);
    emit(o.output, mc_json(stats, cmp), mc_text(stats, cmp), out);
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    VerifyOptions v;
    v.max_dim = o.dims;
    v.max_n = o.max_n;
    v.instances = o.instances;
    v.seed = resolve_seed(o.seed, std::nullopt);
    v.only_instance = o.instance;
    v.inject_fault = o.inject_fault;
    const VerifyReport report = run_verify(v);
    for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
    }
    emit(o.output, verify_json(report), verify_text(report), out);
    if (report.passed()) {
        return kExitOk;
    }
    std::ofstream replay(o.replay_path, std::ios::binary);
    if (replay && (replay << dump(replay_json(report)))) {
        err << "verification failed; first failing instance written to " << o.replay_path << "\n";
    } else {
        err << "verification failed; could not write replay file " << o.replay_path << "\n";
    }
    return kExitVerification;
}

int cmd_uncertainty(const Options& o, std::ostream& out) {
    if (o.sweep) {
        const RobertsonSweep s = robertson_sweep(*o.sweep, o.sweep_dim, resolve_seed(o.seed, std::nullopt));
        emit(o.output, robertson_sweep_json(s), robertson_sweep_text(s), out);
        return s.violations == 0 ? kExitOk : kExitVerification;
    }
    if (o.file.empty()) {
        throw ValidationError("uncertainty needs a protocol file or --sweep");
    }
    const ProtocolFile file = load_protocol_file(o.file);
    if (!file.uncertainty) {
        throw ValidationError("protocol file has no [uncertainty] section");
    }
    const UncertaintySection& u = *file.uncertainty;
    const Observable c = build_observable(file, u.c);
    const Observable d = build_observable(file, u.d);
    std::optional<QuantumState> state;
    if (u.state) {
        state = build_state(*u.state);
    } else if (file.protocol) {
        state = build_protocol(file).initial_state();
    } else {
        throw ValidationError("[uncertainty] needs 'state:' when the file has no [protocol]");
    }
    const RobertsonReport r = robertson_check(c, d, *state);
    emit(o.output, robertson_json(r, u.c, u.d), robertson_text(r, u.c, u.d), out);
    return kExitOk;
}

int cmd_aad(const Options& o, std::ostream& out) {
    const ProtocolFile file = load_protocol_file(o.file);
    const Protocol p = build_protocol(file);
    if (p.n() != 1) {
        throw ValidationError("aad needs a protocol with exactly one intermediate observable C");
    }
    if (!file.aad_mid) {
        throw ValidationError("aad needs an [aad] section with 'mid: <outcome of C>'");
    }
    const AadReport report = aad_compare(p.pre().observable, p.post().observable, p.intermediates().front(),
                                         p.pre().label, p.post().label, *file.aad_mid);
    emit(o.output, aad_json(report), aad_text(report), out);
    return kExitOk;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ValidationError(std::string(what) + " must be a non-negative integer, got '" + text + "'");
    }
    return value;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> from_file) {
    if (flag) {
        return *flag;
    }
    if (from_file) {
        return *from_file;
    }
    if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
        return parse_u64(env, kSeedEnvVar);
    }
    return kDefaultSeed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pre- and post-selected measurement laboratory", "abl_lab"};
    app.require_subcommand(1);
    Options o;

    auto* exact = app.add_subcommand("exact", "ABL probabilities of every intermediate sequence");
    exact->add_option("file", o.file, "Protocol file")->required()->check(CLI::ExistingFile);
    add_output_flags(exact, o.output);

    auto* mc = app.add_subcommand("mc", "Monte Carlo ensemble with pre- and post-selection culling");
    mc->add_option("file", o.file, "Protocol file")->required()->check(CLI::ExistingFile);
    mc->add_option("--n", o.n, "Number of trials (default: file, then 10000)");
    mc->add_option("--seed", o.seed, "Seed (default: file, then $ABL_LAB_SEED, then 12345)");
    mc->add_flag("--no-postselect", o.no_postselect, "Divide by N_a instead of culling on the post-selection");
    mc->add_option("--threads", o.threads, "Worker threads; results do not depend on this")
        ->check(CLI::Range(1u, 256u));
    add_output_flags(mc, o.output);

    auto* verify = app.add_subcommand("verify", "Randomized invariant and oracle sweeps");
    verify->add_option("--dims", o.dims, "Largest Hilbert dimension")->capture_default_str();
    verify->add_option("--max-n", o.max_n, "Largest number of intermediate measurements")->capture_default_str();
    verify->add_option("--instances", o.instances, "Number of random instances")->capture_default_str();
    verify->add_option("--seed", o.seed, "Seed (default: $ABL_LAB_SEED, then 12345)");
    verify->add_option("--instance", o.instance, "Replay a single instance index");
    verify->add_option("--replay", o.replay_path, "Where to write the failing instance")->capture_default_str();
    verify->add_flag("--inject-fault", o.inject_fault, "Drop a complex conjugation to exercise the harness")
        ->group("");
    add_output_flags(verify, o.output);

    auto* unc = app.add_subcommand("uncertainty", "Robertson bound for C and D from a protocol file");
    unc->add_option("file", o.file, "Protocol file with an [uncertainty] section")->check(CLI::ExistingFile);
    unc->add_option("--sweep", o.sweep, "Instead check this many random (C, D, state) triples");
    unc->add_option("--sweep-dim", o.sweep_dim, "Largest dimension for --sweep")->capture_default_str();
    unc->add_option("--seed", o.seed, "Seed for --sweep");
    add_output_flags(unc, o.output);

    auto* aad = app.add_subcommand("aad", "Compare the (A,C,B), (A,A,B) and (A,B,B) ensembles");
    aad->add_option("file", o.file, "Protocol file with one intermediate and an [aad] section")
        ->required()
        ->check(CLI::ExistingFile);
    add_output_flags(aad, o.output);

    auto* fallacy = app.add_subcommand("fallacy", "Classical post-selection examples");
    fallacy->require_subcommand(1);

    auto* berkson = fallacy->add_subcommand("berkson", "Collider bias between two independent conditions");
    berkson->add_option("--p-a", o.berkson.p_a, "P(A)")->capture_default_str();
    berkson->add_option("--p-b", o.berkson.p_b, "P(B)")->capture_default_str();
    berkson->add_option("--n", o.berkson.n, "Population size")->capture_default_str();
    berkson->add_option("--seed", o.seed, "Seed");
    add_output_flags(berkson, o.output);

    auto* coins = fallacy->add_subcommand("coins", "Coins that darken with every tail");
    coins->add_option("--flips", o.coins.n_flips, "Flips per coin")->capture_default_str();
    coins->add_option("--darken", o.coins.darken_per_tail, "Darkness added per tail")->capture_default_str();
    coins->add_option("--threshold", o.coins.darkness_threshold, "Keep coins at least this dark")
        ->capture_default_str();
    coins->add_option("--p-heads", o.coins.p_heads, "Probability of heads")->capture_default_str();
    coins->add_option("--n", o.coins.n, "Number of coins")->capture_default_str();
    coins->add_option("--seed", o.seed, "Seed");
    add_output_flags(coins, o.output);

    auto* shutter = fallacy->add_subcommand("shutter", "Stones thrown at a shutter with one covered hole");
    shutter->add_option("--holes", o.shutter.n_holes, "Number of holes")->capture_default_str();
    shutter->add_option("--clang-prob", o.shutter.clang_prob_if_blocked, "Clang probability when blocked")
        ->capture_default_str();
    shutter->add_option("--n", o.shutter.n, "Number of stones")->capture_default_str();
    shutter->add_option("--seed", o.seed, "Seed");
    add_output_flags(shutter, o.output);

    std::uint64_t boxes_n = kDefaultTrials;
    auto* boxes = fallacy->add_subcommand("boxes", "An object in one of three boxes and a two-box detector");
    boxes->add_option("--n", boxes_n, "Number of trials")->capture_default_str();
    boxes->add_option("--seed", o.seed, "Seed");
    add_output_flags(boxes, o.output);

    try {
        // CLI11 consumes the vector from the back.
        std::vector<std::string> rest(args.rbegin(), args.rend());
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*exact) return cmd_exact(o, out);
        if (*mc) return cmd_mc(o, out);
        if (*verify) return cmd_verify(o, out, err);
        if (*unc) return cmd_uncertainty(o, out);
        if (*aad) return cmd_aad(o, out);
        const std::uint64_t seed = resolve_seed(o.seed, std::nullopt);
        if (*berkson) {
            const BerksonExact ex = berkson_exact(o.berkson);
            const BerksonSample mcr = berkson_mc(o.berkson, seed);
            emit(o.output, berkson_json(o.berkson, seed, ex, mcr), berkson_text(o.berkson, seed, ex, mcr), out);
        } else if (*coins) {
            const CoinResult ex = coin_darkening_exact(o.coins);
            const CoinResult mcr = coin_darkening_mc(o.coins, seed);
            emit(o.output, coins_json(o.coins, seed, ex, mcr), coins_text(o.coins, seed, ex, mcr), out);
        } else if (*shutter) {
            const ShutterResult ex = shutter_exact(o.shutter);
            const ShutterResult mcr = shutter_mc(o.shutter, seed);
            emit(o.output, shutter_json(o.shutter, seed, ex, mcr), shutter_text(o.shutter, seed, ex, mcr), out);
        } else if (*boxes) {
            const BoxesResult ex = three_boxes_exact();
            const BoxesResult mcr = three_boxes_mc(boxes_n, seed);
            emit(o.output, boxes_json(boxes_n, seed, ex, mcr), boxes_text(boxes_n, seed, ex, mcr), out);
        }
        return kExitOk;
    } catch (const ImpossibleBranch& e) {
        err << "error: " << e.what() << "\n";
        return kExitImpossible;
    } catch (const std::invalid_argument& e) {
        // ValidationError and DimensionError
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argc > 0 ? argv + 1 : argv, argv + argc), out, err);
}

}  // namespace abl
