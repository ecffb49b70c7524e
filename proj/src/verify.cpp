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

#include "abl_lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "abl_lab/abl.hpp"
#include "abl_lab/errors.hpp"
#include "abl_lab/fullchain.hpp"
#include "abl_lab/protocol_file.hpp"
#include "abl_lab/random_models.hpp"

namespace abl {

namespace {

double max_diff(const std::vector<SequenceProbability>& x, const std::vector<double>& y) {
    double worst = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        worst = std::max(worst, std::abs(x[k].probability - y.at(k)));
    }
    return worst;
}

ComplexOperator conj(const ComplexOperator& x) {
    ComplexOperator out(x.dim());
    for (std::size_t r = 0; r < x.dim(); ++r) {
        for (std::size_t c = 0; c < x.dim(); ++c) {
            out(r, c) = std::conj(x(r, c));
        }
    }
    return out;
}

ComplexVector conj(const ComplexVector& v) {
    ComplexVector out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out[i] = std::conj(v[i]);
    }
    return out;
}

Observable conj(const Observable& o) {
    std::vector<Outcome> outcomes;
    for (const Outcome& out : o.outcomes()) {
        std::vector<ComplexVector> basis;
        for (const ComplexVector& v : out.basis) {
            basis.push_back(conj(v));
        }
        outcomes.push_back({out.label, out.eigenvalue, conj(out.projector), std::move(basis)});
    }
    return Observable(o.name(), conj(o.op()), std::move(outcomes));
}

std::string label_of(const Selection& s) { return s.label; }

}  // namespace

namespace checks {

double normalization(const Protocol& p) {
    double total = 0;
    for (const auto& sp : abl_distribution(p)) {
        total += sp.probability;
    }
    return std::abs(total - 1.0);
}

double reverse_ordering_symmetry(const Protocol& p) {
    const Protocol r = reverse_protocol(p);
    const auto forward = abl_distribution(p);
    double worst = 0;
    for (const auto& sp : forward) {
        worst = std::max(worst, std::abs(sp.probability - abl_probability(r, reversed(sp.sequence))));
    }
    return worst;
}

double oracle_equivalence(const Protocol& p, const Protocol& engine, std::optional<std::uint64_t> pointer_seed) {
    const ChainModel model(p, pointer_seed);
    const DeviceState device = device_state_given_obs(model, p, label_of(p.pre()), label_of(p.post()));
    return max_diff(conditional_distribution(engine), device.sequence_probabilities);
}

double device_rank_one(const Protocol& p) {
    const ChainModel model(p);
    return std::abs(device_state_given_obs(model, p, label_of(p.pre()), label_of(p.post())).second_eigenvalue);
}

double observer_born_rule(const Protocol& p) {
    const ChainModel model(p);
    const ComplexVector final_state = evolve_chain(model, p);
    return std::abs(observer_probability(model, final_state, p.pre_index(), p.post_index()) - overall_probability(p));
}

double marginalization(const Protocol& p) {
    double total = 0;
    for (const auto& sp : joint_distribution(p)) {
        total += sp.probability;
    }
    return std::abs(total - overall_probability(p));
}

double bayes(const Protocol& p) {
    const double overall = overall_probability(p);
    const auto joint = joint_distribution(p);
    const auto cond = conditional_distribution(p);
    double worst = 0;
    for (std::size_t k = 0; k < joint.size(); ++k) {
        worst = std::max(worst, std::abs(cond[k].probability * overall - joint[k].probability));
    }
    return worst;
}

double psi_independence(const Protocol& p, const QuantumState& psi1, const QuantumState& psi2) {
    const auto c1 = conditional_distribution(p.with_initial_state(psi1));
    const auto c2 = conditional_distribution(p.with_initial_state(psi2));
    double worst = 0;
    for (std::size_t k = 0; k < c1.size(); ++k) {
        worst = std::max(worst, std::abs(c1[k].probability - c2[k].probability));
    }
    return worst;
}

double robertson_shortfall(const Observable& c, const Observable& d, const QuantumState& state) {
    const RobertsonReport r = robertson_check(c, d, state);
    return std::max(0.0, r.bound - r.product);
}

}  // namespace checks

QuantumState random_overlapping_state(const Protocol& p, RandomStream& rng) {
    const ComplexVector& a = p.pre().observable.outcome(p.pre_index()).basis.front();
    for (;;) {
        ComplexVector psi = random_unit_vector(p.dim(), rng);
        if (std::norm(inner(a, psi)) > 1e-3) {
            return QuantumState::pure(std::move(psi));
        }
    }
}

Protocol conjugation_fault(const Protocol& p) {
    if (p.n() == 0) {
        return p;
    }
    std::vector<Observable> mids = p.intermediates();
    mids.front() = conj(mids.front());
    return Protocol(p.pre(), std::move(mids), p.post(), p.explicit_initial_state());
}

VerifyReport run_verify(const VerifyOptions& options) {
    if (options.max_dim < 1 || options.max_dim > 6) {
        throw ValidationError("verify: --dims must lie in [1, 6]");
    }
    if (options.max_n > 4) {
        throw ValidationError("verify: --max-n must be at most 4");
    }

    VerifyReport report;
    report.options = options;
    struct Spec {
        const char* name;
        double tol;
    };
    const Spec specs[] = {
        {"normalization", 1e-10},       {"reverse_ordering_symmetry", 1e-10}, {"oracle_equivalence", 1e-10},
        {"oracle_preselected_state", 1e-10}, {"device_rank_one", kRankOneTol}, {"observer_born_rule", 1e-12},
        {"marginalization", 1e-12},     {"bayes", 1e-12},                     {"psi_independence", 1e-10},
        {"robertson", kRobertsonSlack},
    };
    for (const Spec& s : specs) {
        report.checks.push_back({s.name, s.tol, 0, 0, 0.0});
    }
    if (options.instances == 0 && !options.only_instance) {
        report.warnings.push_back("no instances requested; every check passes vacuously");
        return report;
    }

    std::uint64_t begin = 0;
    std::uint64_t end = options.instances;
    if (options.only_instance) {
        begin = *options.only_instance;
        end = begin + 1;
    }
    const std::size_t min_dim = std::min<std::size_t>(2, options.max_dim);

    for (std::uint64_t i = begin; i < end; ++i) {
        RandomStream rng = RandomStream::stream(options.seed, i);
        const std::size_t dim = min_dim + static_cast<std::size_t>(rng.below(options.max_dim - min_dim + 1));
        const std::size_t n = static_cast<std::size_t>(rng.below(options.max_n + 1));
        const Protocol base = random_protocol(dim, n, rng);
        const QuantumState psi1 = random_overlapping_state(base, rng);
        const QuantumState psi2 = random_overlapping_state(base, rng);
        const std::uint64_t pointer_seed = rng.next_u64();
        const Observable rc = observable_from_operator(random_self_adjoint(dim, rng), "C");
        const Observable rd = observable_from_operator(random_self_adjoint(dim, rng), "D");
        const QuantumState rstate =
            rng.bernoulli(0.5) ? QuantumState::pure(random_unit_vector(dim, rng)) : random_mixed_state(dim, rng);

        const Protocol with_psi = base.with_initial_state(psi1);

        auto record = [&](std::size_t k, double deviation, const Protocol& p) {
            CheckResult& c = report.checks[k];
            ++c.evaluated;
            c.max_deviation = std::max(c.max_deviation, deviation);
            if (!(deviation <= c.tolerance)) {
                ++c.failures;
                report.failures.push_back(
                    {c.name, options.seed, i, deviation, c.tolerance, serialize(to_protocol_file(p))});
            }
        };
        // Independent of the protocol, so it runs even for impossible (a, b).
        record(9, checks::robertson_shortfall(rc, rd, rstate), base);

        if (abl_normalization(base) <= kImpossibleTol) {
            ++report.skipped;
            continue;
        }
        const Protocol engine = options.inject_fault ? conjugation_fault(with_psi) : with_psi;
        record(0, checks::normalization(base), base);
        record(1, checks::reverse_ordering_symmetry(base), base);
        record(2, checks::oracle_equivalence(with_psi, engine, pointer_seed), with_psi);
        record(3, checks::oracle_equivalence(base, base, std::nullopt), base);
        record(4, checks::device_rank_one(with_psi), with_psi);
        record(5, checks::observer_born_rule(with_psi), with_psi);
        record(6, checks::marginalization(with_psi), with_psi);
        record(7, checks::bayes(with_psi), with_psi);
        record(8, checks::psi_independence(base, psi1, psi2), base);
    }
    return report;
}

RobertsonSweep robertson_sweep(std::size_t triples, std::size_t max_dim, std::uint64_t seed) {
    if (max_dim < 2 || max_dim > 64) {
        throw ValidationError("robertson sweep: dimension bound must lie in [2, 64]");
    }
    RobertsonSweep s{triples, max_dim, seed, 0, -std::numeric_limits<double>::infinity()};
    for (std::size_t t = 0; t < triples; ++t) {
        RandomStream rng = RandomStream::stream(seed, t);
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.below(max_dim - 1));
        const Observable c = observable_from_operator(random_self_adjoint(dim, rng), "C");
        const Observable d = observable_from_operator(random_self_adjoint(dim, rng), "D");
        const QuantumState state =
            rng.bernoulli(0.5) ? QuantumState::pure(random_unit_vector(dim, rng)) : random_mixed_state(dim, rng);
        const RobertsonReport r = robertson_check(c, d, state);
        s.worst_margin = std::max(s.worst_margin, r.bound - r.product);
        s.violations += !r.satisfied;
    }
    if (triples == 0) {
        s.worst_margin = 0;
    }
    return s;
}

}  // namespace abl
