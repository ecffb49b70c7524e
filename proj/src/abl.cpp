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

#include "abl_lab/abl.hpp"

#include <algorithm>
#include <cmath>

#include "abl_lab/errors.hpp"

namespace abl {

namespace {

// tr(P X) for self-adjoint arguments, without forming the product.
double trace_of_product(const ComplexOperator& p, const ComplexOperator& x) {
    Complex sum = 0;
    const std::size_t n = p.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            sum += p(r, c) * x(c, r);
        }
    }
    return sum.real();
}

void sandwich_recurse(const Protocol& p, std::size_t level, const ComplexOperator& x, std::vector<double>& out) {
    if (level == p.n()) {
        out.push_back(std::max(0.0, trace_of_product(p.post_projector(), x)));
        return;
    }
    for (const Outcome& o : p.intermediates()[level].outcomes()) {
        sandwich_recurse(p, level + 1, o.projector * x * o.projector, out);
    }
}

// T_c[middle] for every sequence c, in for_each_sequence order. Prefix
// products are shared along the outcome tree.
std::vector<double> sandwich_traces(const Protocol& p, const ComplexOperator& middle) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(p.sequence_count()));
    sandwich_recurse(p, 0, middle, out);
    return out;
}

ComplexOperator selected_initial(const Protocol& p) {
    const ComplexOperator& pa = p.pre_projector();
    return pa * p.initial_state().density() * pa;
}

double sum(const std::vector<double>& values) {
    double total = 0;
    for (double v : values) {
        total += v;
    }
    return total;
}

std::vector<SequenceProbability> label_all(const Protocol& p, const std::vector<double>& values) {
    std::vector<SequenceProbability> out;
    out.reserve(values.size());
    std::size_t k = 0;
    for_each_sequence(p, [&](std::span<const std::size_t> idx) {
        out.push_back({sequence_from_indices(p, idx), values[k++]});
    });
    return out;
}

std::vector<double> normalized_or_throw(std::vector<double> values, const char* what) {
    const double total = sum(values);
    if (total <= kImpossibleTol) {
        throw ImpossibleBranch(std::string("impossible post-selection: ") + what + " is zero");
    }
    for (double& v : values) {
        v = std::min(1.0, v / total);
    }
    return values;
}

double standard_deviation(const Observable& obs, const QuantumState& state) {
    const std::vector<double> probs = outcome_distribution(state, obs);
    double mean = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        mean += probs[k] * obs.outcome(k).eigenvalue;
    }
    double variance = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double dev = obs.outcome(k).eigenvalue - mean;
        variance += probs[k] * dev * dev;
    }
    return std::sqrt(variance);
}

}  // namespace

double abl_normalization(const Protocol& p) { return sum(sandwich_traces(p, p.pre_projector())); }

double abl_probability(const Protocol& p, const OutcomeSequence& seq) {
    const std::vector<std::size_t> idx = resolve(p, seq);
    const auto probs = normalized_or_throw(sandwich_traces(p, p.pre_projector()), "H(a,b)");
    return probs[sequence_ordinal(p, idx)];
}

std::vector<SequenceProbability> abl_distribution(const Protocol& p) {
    return label_all(p, normalized_or_throw(sandwich_traces(p, p.pre_projector()), "H(a,b)"));
}

double overall_probability(const Protocol& p) { return std::min(1.0, sum(sandwich_traces(p, selected_initial(p)))); }

double joint_probability(const Protocol& p, const OutcomeSequence& seq) {
    const std::vector<std::size_t> idx = resolve(p, seq);
    return std::min(1.0, sandwich_traces(p, selected_initial(p))[sequence_ordinal(p, idx)]);
}

std::vector<SequenceProbability> joint_distribution(const Protocol& p) {
    return label_all(p, sandwich_traces(p, selected_initial(p)));
}

double conditional_probability(const Protocol& p, const OutcomeSequence& seq) {
    const std::vector<std::size_t> idx = resolve(p, seq);
    const auto probs = normalized_or_throw(sandwich_traces(p, selected_initial(p)), "overall probability of (a,b)");
    return probs[sequence_ordinal(p, idx)];
}

std::vector<SequenceProbability> conditional_distribution(const Protocol& p) {
    return label_all(p, normalized_or_throw(sandwich_traces(p, selected_initial(p)), "overall probability of (a,b)"));
}

std::vector<SequenceProbability> preselected_joint_distribution(const Protocol& p) {
    const double pa = born_probability(p.initial_state(), p.pre_projector());
    if (pa <= kImpossibleTol) {
        throw ImpossibleBranch("initial state is orthogonal to the pre-selected outcome");
    }
    std::vector<double> values = sandwich_traces(p, selected_initial(p));
    for (double& v : values) {
        v = std::min(1.0, v / pa);
    }
    return label_all(p, values);
}

double preselected_joint_probability(const Protocol& p, const OutcomeSequence& seq) {
    const std::vector<std::size_t> idx = resolve(p, seq);
    return preselected_joint_distribution(p)[sequence_ordinal(p, idx)].probability;
}

AadReport aad_compare(const Observable& A, const Observable& B, const Observable& C, const std::string& a,
                      const std::string& b, const std::string& c) {
    struct Spec {
        const char* name;
        const Observable* mid;
        std::string label;
    };
    const Spec specs[] = {{"(A,C,B)", &C, c}, {"(A,A,B)", &A, a}, {"(A,B,B)", &B, b}};

    AadReport report;
    std::vector<std::optional<Protocol>> protocols;
    int ensemble = 0;
    for (const Spec& s : specs) {
        AadBranch branch{s.name, s.label, ++ensemble, std::nullopt, std::nullopt, ""};
        std::optional<Protocol> protocol;
        try {
            protocol.emplace(Selection{A, a}, std::vector<Observable>{*s.mid}, Selection{B, b});
            const OutcomeSequence seq{{s.label}};
            branch.without_postselection = preselected_joint_probability(*protocol, seq);
            branch.conditional = abl_probability(*protocol, seq);
        } catch (const std::exception& e) {
            branch.error = e.what();
        }
        protocols.push_back(std::move(protocol));
        report.branches.push_back(std::move(branch));
    }
    for (std::size_t i = 0; i < protocols.size(); ++i) {
        for (std::size_t j = i + 1; j < protocols.size(); ++j) {
            const bool same = protocols[i] && protocols[j] && structurally_equal(*protocols[i], *protocols[j]);
            if (!same) {
                report.cross_ensemble_comparisons.push_back(report.branches[i].protocol + " vs " +
                                                            report.branches[j].protocol);
            }
        }
    }
    return report;
}

RobertsonReport robertson_check(const Observable& C, const Observable& D, const QuantumState& state) {
    if (C.dim() != D.dim() || C.dim() != state.dim()) {
        throw DimensionError("robertson_check: observables and state must share a dimension");
    }
    RobertsonReport r{};
    r.delta_c = standard_deviation(C, state);
    r.delta_d = standard_deviation(D, state);
    r.product = r.delta_c * r.delta_d;
    const ComplexOperator commutator = C.op() * D.op() - D.op() * C.op();
    r.bound = 0.5 * std::abs(trace(commutator * state.density()));
    r.satisfied = r.product >= r.bound - kRobertsonSlack;
    return r;
}

}  // namespace abl
