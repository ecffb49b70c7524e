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

#include "abl_lab/protocol.hpp"

#include <algorithm>
#include <cstdio>

#include "abl_lab/errors.hpp"

namespace abl {

namespace {

void require_complete(const Observable& obs, const char* role) {
    if (!obs.complete()) {
        throw ValidationError(std::string(role) + " observable '" + obs.name() +
                              "' is degenerate; ABL protocols require complete observables with rank-one "
                              "projectors");
    }
}

bool same_observable(const Observable& x, const Observable& y) {
    if (x.name() != y.name() || x.op() != y.op() || x.size() != y.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.outcome(i).label != y.outcome(i).label) {
            return false;
        }
    }
    return true;
}

bool same_state(const std::optional<QuantumState>& x, const std::optional<QuantumState>& y) {
    if (x.has_value() != y.has_value()) {
        return false;
    }
    if (!x) {
        return true;
    }
    if (x->is_pure() != y->is_pure()) {
        return false;
    }
    if (x->is_pure()) {
        const auto a = x->vector().entries();
        const auto b = y->vector().entries();
        return std::equal(a.begin(), a.end(), b.begin(), b.end());
    }
    return x->density() == y->density();
}

class Fnv1a {
   public:
    void add(std::string_view text) {
        for (unsigned char ch : text) {
            hash_ = (hash_ ^ ch) * 0x100000001B3ULL;
        }
        hash_ = (hash_ ^ 0xFF) * 0x100000001B3ULL;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

   private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

void add_observable(Fnv1a& h, const Observable& obs) {
    h.add(obs.name());
    h.add(to_text(obs.op()));
    for (const Outcome& o : obs.outcomes()) {
        h.add(o.label);
    }
}

}  // namespace

Protocol::Protocol(Selection pre, std::vector<Observable> intermediates, Selection post,
                   std::optional<QuantumState> initial_state)
    : pre_(std::move(pre)),
      intermediates_(std::move(intermediates)),
      post_(std::move(post)),
      initial_state_(std::move(initial_state)) {
    const std::size_t d = pre_.observable.dim();
    auto check_dim = [d](const Observable& obs) {
        if (obs.dim() != d) {
            throw DimensionError("observable '" + obs.name() + "' has dimension " + std::to_string(obs.dim()) +
                                 ", protocol has dimension " + std::to_string(d));
        }
    };
    require_complete(pre_.observable, "pre-selection");
    require_complete(post_.observable, "post-selection");
    check_dim(post_.observable);
    for (const Observable& c : intermediates_) {
        check_dim(c);
        require_complete(c, "intermediate");
    }
    pre_index_ = pre_.observable.index_of(pre_.label);
    post_index_ = post_.observable.index_of(post_.label);
    if (initial_state_ && initial_state_->dim() != d) {
        throw DimensionError("initial state has dimension " + std::to_string(initial_state_->dim()) +
                             ", protocol has dimension " + std::to_string(d));
    }
    if (sequence_count() > kMaxSequences) {
        throw ValidationError("protocol has " + std::to_string(sequence_count()) +
                              " intermediate outcome sequences; the limit is " + std::to_string(kMaxSequences));
    }
}

QuantumState Protocol::initial_state() const {
    if (initial_state_) {
        return *initial_state_;
    }
    return QuantumState::pure(pre_.observable.outcome(pre_index_).basis.front());
}

std::vector<std::size_t> Protocol::radices() const {
    std::vector<std::size_t> r;
    r.reserve(intermediates_.size());
    for (const Observable& c : intermediates_) {
        r.push_back(c.size());
    }
    return r;
}

std::uint64_t Protocol::sequence_count() const {
    std::uint64_t count = 1;
    for (const Observable& c : intermediates_) {
        count *= c.size();
        if (count > kMaxSequences) {
            return count;  // saturate early; the caller only compares to the limit
        }
    }
    return count;
}

Protocol Protocol::with_initial_state(std::optional<QuantumState> state) const {
    return Protocol(pre_, intermediates_, post_, std::move(state));
}

std::string to_string(const OutcomeSequence& seq) {
    std::string out = "(";
    for (std::size_t i = 0; i < seq.labels.size(); ++i) {
        out += (i ? "," : "") + seq.labels[i];
    }
    return out + ")";
}

std::vector<std::size_t> resolve(const Protocol& p, const OutcomeSequence& seq) {
    if (seq.labels.size() != p.n()) {
        throw ValidationError("outcome sequence has " + std::to_string(seq.labels.size()) +
                              " labels, protocol has " + std::to_string(p.n()) + " intermediate measurements");
    }
    std::vector<std::size_t> indices;
    indices.reserve(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
        indices.push_back(p.intermediates()[i].index_of(seq.labels[i]));
    }
    return indices;
}

OutcomeSequence sequence_from_indices(const Protocol& p, std::span<const std::size_t> indices) {
    OutcomeSequence seq;
    seq.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        seq.labels.push_back(p.intermediates().at(i).outcome(indices[i]).label);
    }
    return seq;
}

std::vector<OutcomeSequence> all_sequences(const Protocol& p) {
    std::vector<OutcomeSequence> out;
    for_each_sequence(p, [&](std::span<const std::size_t> idx) { out.push_back(sequence_from_indices(p, idx)); });
    return out;
}

std::size_t sequence_ordinal(const Protocol& p, std::span<const std::size_t> indices) {
    std::size_t ordinal = 0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        ordinal = ordinal * p.intermediates()[i].size() + indices[i];
    }
    return ordinal;
}

Protocol reverse_protocol(const Protocol& p) {
    std::vector<Observable> mids(p.intermediates().rbegin(), p.intermediates().rend());
    return Protocol(p.post(), std::move(mids), p.pre());
}

OutcomeSequence reversed(const OutcomeSequence& seq) {
    return {std::vector<std::string>(seq.labels.rbegin(), seq.labels.rend())};
}

bool structurally_equal(const Protocol& x, const Protocol& y) {
    if (!same_observable(x.pre().observable, y.pre().observable) || x.pre().label != y.pre().label ||
        !same_observable(x.post().observable, y.post().observable) || x.post().label != y.post().label ||
        x.n() != y.n()) {
        return false;
    }
    for (std::size_t i = 0; i < x.n(); ++i) {
        if (!same_observable(x.intermediates()[i], y.intermediates()[i])) {
            return false;
        }
    }
    return same_state(x.explicit_initial_state(), y.explicit_initial_state());
}

std::string fingerprint(const Protocol& p) {
    Fnv1a h;
    h.add("pre");
    add_observable(h, p.pre().observable);
    h.add(p.pre().label);
    for (const Observable& c : p.intermediates()) {
        h.add("mid");
        add_observable(h, c);
    }
    h.add("post");
    add_observable(h, p.post().observable);
    h.add(p.post().label);
    if (const auto& s = p.explicit_initial_state()) {
        h.add(s->is_pure() ? to_text(s->vector()) : to_text(s->density()));
    }
    return h.hex();
}

}  // namespace abl
