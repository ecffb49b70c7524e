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

#include "abl_lab/protocol_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "abl_lab/errors.hpp"

namespace abl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

class Parser {
   public:
    explicit Parser(std::string_view text) : text_(text) {}

    ProtocolFile run() {
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            const auto end = std::min(text_.find('\n', pos), text_.size());
            ++line_no_;
            line(text_.substr(pos, end - pos));
            pos = end + 1;
        }
        flush_block();
        check();
        return std::move(file_);
    }

   private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("protocol file line " + std::to_string(line_no_) + ": " + msg);
    }

    void line(std::string_view raw) {
        // '#' never appears in labels, numbers or names, so it always starts a comment.
        const std::string_view body = trim(raw.substr(0, raw.find('#')));
        if (body.empty()) {
            return;
        }
        if (raw.front() == ' ' || raw.front() == '\t') {
            if (!block_sink_) {
                fail("unexpected indented line");
            }
            block_ += body;
            block_ += '\n';
            return;
        }
        flush_block();
        if (body.front() == '[') {
            if (body.back() != ']') {
                fail("malformed section header");
            }
            section_ = std::string(trim(body.substr(1, body.size() - 2)));
            static const std::set<std::string> known{"observables", "protocol", "mc", "aad", "uncertainty"};
            if (!known.contains(section_)) {
                fail("unknown section [" + section_ + "]");
            }
            if (!seen_sections_.insert(section_).second) {
                fail("duplicate section [" + section_ + "]");
            }
            if (section_ == "protocol") {
                file_.protocol.emplace();
            } else if (section_ == "uncertainty") {
                file_.uncertainty.emplace();
            }
            return;
        }
        const auto colon = body.find(':');
        if (colon == std::string_view::npos) {
            fail("expected 'key: value'");
        }
        const std::string key(trim(body.substr(0, colon)));
        const std::string value(trim(body.substr(colon + 1)));
        if (key.empty()) {
            fail("empty key");
        }
        if (!seen_keys_.insert(section_ + "/" + key).second) {
            fail("duplicate key '" + key + "'");
        }
        assign(key, value);
    }

    void assign(const std::string& key, const std::string& value) {
        if (section_.empty()) {
            if (key != "dim") {
                fail("unknown top-level key '" + key + "'");
            }
            file_.dim = static_cast<std::size_t>(number(value));
            if (file_.dim == 0) {
                fail("dim must be positive");
            }
        } else if (section_ == "observables") {
            observable(key, value);
        } else if (section_ == "protocol") {
            ProtocolSection& p = *file_.protocol;
            if (key == "pre") {
                p.pre = selection(value);
            } else if (key == "post") {
                p.post = selection(value);
            } else if (key == "intermediates") {
                p.intermediates = words(value);
            } else if (key == "initial_state") {
                state(value);
            } else {
                fail("unknown key '" + key + "' in [protocol]");
            }
        } else if (section_ == "mc") {
            if (key == "n_trials") {
                file_.mc.n_trials = number(value);
            } else if (key == "seed") {
                file_.mc.seed = number(value);
            } else {
                fail("unknown key '" + key + "' in [mc]");
            }
        } else if (section_ == "aad") {
            if (key != "mid" || value.empty()) {
                fail("[aad] takes a single 'mid: <label>'");
            }
            file_.aad_mid = value;
        } else if (section_ == "uncertainty") {
            UncertaintySection& u = *file_.uncertainty;
            if (key == "c") {
                u.c = value;
            } else if (key == "d") {
                u.d = value;
            } else if (key == "state") {
                state(value);
            } else {
                fail("unknown key '" + key + "' in [uncertainty]");
            }
        }
    }

    void observable(const std::string& key, const std::string& value) {
        const auto dot = key.find('.');
        if (dot != std::string::npos) {
            if (key.substr(dot) != ".labels") {
                fail("unknown observable attribute '" + key + "'");
            }
            ObservableSpec* spec = find_mutable(key.substr(0, dot));
            if (spec == nullptr) {
                fail("labels given before observable '" + key.substr(0, dot) + "'");
            }
            spec->labels = words(value);
            return;
        }
        file_.observables.push_back({key, "", std::nullopt, std::nullopt});
        const std::size_t index = file_.observables.size() - 1;
        if (value == "matrix") {
            open_block([this, index](const std::string& text) {
                file_.observables[index].matrix = operator_from_text(text);
            });
        } else if (is_builtin_observable(value)) {
            file_.observables[index].builtin = value;
        } else {
            fail("observable '" + key + "' must be a builtin (pauli_x, pauli_y, pauli_z, identity) or 'matrix'");
        }
    }

    SelectionSpec selection(const std::string& value) {
        const auto w = words(value);
        if (w.size() != 2) {
            fail("expected '<observable> <outcome label>'");
        }
        return {w[0], w[1]};
    }

    // The block arrives on the following lines, so the sink writes through a
    // pointer into the section being built.
    void state(const std::string& value) {
        StateSpec* target = nullptr;
        if (section_ == "protocol") {
            file_.protocol->initial_state.emplace();
            target = &*file_.protocol->initial_state;
        } else {
            file_.uncertainty->state.emplace();
            target = &*file_.uncertainty->state;
        }
        if (value == "vector") {
            open_block([target](const std::string& text) { target->vector = vector_from_text(text); });
        } else if (value == "density") {
            open_block([target](const std::string& text) { target->density = operator_from_text(text); });
        } else {
            fail("state must be 'vector' or 'density' followed by an indented block");
        }
    }

    std::uint64_t number(const std::string& value) {
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            fail("expected a non-negative integer, got '" + value + "'");
        }
        return out;
    }

    void open_block(std::function<void(const std::string&)> sink) {
        block_.clear();
        block_sink_ = std::move(sink);
        block_line_ = line_no_;
    }

    void flush_block() {
        if (!block_sink_) {
            return;
        }
        auto sink = std::move(block_sink_);
        block_sink_ = nullptr;
        try {
            sink(block_);
        } catch (const std::invalid_argument& e) {
            throw ValidationError("protocol file block starting at line " + std::to_string(block_line_) + ": " +
                                  e.what());
        }
    }

    ObservableSpec* find_mutable(const std::string& name) {
        for (auto& o : file_.observables) {
            if (o.name == name) {
                return &o;
            }
        }
        return nullptr;
    }

    void check() {
        if (file_.dim == 0) {
            throw ValidationError("protocol file: missing 'dim:'");
        }
        std::set<std::string> names;
        for (const auto& o : file_.observables) {
            if (!names.insert(o.name).second) {
                throw ValidationError("protocol file: observable '" + o.name + "' defined twice");
            }
            if (o.matrix && o.matrix->dim() != file_.dim) {
                throw DimensionError("protocol file: observable '" + o.name + "' has dimension " +
                                     std::to_string(o.matrix->dim()) + ", file has dim " +
                                     std::to_string(file_.dim));
            }
            if (o.builtin.empty() && !o.matrix) {
                throw ValidationError("protocol file: observable '" + o.name + "' has no matrix block");
            }
        }
        auto require = [&](const std::string& name, const char* where) {
            if (!names.contains(name)) {
                throw ValidationError(std::string("protocol file: ") + where + " refers to undefined observable '" +
                                      name + "'");
            }
        };
        if (file_.protocol) {
            const ProtocolSection& p = *file_.protocol;
            if (p.pre.observable.empty() || p.post.observable.empty()) {
                throw ValidationError("protocol file: [protocol] needs both 'pre:' and 'post:'");
            }
            require(p.pre.observable, "pre");
            require(p.post.observable, "post");
            for (const auto& c : p.intermediates) {
                require(c, "intermediates");
            }
        }
        if (file_.uncertainty) {
            if (file_.uncertainty->c.empty() || file_.uncertainty->d.empty()) {
                throw ValidationError("protocol file: [uncertainty] needs both 'c:' and 'd:'");
            }
            require(file_.uncertainty->c, "uncertainty c");
            require(file_.uncertainty->d, "uncertainty d");
        }
    }

    std::string_view text_;
    ProtocolFile file_;
    std::string section_;
    std::set<std::string> seen_sections_;
    std::set<std::string> seen_keys_;
    std::size_t line_no_ = 0;
    std::string block_;
    std::size_t block_line_ = 0;
    std::function<void(const std::string&)> block_sink_;
};

void write_block(std::ostringstream& out, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out << "  " << line << '\n';
    }
}

void write_state(std::ostringstream& out, const char* key, const StateSpec& s) {
    if (s.vector) {
        out << key << ": vector\n";
        write_block(out, to_text(*s.vector));
    } else if (s.density) {
        out << key << ": density\n";
        write_block(out, to_text(*s.density));
    }
}

std::string join(const std::vector<std::string>& w) {
    std::string out;
    for (const auto& s : w) {
        if (!out.empty()) {
            out += ' ';
        }
        out += s;
    }
    return out;
}

}  // namespace

const ObservableSpec* ProtocolFile::find(std::string_view name) const {
    for (const auto& o : observables) {
        if (o.name == name) {
            return &o;
        }
    }
    return nullptr;
}

ProtocolFile parse_protocol_file(std::string_view text) { return Parser(text).run(); }

ProtocolFile load_protocol_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open protocol file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_protocol_file(buf.str());
}

std::string serialize(const ProtocolFile& file) {
    std::ostringstream out;
    out << "dim: " << file.dim << '\n';
    if (!file.observables.empty()) {
        out << "\n[observables]\n";
        for (const auto& o : file.observables) {
            if (o.matrix) {
                out << o.name << ": matrix\n";
                write_block(out, to_text(*o.matrix));
            } else {
                out << o.name << ": " << o.builtin << '\n';
            }
            if (o.labels) {
                out << o.name << ".labels: " << join(*o.labels) << '\n';
            }
        }
    }
    if (file.protocol) {
        const ProtocolSection& p = *file.protocol;
        out << "\n[protocol]\n";
        out << "pre: " << p.pre.observable << ' ' << p.pre.label << '\n';
        out << "intermediates: " << join(p.intermediates) << '\n';
        out << "post: " << p.post.observable << ' ' << p.post.label << '\n';
        if (p.initial_state) {
            write_state(out, "initial_state", *p.initial_state);
        }
    }
    if (file.mc.n_trials || file.mc.seed) {
        out << "\n[mc]\n";
        if (file.mc.n_trials) {
            out << "n_trials: " << *file.mc.n_trials << '\n';
        }
        if (file.mc.seed) {
            out << "seed: " << *file.mc.seed << '\n';
        }
    }
    if (file.aad_mid) {
        out << "\n[aad]\nmid: " << *file.aad_mid << '\n';
    }
    if (file.uncertainty) {
        out << "\n[uncertainty]\n";
        out << "c: " << file.uncertainty->c << '\n';
        out << "d: " << file.uncertainty->d << '\n';
        if (file.uncertainty->state) {
            write_state(out, "state", *file.uncertainty->state);
        }
    }
    return out.str();
}

Observable build_observable(const ProtocolFile& file, std::string_view name) {
    const ObservableSpec* spec = file.find(name);
    if (spec == nullptr) {
        throw ValidationError("undefined observable '" + std::string(name) + "'");
    }
    if (spec->matrix) {
        return observable_from_operator(*spec->matrix, spec->name, kDefaultDegeneracyTol, spec->labels);
    }
    const Observable builtin = builtin_observable(spec->builtin, file.dim);
    if (spec->labels) {
        return observable_from_operator(builtin.op(), spec->name, kDefaultDegeneracyTol, spec->labels);
    }
    return Observable(spec->name, builtin.op(), builtin.outcomes());
}

QuantumState build_state(const StateSpec& spec) {
    if (spec.vector) {
        return QuantumState::pure(*spec.vector);
    }
    if (spec.density) {
        return QuantumState::mixed(*spec.density);
    }
    throw ValidationError("state block is empty");
}

Protocol build_protocol(const ProtocolFile& file) {
    if (!file.protocol) {
        throw ValidationError("protocol file has no [protocol] section");
    }
    const ProtocolSection& p = *file.protocol;
    std::vector<Observable> mids;
    for (const auto& name : p.intermediates) {
        mids.push_back(build_observable(file, name));
    }
    std::optional<QuantumState> initial;
    if (p.initial_state) {
        initial = build_state(*p.initial_state);
        if (initial->dim() != file.dim) {
            throw DimensionError("initial_state has dimension " + std::to_string(initial->dim()) + ", file has dim " +
                                 std::to_string(file.dim));
        }
    }
    return Protocol(Selection{build_observable(file, p.pre.observable), p.pre.label}, std::move(mids),
                    Selection{build_observable(file, p.post.observable), p.post.label}, std::move(initial));
}

ProtocolFile to_protocol_file(const Protocol& p) {
    ProtocolFile file;
    file.dim = p.dim();
    auto add = [&](const Observable& o) -> std::string {
        std::string name = o.name().empty() ? "obs" : o.name();
        for (int suffix = 2;; ++suffix) {
            const ObservableSpec* existing = file.find(name);
            if (existing == nullptr) {
                break;
            }
            if (existing->matrix == o.op()) {
                return name;
            }
            name = (o.name().empty() ? "obs" : o.name()) + "_" + std::to_string(suffix);
        }
        std::vector<std::string> labels;
        for (const Outcome& out : o.outcomes()) {
            labels.push_back(out.label);
        }
        file.observables.push_back({name, "", o.op(), std::move(labels)});
        return name;
    };
    ProtocolSection section;
    section.pre = {add(p.pre().observable), p.pre().label};
    for (const Observable& c : p.intermediates()) {
        section.intermediates.push_back(add(c));
    }
    section.post = {add(p.post().observable), p.post().label};
    if (const auto& s = p.explicit_initial_state()) {
        section.initial_state = s->is_pure() ? StateSpec{s->vector(), std::nullopt} : StateSpec{std::nullopt, s->density()};
    }
    file.protocol = std::move(section);
    return file;
}

}  // namespace abl
