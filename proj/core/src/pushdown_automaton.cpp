#include "drip/automata.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace drip {

namespace {

std::uint64_t config_key(State q, StackSymbol top) {
    return (static_cast<std::uint64_t>(q) << 32) | top;
}

const std::vector<std::size_t> kNoRules;

} // namespace

PushdownAutomaton::PushdownAutomaton() { stack_names_.push_back("#"); }

PushdownAutomaton::PushdownAutomaton(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
    stack_names_.push_back("#");
}

State PushdownAutomaton::add_state(std::string label) {
    final_.push_back(false);
    labels_.push_back(std::move(label));
    return static_cast<State>(final_.size() - 1);
}

StackSymbol PushdownAutomaton::add_stack_symbol(std::string name) {
    stack_names_.push_back(std::move(name));
    return static_cast<StackSymbol>(stack_names_.size() - 1);
}

void PushdownAutomaton::add_rule(PdaRule rule) {
    if (rule.from >= state_count() || rule.to >= state_count()) {
        throw SpecError("pushdown rule state out of range");
    }
    if (rule.input != kEpsilon && rule.input >= alphabet_.size()) {
        throw SpecError("pushdown rule symbol out of range");
    }
    if (rule.push.size() > 2) throw SpecError("pushdown rule pushes more than two symbols");
    for (auto g : rule.push) {
        if (g >= stack_symbol_count()) throw SpecError("pushdown rule stack symbol out of range");
    }
    if (rule.top >= stack_symbol_count()) throw SpecError("pushdown rule stack symbol out of range");
    if (rule.top == kBottom) {
        if (rule.push.empty() || rule.push.back() != kBottom) {
            throw SpecError("pushdown rule removes the bottom marker");
        }
    }
    for (std::size_t i = 0; i < rule.push.size(); ++i) {
        bool base = rule.top == kBottom && i + 1 == rule.push.size();
        if (rule.push[i] == kBottom && !base) {
            throw SpecError("pushdown rule pushes the bottom marker");
        }
    }
    rules_.push_back(std::move(rule));
    index_rule(rules_.size() - 1);
}

void PushdownAutomaton::index_rule(std::size_t r) {
    const auto& rule = rules_[r];
    auto order = [&](std::size_t i) {
        const auto in = rules_[i].input;
        return in == kEpsilon ? std::size_t{0} : alphabet_.rank(in) + 1;
    };
    auto& group = by_config_[config_key(rule.from, rule.top)];
    auto pos = std::upper_bound(group.begin(), group.end(), r,
                                [&](std::size_t a, std::size_t b) { return order(a) < order(b); });
    group.insert(pos, r);
    by_input_[{config_key(rule.from, rule.top), rule.input}].push_back(r);
}

const std::vector<std::size_t>& PushdownAutomaton::rules_from(State q, StackSymbol top) const {
    auto it = by_config_.find(config_key(q, top));
    return it == by_config_.end() ? kNoRules : it->second;
}

const std::vector<std::size_t>& PushdownAutomaton::rules_on(State q, StackSymbol top,
                                                            Symbol input) const {
    auto it = by_input_.find({config_key(q, top), input});
    return it == by_input_.end() ? kNoRules : it->second;
}

std::vector<State> PushdownAutomaton::finals() const {
    std::vector<State> out;
    for (State q = 0; q < state_count(); ++q) {
        if (final_[q]) out.push_back(q);
    }
    return out;
}

bool PushdownAutomaton::has_epsilon_rules() const {
    return std::any_of(rules_.begin(), rules_.end(),
                       [](const PdaRule& r) { return r.input == kEpsilon; });
}

bool PushdownAutomaton::deterministic() const {
    for (const auto& [_, group] : by_config_) {
        bool epsilon = false;
        std::set<Symbol> inputs;
        for (auto r : group) {
            const auto in = rules_[r].input;
            if (in == kEpsilon) {
                if (epsilon) return false;
                epsilon = true;
            } else if (!inputs.insert(in).second) {
                return false;
            }
        }
        if (epsilon && !inputs.empty()) return false;
    }
    return true;
}

namespace {

using Config = std::pair<State, std::vector<StackSymbol>>;

void apply(const PdaRule& rule, std::vector<StackSymbol>& stack) {
    stack.pop_back();
    for (auto it = rule.push.rbegin(); it != rule.push.rend(); ++it) stack.push_back(*it);
}

} // namespace

bool PushdownAutomaton::accepts(const std::vector<Symbol>& word, std::size_t step_limit) const {
    std::size_t steps = 0;
    auto closure = [&](std::set<Config> configs) {
        std::vector<Config> work(configs.begin(), configs.end());
        while (!work.empty() && steps < step_limit) {
            auto [q, stack] = work.back();
            work.pop_back();
            for (auto r : rules_on(q, stack.back(), kEpsilon)) {
                ++steps;
                auto next = stack;
                apply(rules_[r], next);
                Config c{rules_[r].to, std::move(next)};
                if (configs.insert(c).second) work.push_back(std::move(c));
            }
        }
        return configs;
    };
    auto current = closure({Config{initial_, {kBottom}}});
    for (auto a : word) {
        std::set<Config> next;
        for (const auto& [q, stack] : current) {
            for (auto r : rules_on(q, stack.back(), a)) {
                auto s = stack;
                apply(rules_[r], s);
                next.emplace(rules_[r].to, std::move(s));
            }
        }
        if (next.empty()) return false;
        current = closure(std::move(next));
    }
    return std::any_of(current.begin(), current.end(),
                       [&](const Config& c) { return final_[c.first]; });
}

bool PushdownAutomaton::accepts(const std::vector<std::string>& word) const {
    std::vector<Symbol> encoded;
    for (const auto& w : word) {
        auto s = alphabet_.find(w);
        if (!s) return false;
        encoded.push_back(*s);
    }
    return accepts(encoded);
}

PushdownAutomaton to_pushdown(const FiniteAutomaton& fa) {
    PushdownAutomaton pda(fa.alphabet());
    for (State q = 0; q < fa.state_count(); ++q) {
        pda.add_state(fa.label(q));
        pda.set_final(q, fa.is_final(q));
    }
    if (fa.initial().size() == 1) {
        pda.set_initial(*fa.initial().begin());
    } else {
        auto init = pda.add_state("init");
        pda.set_initial(init);
        for (auto q : fa.initial()) pda.add_rule({init, kBottom, kEpsilon, q, {kBottom}});
    }
    for (State q = 0; q < fa.state_count(); ++q) {
        for (const auto& [a, to] : fa.transitions(q)) pda.add_rule({q, kBottom, a, to, {kBottom}});
    }
    return pda;
}

std::optional<Witness> emptiness(const FiniteAutomaton& fa) { return emptiness(to_pushdown(fa)); }

Product intersect_with_pairs(const PushdownAutomaton& c, const FiniteAutomaton& d) {
    if (c.alphabet().names() != d.alphabet().names()) {
        throw AlphabetMismatch("pushdown and finite automaton alphabets differ");
    }
    if (!d.deterministic()) {
        throw NotDeterministic("intersection requires a deterministic finite automaton");
    }
    std::vector<Symbol> to_c(d.alphabet().size());
    for (Symbol b = 0; b < d.alphabet().size(); ++b) to_c[b] = c.alphabet().at(d.alphabet().name(b));

    Product out{PushdownAutomaton(c.alphabet()), {}};
    auto& x = out.pda;
    for (StackSymbol g = 1; g < c.stack_symbol_count(); ++g) x.add_stack_symbol(c.stack_name(g));

    std::unordered_map<std::uint64_t, State> index;
    std::deque<State> work;
    auto intern = [&](State qc, State qd) {
        auto [it, fresh] = index.emplace(config_key(qc, qd), 0);
        if (fresh) {
            std::string label;
            if (!c.label(qc).empty() || !d.label(qd).empty()) label = c.label(qc) + "|" + d.label(qd);
            it->second = x.add_state(std::move(label));
            x.set_final(it->second, c.is_final(qc) && d.is_final(qd));
            out.pairs.emplace_back(qc, qd);
            work.push_back(it->second);
        }
        return it->second;
    };
    x.set_initial(intern(c.initial(), *d.initial().begin()));
    while (!work.empty()) {
        const State p = work.front();
        work.pop_front();
        const auto [qc, qd] = out.pairs[p];
        for (StackSymbol g = 0; g < c.stack_symbol_count(); ++g) {
            for (auto r : c.rules_on(qc, g, kEpsilon)) {
                const auto& rule = c.rules()[r];
                x.add_rule({p, g, kEpsilon, intern(rule.to, qd), rule.push});
            }
            for (const auto& [b, to_d] : d.transitions(qd)) {
                for (auto r : c.rules_on(qc, g, to_c[b])) {
                    const auto& rule = c.rules()[r];
                    x.add_rule({p, g, rule.input, intern(rule.to, to_d), rule.push});
                }
            }
        }
    }
    return out;
}

PushdownAutomaton intersect(const PushdownAutomaton& c, const FiniteAutomaton& d) {
    return intersect_with_pairs(c, d).pda;
}

PushdownAutomaton complement(const PushdownAutomaton& a) {
    if (!a.deterministic() || a.has_epsilon_rules()) {
        throw NotDeterministic("complement requires a deterministic, epsilon-free pushdown automaton");
    }
    PushdownAutomaton c = a;
    const auto sink = c.add_state("sink");
    for (State q = 0; q < c.state_count(); ++q) {
        for (StackSymbol g = 0; g < c.stack_symbol_count(); ++g) {
            for (Symbol s = 0; s < c.alphabet().size(); ++s) {
                if (c.rules_on(q, g, s).empty()) c.add_rule({q, g, s, sink, {g}});
            }
        }
    }
    for (State q = 0; q < c.state_count(); ++q) c.set_final(q, !c.is_final(q));
    return intersect(c, frame_automaton(c.alphabet()));
}

std::string to_dot(const PushdownAutomaton& a, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (State q = 0; q < a.state_count(); ++q) {
        out << "  q" << q << " [label=\"" << (a.label(q).empty() ? std::to_string(q) : a.label(q))
            << "\"" << (a.is_final(q) ? " shape=doublecircle" : " shape=circle") << "];\n";
    }
    out << "  init [shape=point];\n  init -> q" << a.initial() << ";\n";
    for (const auto& r : a.rules()) {
        out << "  q" << r.from << " -> q" << r.to << " [label=\""
            << (r.input == kEpsilon ? std::string("eps") : a.alphabet().name(r.input)) << ", "
            << a.stack_name(r.top) << "/";
        for (std::size_t i = 0; i < r.push.size(); ++i) out << (i ? " " : "") << a.stack_name(r.push[i]);
        if (r.push.empty()) out << "pop";
        out << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace drip
