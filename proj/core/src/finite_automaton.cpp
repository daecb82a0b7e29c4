#include "drip/automata.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace drip {

State FiniteAutomaton::add_state(std::string label) {
    final_.push_back(false);
    labels_.push_back(std::move(label));
    delta_.emplace_back();
    return static_cast<State>(final_.size() - 1);
}

void FiniteAutomaton::add_transition(State from, Symbol symbol, State to) {
    if (from >= state_count() || to >= state_count()) {
        throw Error("transition endpoint out of range");
    }
    if (symbol != kEpsilon && symbol >= alphabet_.size()) {
        throw Error("transition symbol out of range");
    }
    auto& out = delta_[from];
    std::pair<Symbol, State> t{symbol, to};
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

std::size_t FiniteAutomaton::transition_count() const {
    std::size_t n = 0;
    for (const auto& d : delta_) n += d.size();
    return n;
}

bool FiniteAutomaton::deterministic() const {
    if (initial_.size() != 1) return false;
    for (const auto& out : delta_) {
        std::set<Symbol> seen;
        for (const auto& [a, _] : out) {
            if (a == kEpsilon || !seen.insert(a).second) return false;
        }
    }
    return true;
}

std::optional<State> FiniteAutomaton::step(State q, Symbol a) const {
    for (const auto& [b, to] : delta_.at(q)) {
        if (b == a) return to;
    }
    return std::nullopt;
}

std::set<State> FiniteAutomaton::epsilon_closure(std::set<State> states) const {
    std::vector<State> work(states.begin(), states.end());
    while (!work.empty()) {
        auto q = work.back();
        work.pop_back();
        for (const auto& [a, to] : delta_[q]) {
            if (a == kEpsilon && states.insert(to).second) work.push_back(to);
        }
    }
    return states;
}

bool FiniteAutomaton::accepts(const std::vector<Symbol>& word) const {
    auto current = epsilon_closure(initial_);
    for (auto a : word) {
        std::set<State> next;
        for (auto q : current) {
            for (const auto& [b, to] : delta_[q]) {
                if (b == a) next.insert(to);
            }
        }
        current = epsilon_closure(std::move(next));
        if (current.empty()) return false;
    }
    return std::any_of(current.begin(), current.end(), [&](State q) { return final_[q]; });
}

bool FiniteAutomaton::accepts(const std::vector<std::string>& word) const {
    std::vector<Symbol> encoded;
    for (const auto& w : word) {
        auto s = alphabet_.find(w);
        if (!s) return false;
        encoded.push_back(*s);
    }
    return accepts(encoded);
}

FiniteAutomaton FiniteAutomaton::determinize() const {
    FiniteAutomaton out(alphabet_);
    std::map<std::vector<State>, State> index;
    std::deque<std::vector<State>> work;
    auto intern = [&](const std::set<State>& set) {
        std::vector<State> key(set.begin(), set.end());
        auto [it, fresh] = index.emplace(key, 0);
        if (fresh) {
            it->second = out.add_state();
            bool fin = std::any_of(key.begin(), key.end(), [&](State q) { return final_[q]; });
            out.set_final(it->second, fin);
            work.push_back(key);
        }
        return it->second;
    };
    out.add_initial(intern(epsilon_closure(initial_)));
    while (!work.empty()) {
        auto key = std::move(work.front());
        work.pop_front();
        const State from = index.at(key);
        std::map<Symbol, std::set<State>> moves;
        for (auto q : key) {
            for (const auto& [a, to] : delta_[q]) {
                if (a != kEpsilon) moves[a].insert(to);
            }
        }
        // visit symbols by name so state numbering is independent of symbol ids
        std::vector<Symbol> order;
        for (const auto& [a, _] : moves) order.push_back(a);
        std::sort(order.begin(), order.end(),
                  [&](Symbol x, Symbol y) { return alphabet_.rank(x) < alphabet_.rank(y); });
        for (auto a : order) {
            auto to = intern(epsilon_closure(std::move(moves[a])));
            out.add_transition(from, a, to);
        }
    }
    return out;
}

FiniteAutomaton FiniteAutomaton::completed() const {
    FiniteAutomaton d = deterministic() ? *this : determinize();
    std::optional<State> sink;
    const auto n = static_cast<State>(d.state_count());
    for (State q = 0; q < n; ++q) {
        for (Symbol a = 0; a < d.alphabet_.size(); ++a) {
            if (d.step(q, a)) continue;
            if (!sink) {
                sink = d.add_state("sink");
                for (Symbol b = 0; b < d.alphabet_.size(); ++b) d.add_transition(*sink, b, *sink);
            }
            d.add_transition(q, a, *sink);
        }
    }
    return d;
}

FiniteAutomaton frame_automaton(const Alphabet& alphabet) {
    FiniteAutomaton frame(alphabet);
    auto q0 = frame.add_state("frame0");
    auto q1 = frame.add_state("frame1");
    auto q2 = frame.add_state("frame2");
    frame.add_initial(q0);
    frame.set_final(q2);
    for (Symbol a = 0; a < alphabet.size(); ++a) {
        const auto& name = alphabet.name(a);
        if (name == "s") {
            frame.add_transition(q0, a, q1);
        } else if (name == "f") {
            frame.add_transition(q1, a, q2);
        } else {
            frame.add_transition(q1, a, q1);
        }
    }
    return frame;
}

FiniteAutomaton intersect(const FiniteAutomaton& a, const FiniteAutomaton& b) {
    if (a.alphabet().names() != b.alphabet().names()) {
        throw AlphabetMismatch("finite automata have different alphabets");
    }
    const auto da = a.deterministic() ? a : a.determinize();
    const auto db = b.deterministic() ? b : b.determinize();
    FiniteAutomaton out(da.alphabet());
    std::map<std::pair<State, State>, State> index;
    std::deque<std::pair<State, State>> work;
    auto intern = [&](std::pair<State, State> p) {
        auto [it, fresh] = index.emplace(p, 0);
        if (fresh) {
            it->second = out.add_state(da.label(p.first) + "|" + db.label(p.second));
            out.set_final(it->second, da.is_final(p.first) && db.is_final(p.second));
            work.push_back(p);
        }
        return it->second;
    };
    out.add_initial(intern({*da.initial().begin(), *db.initial().begin()}));
    while (!work.empty()) {
        auto p = work.front();
        work.pop_front();
        const auto from = index.at(p);
        for (const auto& [sym, to_a] : da.transitions(p.first)) {
            auto sb = db.alphabet().at(da.alphabet().name(sym));
            if (auto to_b = db.step(p.second, sb)) out.add_transition(from, sym, intern({to_a, *to_b}));
        }
    }
    return out;
}

FiniteAutomaton complement(const FiniteAutomaton& a) {
    if (!a.deterministic()) {
        throw NotDeterministic("complement requires a deterministic finite automaton");
    }
    auto c = a.completed();
    for (State q = 0; q < c.state_count(); ++q) c.set_final(q, !c.is_final(q));
    return intersect(c, frame_automaton(c.alphabet()));
}

std::string to_dot(const FiniteAutomaton& a, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (State q = 0; q < a.state_count(); ++q) {
        out << "  q" << q << " [label=\"" << (a.label(q).empty() ? std::to_string(q) : a.label(q))
            << "\"" << (a.is_final(q) ? " shape=doublecircle" : " shape=circle") << "];\n";
    }
    for (auto q : a.initial()) out << "  init" << q << " [shape=point];\n  init" << q << " -> q" << q << ";\n";
    for (State q = 0; q < a.state_count(); ++q) {
        for (const auto& [sym, to] : a.transitions(q)) {
            out << "  q" << q << " -> q" << to << " [label=\""
                << (sym == kEpsilon ? std::string("eps") : a.alphabet().name(sym)) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace drip
