#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "drip/ir.hpp"
#include "drip/rfg.hpp"

namespace drip {

using Symbol = std::uint32_t;
using State = std::uint32_t;
using StackSymbol = std::uint32_t;

inline constexpr Symbol kEpsilon = std::numeric_limits<Symbol>::max();
inline constexpr StackSymbol kBottom = 0;

enum class SymbolKind { Start, Finish, Acquire, Release, GuardedRelease, Use, Other };

struct SymbolInfo {
    std::string name;
    SymbolKind kind = SymbolKind::Other;
    std::string op; // operation (acquire/release) or target (use)
    std::optional<Origin> origin;
};

/// Interned symbol table. Symbol ids are dense and stable.
class Alphabet {
  public:
    /// Returns the existing id when `name` is already present.
    Symbol add(SymbolInfo info);
    Symbol add(std::string name) { return add(SymbolInfo{std::move(name), SymbolKind::Other, {}, {}}); }

    [[nodiscard]] std::optional<Symbol> find(std::string_view name) const;
    [[nodiscard]] Symbol at(std::string_view name) const;
    [[nodiscard]] const SymbolInfo& info(Symbol s) const { return symbols_.at(s); }
    [[nodiscard]] const std::string& name(Symbol s) const { return symbols_.at(s).name; }
    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] std::set<std::string> names() const;
    /// Symbol ids sorted by name.
    [[nodiscard]] const std::vector<Symbol>& by_name() const noexcept { return sorted_; }
    /// Position of `s` in by_name().
    [[nodiscard]] std::size_t rank(Symbol s) const { return rank_.at(s); }

    [[nodiscard]] std::vector<Symbol> encode(const std::vector<std::string>& word) const;

  private:
    std::vector<SymbolInfo> symbols_;
    std::unordered_map<std::string, Symbol> ids_;
    std::vector<Symbol> sorted_;
    std::vector<std::size_t> rank_;
};

/// Alphabet {s, f} plus every acquire and release operation of the spec.
[[nodiscard]] Alphabet resource_alphabet(const ResourceSpec& spec);

/// Finite automaton with optional epsilon moves.
class FiniteAutomaton {
  public:
    FiniteAutomaton() = default;
    explicit FiniteAutomaton(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    State add_state(std::string label = {});
    void add_initial(State q) { initial_.insert(q); }
    void set_final(State q, bool final = true) { final_.at(q) = final; }
    void add_transition(State from, Symbol symbol, State to);
    void add_epsilon(State from, State to) { add_transition(from, kEpsilon, to); }

    [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] Alphabet& alphabet() noexcept { return alphabet_; }
    [[nodiscard]] std::size_t state_count() const noexcept { return final_.size(); }
    [[nodiscard]] const std::set<State>& initial() const noexcept { return initial_; }
    [[nodiscard]] bool is_final(State q) const { return final_.at(q); }
    [[nodiscard]] const std::vector<std::pair<Symbol, State>>& transitions(State q) const {
        return delta_.at(q);
    }
    [[nodiscard]] std::size_t transition_count() const;
    [[nodiscard]] const std::string& label(State q) const { return labels_.at(q); }

    /// One initial state, no epsilon moves, at most one successor per symbol.
    [[nodiscard]] bool deterministic() const;
    /// Successor for a deterministic automaton.
    [[nodiscard]] std::optional<State> step(State q, Symbol a) const;

    [[nodiscard]] std::set<State> epsilon_closure(std::set<State> states) const;
    [[nodiscard]] bool accepts(const std::vector<Symbol>& word) const;
    [[nodiscard]] bool accepts(const std::vector<std::string>& word) const;

    /// Subset construction over reachable subsets.
    [[nodiscard]] FiniteAutomaton determinize() const;
    /// Deterministic copy where every state has a move on every symbol (adds a sink if needed).
    [[nodiscard]] FiniteAutomaton completed() const;

  private:
    Alphabet alphabet_;
    std::set<State> initial_;
    std::vector<bool> final_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::pair<Symbol, State>>> delta_;
};

struct PdaRule {
    State from = 0;
    StackSymbol top = kBottom;
    Symbol input = kEpsilon;
    State to = 0;
    /// Replacement for `top`; push[0] becomes the new top. Empty pops.
    std::vector<StackSymbol> push;
};

/// Pushdown automaton accepting by final state. Stack symbol 0 is the bottom marker,
/// which is never popped.
class PushdownAutomaton {
  public:
    PushdownAutomaton();
    explicit PushdownAutomaton(Alphabet alphabet);

    State add_state(std::string label = {});
    void set_initial(State q) { initial_ = q; }
    void set_final(State q, bool final = true) { final_.at(q) = final; }
    StackSymbol add_stack_symbol(std::string name);
    /// Throws SpecError on malformed rules (bottom popped, bottom pushed above the base,
    /// more than two pushed symbols).
    void add_rule(PdaRule rule);

    [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] Alphabet& alphabet() noexcept { return alphabet_; }
    [[nodiscard]] std::size_t state_count() const noexcept { return final_.size(); }
    [[nodiscard]] State initial() const noexcept { return initial_; }
    [[nodiscard]] bool is_final(State q) const { return final_.at(q); }
    [[nodiscard]] std::vector<State> finals() const;
    [[nodiscard]] std::size_t stack_symbol_count() const noexcept { return stack_names_.size(); }
    [[nodiscard]] const std::string& stack_name(StackSymbol g) const { return stack_names_.at(g); }
    [[nodiscard]] const std::vector<PdaRule>& rules() const noexcept { return rules_; }
    /// Indices of the rules leaving (q, top), ordered by input symbol name (epsilon first).
    [[nodiscard]] const std::vector<std::size_t>& rules_from(State q, StackSymbol top) const;
    /// Indices of the rules leaving (q, top) on `input` (kEpsilon for epsilon rules).
    [[nodiscard]] const std::vector<std::size_t>& rules_on(State q, StackSymbol top,
                                                           Symbol input) const;
    [[nodiscard]] const std::string& label(State q) const { return labels_.at(q); }
    [[nodiscard]] bool has_epsilon_rules() const;

    /// At most one applicable rule per (state, top, input), and no input rule where an
    /// epsilon rule applies.
    [[nodiscard]] bool deterministic() const;

    /// Membership by exploring configurations; epsilon loops are bounded by `step_limit`.
    [[nodiscard]] bool accepts(const std::vector<Symbol>& word, std::size_t step_limit = 100000) const;
    [[nodiscard]] bool accepts(const std::vector<std::string>& word) const;

  private:
    void index_rule(std::size_t r);

    Alphabet alphabet_;
    State initial_ = 0;
    std::vector<bool> final_;
    std::vector<std::string> labels_;
    std::vector<std::string> stack_names_;
    std::vector<PdaRule> rules_;
    struct InputKey {
        std::uint64_t config;
        Symbol input;
        bool operator==(const InputKey&) const = default;
    };
    struct InputKeyHash {
        std::size_t operator()(const InputKey& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.config * 0x9E3779B97F4A7C15ULL ^ k.input);
        }
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_config_;
    std::unordered_map<InputKey, std::vector<std::size_t>, InputKeyHash> by_input_;
};

/// An accepted input with the visited states (initial state first, one entry per move)
/// and, per symbol, the IR origin carried by the alphabet.
struct Witness {
    std::vector<std::string> symbols;
    std::vector<State> states;
    std::vector<std::optional<Origin>> provenance;

    bool operator==(const Witness&) const = default;
};

/// Empty when the language is empty, otherwise a shortest accepted word.
[[nodiscard]] std::optional<Witness> emptiness(const PushdownAutomaton& pda);
/// A shortest accepted word per reachable final state.
[[nodiscard]] std::map<State, Witness> shortest_witnesses(const PushdownAutomaton& pda);

/// Stack-free pushdown view of a finite automaton.
[[nodiscard]] PushdownAutomaton to_pushdown(const FiniteAutomaton& fa);
[[nodiscard]] std::optional<Witness> emptiness(const FiniteAutomaton& fa);

using ResourceAutomaton = std::variant<PushdownAutomaton, FiniteAutomaton>;

/// Automaton accepting the leak-free framed operation sequences of the spec:
/// a pushdown automaton for reentrant resources, a finite automaton otherwise.
[[nodiscard]] ResourceAutomaton resource_automaton(const ResourceSpec& spec);
[[nodiscard]] bool accepts(const ResourceAutomaton& a, const std::vector<std::string>& word);

/// Accepts s.w.f iff `a` rejects it; every word outside the s...f frame is rejected.
/// Throws NotDeterministic when `a` is not deterministic (or, for pushdown automata,
/// uses epsilon moves).
[[nodiscard]] PushdownAutomaton complement(const PushdownAutomaton& a);
[[nodiscard]] FiniteAutomaton complement(const FiniteAutomaton& a);
/// Deterministic automaton for s . (alphabet minus s, f)* . f over `alphabet`.
[[nodiscard]] FiniteAutomaton frame_automaton(const Alphabet& alphabet);
[[nodiscard]] ResourceAutomaton complement(const ResourceAutomaton& a);

struct FlowOptions {
    /// Append "@procedure/block/index" to resource symbols so witnesses keep provenance.
    bool tag_origins = false;
    /// Emit "use:<target>" symbols for Use nodes instead of erasing them.
    bool keep_uses = false;
};

/// Deterministic automaton over the RFG's s-to-f paths read as operation sequences.
/// The alphabet always contains the spec's resource alphabet.
[[nodiscard]] FiniteAutomaton flow_automaton(const ResourceFlowGraph& g, const ResourceSpec& spec,
                                             FlowOptions options = {});

struct Product {
    PushdownAutomaton pda;
    std::vector<std::pair<State, State>> pairs; // product state -> (pda state, fa state)
};

/// Synchronised product. Throws AlphabetMismatch when the symbol names differ and
/// NotDeterministic when `d` is not deterministic.
[[nodiscard]] Product intersect_with_pairs(const PushdownAutomaton& c, const FiniteAutomaton& d);
[[nodiscard]] PushdownAutomaton intersect(const PushdownAutomaton& c, const FiniteAutomaton& d);
/// Product of two finite automata (both made deterministic first).
[[nodiscard]] FiniteAutomaton intersect(const FiniteAutomaton& a, const FiniteAutomaton& b);

[[nodiscard]] std::string to_dot(const FiniteAutomaton& a, const std::string& name);
[[nodiscard]] std::string to_dot(const PushdownAutomaton& a, const std::string& name);

} // namespace drip
