#include "drip/analysis.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace drip {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::NewLeak: return "NewLeak";
    case ViolationKind::UseAfterRelease: return "UseAfterRelease";
    case ViolationKind::DoubleRelease: return "DoubleRelease";
    }
    return "NewLeak";
}

namespace {

struct Symbols {
    std::vector<Symbol> all;
    std::vector<Symbol> acquires;
    std::set<std::string> guarded_ops;
};

Symbols classify(const Alphabet& sigma) {
    Symbols out;
    for (auto s : sigma.by_name()) {
        out.all.push_back(s);
        const auto& info = sigma.info(s);
        if (info.kind == SymbolKind::Acquire) out.acquires.push_back(s);
        if (info.kind == SymbolKind::GuardedRelease) out.guarded_ops.insert(info.op);
    }
    return out;
}

std::string origin_label(const SymbolInfo& info) {
    return info.origin ? info.origin->to_string() : info.name;
}

class Builder {
  public:
    Builder(const Alphabet& sigma, const ResourceSpec& spec, PropertyMode mode)
        : sigma_(sigma), spec_(spec), mode_(mode), symbols_(classify(sigma)) {
        result_.pda = PushdownAutomaton(sigma);
    }

    PropertyAutomaton build() {
        auto& pda = result_.pda;
        pre_ = pda.add_state("pre");
        pda.set_initial(pre_);
        done_ = pda.add_state("done");
        if (mode_.misuse) {
            err_uar_ = error_state(ViolationKind::UseAfterRelease);
            err_dr_ = error_state(ViolationKind::DoubleRelease);
        }
        if (spec_.reentrant()) {
            build_reentrant();
        } else {
            build_single();
        }
        if (mode_.misuse) {
            for (auto e : {err_uar_, err_dr_}) {
                for (StackSymbol g = 0; g < pda.stack_symbol_count(); ++g) {
                    for (auto a : symbols_.all) pda.add_rule({e, g, a, e, {g}});
                }
            }
        }
        return std::move(result_);
    }

  private:
    State error_state(ViolationKind kind) {
        auto q = result_.pda.add_state("err:" + std::string(to_string(kind)));
        result_.pda.set_final(q);
        result_.accepting[q] = {kind, std::nullopt};
        return q;
    }

    State leak_state(Symbol acquire) {
        const auto& info = sigma_.info(acquire);
        auto q = result_.pda.add_state("leak:" + origin_label(info));
        result_.pda.set_final(q);
        result_.accepting[q] = {ViolationKind::NewLeak, info.origin};
        return q;
    }

    void rule(State from, StackSymbol top, Symbol a, State to, std::vector<StackSymbol> push) {
        result_.pda.add_rule({from, top, a, to, std::move(push)});
    }

    // Reentrant: stack of acquired operations; the control state remembers the symbol of the
    // bottom-most element, i.e. the earliest unmatched acquire.
    void build_reentrant() {
        auto& pda = result_.pda;
        const auto ops = spec_.acquire_ops();
        std::map<std::string, std::pair<StackSymbol, StackSymbol>> stack_of; // op -> (bottom, above)
        for (const auto& op : ops) {
            auto bottom = pda.add_stack_symbol(op + "^");
            auto above = pda.add_stack_symbol(op);
            stack_of[op] = {bottom, above};
        }
        struct Top {
            StackSymbol symbol;
            std::string op;
            bool bottom;
        };
        std::vector<Top> tops;
        for (const auto& [op, g] : stack_of) {
            tops.push_back({g.first, op, true});
            tops.push_back({g.second, op, false});
        }

        const auto empty = pda.add_state("run");
        std::map<Symbol, State> run;
        std::map<Symbol, State> leak;
        for (auto x : symbols_.acquires) {
            run[x] = pda.add_state("run:" + origin_label(sigma_.info(x)));
            if (mode_.leaks) leak[x] = leak_state(x);
        }
        // drain[(op, bottom symbol or none)]
        std::map<std::pair<std::string, std::optional<Symbol>>, State> drain;
        for (const auto& r : symbols_.guarded_ops) {
            drain[{r, std::nullopt}] = pda.add_state("drain:" + r);
            for (auto x : symbols_.acquires) {
                drain[{r, x}] = pda.add_state("drain:" + r + ":" + origin_label(sigma_.info(x)));
            }
        }

        rule(pre_, kBottom, sigma_.at("s"), empty, {kBottom});

        for (auto a : symbols_.all) {
            const auto& info = sigma_.info(a);
            switch (info.kind) {
            case SymbolKind::Acquire:
                rule(empty, kBottom, a, run.at(a), {stack_of.at(info.op).first, kBottom});
                break;
            case SymbolKind::Release:
                if (mode_.misuse) rule(empty, kBottom, a, err_dr_, {kBottom});
                break;
            case SymbolKind::GuardedRelease:
                rule(empty, kBottom, a, empty, {kBottom});
                break;
            case SymbolKind::Use:
                if (mode_.misuse) rule(empty, kBottom, a, err_uar_, {kBottom});
                break;
            case SymbolKind::Finish:
                rule(empty, kBottom, a, done_, {kBottom});
                break;
            case SymbolKind::Start:
                break;
            case SymbolKind::Other:
                rule(empty, kBottom, a, empty, {kBottom});
                break;
            }
        }

        for (auto x : symbols_.acquires) {
            const State here = run.at(x);
            for (const auto& t : tops) {
                const State after_pop = t.bottom ? empty : here;
                for (auto a : symbols_.all) {
                    const auto& info = sigma_.info(a);
                    switch (info.kind) {
                    case SymbolKind::Acquire:
                        rule(here, t.symbol, a, here, {stack_of.at(info.op).second, t.symbol});
                        break;
                    case SymbolKind::Release:
                        if (spec_.matches(t.op, info.op)) {
                            rule(here, t.symbol, a, after_pop, {});
                        } else if (mode_.misuse) {
                            rule(here, t.symbol, a, err_dr_, {t.symbol});
                        }
                        break;
                    case SymbolKind::GuardedRelease:
                        if (spec_.matches(t.op, info.op)) {
                            auto next = t.bottom ? std::optional<Symbol>{} : std::optional<Symbol>{x};
                            rule(here, t.symbol, a, drain.at({info.op, next}), {});
                        } else {
                            rule(here, t.symbol, a, here, {t.symbol});
                        }
                        break;
                    case SymbolKind::Use:
                    case SymbolKind::Other:
                        rule(here, t.symbol, a, here, {t.symbol});
                        break;
                    case SymbolKind::Finish:
                        if (mode_.leaks) rule(here, t.symbol, a, leak.at(x), {t.symbol});
                        break;
                    case SymbolKind::Start:
                        break;
                    }
                }
            }
        }

        // A guarded release keeps releasing while a matching acquire is on top.
        for (const auto& [key, q] : drain) {
            const auto& [r, bottom] = key;
            if (!bottom) {
                rule(q, kBottom, kEpsilon, empty, {kBottom});
                continue;
            }
            const State back = run.at(*bottom);
            for (const auto& t : tops) {
                if (spec_.matches(t.op, r)) {
                    auto next = t.bottom ? std::optional<Symbol>{} : bottom;
                    rule(q, t.symbol, kEpsilon, drain.at({r, next}), {});
                } else {
                    rule(q, t.symbol, kEpsilon, back, {t.symbol});
                }
            }
        }
    }

    // Non-reentrant: at most one pending acquire; acquiring again while pending is not a
    // valid step.
    void build_single() {
        auto& pda = result_.pda;
        const auto idle = pda.add_state("idle");
        std::map<Symbol, State> pending;
        std::map<Symbol, State> leak;
        for (auto x : symbols_.acquires) {
            pending[x] = pda.add_state("held:" + origin_label(sigma_.info(x)));
            if (mode_.leaks) leak[x] = leak_state(x);
        }
        rule(pre_, kBottom, sigma_.at("s"), idle, {kBottom});
        for (auto a : symbols_.all) {
            const auto& info = sigma_.info(a);
            switch (info.kind) {
            case SymbolKind::Acquire:
                rule(idle, kBottom, a, pending.at(a), {kBottom});
                break;
            case SymbolKind::Release:
                if (mode_.misuse) rule(idle, kBottom, a, err_dr_, {kBottom});
                break;
            case SymbolKind::Use:
                if (mode_.misuse) rule(idle, kBottom, a, err_uar_, {kBottom});
                break;
            case SymbolKind::GuardedRelease:
            case SymbolKind::Other:
                rule(idle, kBottom, a, idle, {kBottom});
                break;
            case SymbolKind::Finish:
                rule(idle, kBottom, a, done_, {kBottom});
                break;
            case SymbolKind::Start:
                break;
            }
        }
        for (auto x : symbols_.acquires) {
            const State here = pending.at(x);
            const auto& held_op = sigma_.info(x).op;
            for (auto a : symbols_.all) {
                const auto& info = sigma_.info(a);
                switch (info.kind) {
                case SymbolKind::Acquire:
                case SymbolKind::Start:
                    break;
                case SymbolKind::Release:
                    if (spec_.matches(held_op, info.op)) {
                        rule(here, kBottom, a, idle, {kBottom});
                    } else if (mode_.misuse) {
                        rule(here, kBottom, a, err_dr_, {kBottom});
                    }
                    break;
                case SymbolKind::GuardedRelease:
                    rule(here, kBottom, a, spec_.matches(held_op, info.op) ? idle : here, {kBottom});
                    break;
                case SymbolKind::Use:
                case SymbolKind::Other:
                    rule(here, kBottom, a, here, {kBottom});
                    break;
                case SymbolKind::Finish:
                    if (mode_.leaks) rule(here, kBottom, a, leak.at(x), {kBottom});
                    break;
                }
            }
        }
    }

    const Alphabet& sigma_;
    const ResourceSpec& spec_;
    PropertyMode mode_;
    Symbols symbols_;
    PropertyAutomaton result_;
    State pre_ = 0;
    State done_ = 0;
    State err_uar_ = 0;
    State err_dr_ = 0;
};

bool shorter(const Witness& a, const Witness& b) {
    return std::make_tuple(a.symbols.size(), std::cref(a.symbols)) <
           std::make_tuple(b.symbols.size(), std::cref(b.symbols));
}

} // namespace

PropertyAutomaton property_automaton(const Alphabet& sigma, const ResourceSpec& spec,
                                     PropertyMode mode) {
    return Builder(sigma, spec, mode).build();
}

std::vector<Finding> check_graph(const ResourceFlowGraph& g, const ResourceSpec& spec,
                                 PropertyMode mode) {
    const auto flow = flow_automaton(g, spec, {true, mode.misuse});
    const auto property = property_automaton(flow.alphabet(), spec, mode);
    const auto product = intersect_with_pairs(property.pda, flow);
    std::map<std::pair<ViolationKind, std::optional<Origin>>, Witness> best;
    for (auto& [q, w] : shortest_witnesses(product.pda)) {
        const auto& acc = property.accepting.at(product.pairs[q].first);
        auto key = std::make_pair(acc.kind, acc.origin);
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(key, std::move(w));
        } else if (shorter(w, it->second)) {
            it->second = std::move(w);
        }
    }
    std::vector<Finding> out;
    for (auto& [key, w] : best) out.push_back({key.first, key.second, std::move(w)});
    return out;
}

std::vector<Witness> leaking_paths(const ResourceFlowGraph& g, const ResourceSpec& spec) {
    std::vector<Witness> out;
    for (auto& f : check_graph(g, spec, {true, false})) out.push_back(std::move(f.witness));
    return out;
}

std::vector<std::string> plain_symbols(const Witness& w) {
    std::vector<std::string> out;
    for (const auto& s : w.symbols) out.push_back(s.substr(0, s.find('@')));
    return out;
}

} // namespace drip
