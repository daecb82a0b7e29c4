#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "fixtures.hpp"

using namespace drip;

namespace {

using Word = std::vector<std::string>;

Word w(const std::string& text) { return test::words(text); }

// Leak-free membership computed straight from the spec: matched releases on a stack
// (reentrant) or strictly alternating acquire/release (non-reentrant), inside s...f.
bool leak_free(const Word& word, const ResourceSpec& spec) {
    if (word.size() < 2 || word.front() != "s" || word.back() != "f") return false;
    std::vector<std::string> held;
    for (std::size_t i = 1; i + 1 < word.size(); ++i) {
        const auto& op = word[i];
        if (spec.is_acquire(op) && (spec.reentrant() || held.empty())) {
            held.push_back(op);
        } else if (spec.is_release(op) && !held.empty() && spec.matches(held.back(), op)) {
            held.pop_back();
        } else {
            return false;
        }
    }
    return held.empty();
}

PushdownAutomaton as_pushdown(const ResourceAutomaton& a) {
    if (const auto* p = std::get_if<PushdownAutomaton>(&a)) return *p;
    return to_pushdown(std::get<FiniteAutomaton>(a));
}

std::vector<std::string> symbol_names(const Alphabet& a) {
    std::vector<std::string> out;
    for (auto s : a.by_name()) out.push_back(a.name(s));
    return out;
}

// Every word of length <= n over the given symbols.
void each_word(const std::vector<std::string>& sigma, std::size_t n,
               const std::function<void(const Word&)>& visit) {
    Word cur;
    std::function<void()> rec = [&] {
        visit(cur);
        if (cur.size() == n) return;
        for (const auto& a : sigma) {
            cur.push_back(a);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

ResourceFlowGraph graph_of(std::vector<BasicBlock> blocks, const ResourceSpec& spec) {
    Procedure p;
    p.name = "p";
    p.entry = blocks.front().id;
    p.blocks = std::move(blocks);
    return build_rfg(p, spec, false);
}

std::set<Word> accepted_words(const FiniteAutomaton& fa, std::size_t n) {
    std::set<Word> out;
    each_word(symbol_names(fa.alphabet()), n, [&](const Word& word) {
        if (fa.accepts(word)) out.insert(word);
    });
    return out;
}

} // namespace

TEST(ResourceAutomaton, WifiLockIsPushdown) {
    const auto spec = test::resource("WifiLock");
    const auto a = resource_automaton(spec);
    ASSERT_TRUE(std::holds_alternative<PushdownAutomaton>(a));
    EXPECT_TRUE(accepts(a, w("s acquire acquire release release f")));
    EXPECT_TRUE(accepts(a, w("s f")));
    EXPECT_FALSE(accepts(a, w("s acquire f")));
    EXPECT_FALSE(accepts(a, w("s release f")));
    EXPECT_FALSE(accepts(a, w("acquire release")));
}

TEST(ResourceAutomaton, MediaPlayerIsFinite) {
    const auto spec = test::resource("MediaPlayer");
    const auto a = resource_automaton(spec);
    ASSERT_TRUE(std::holds_alternative<FiniteAutomaton>(a));
    EXPECT_TRUE(std::get<FiniteAutomaton>(a).deterministic());
    EXPECT_TRUE(accepts(a, w("s new release start stop f")));
    EXPECT_FALSE(accepts(a, w("s new start stop f")));
    EXPECT_TRUE(accepts(a, w("s f")));
}

TEST(ResourceAutomaton, EveryBundledSpecAcceptsEmptyUsage) {
    for (const auto& spec : test::all_resources()) {
        EXPECT_TRUE(accepts(resource_automaton(spec), w("s f"))) << spec.name();
    }
}

TEST(ResourceAutomaton, MembershipMatchesStackSimulation) {
    for (const auto& spec : test::all_resources()) {
        const auto a = resource_automaton(spec);
        auto sigma = symbol_names(resource_alphabet(spec));
        each_word(sigma, 6, [&](const Word& word) {
            EXPECT_EQ(accepts(a, word), leak_free(word, spec)) << spec.name();
        });
    }
}

TEST(ResourceAutomaton, MediaPlayerMatchesRegexExhaustively) {
    const auto a = resource_automaton(test::resource("MediaPlayer"));
    const std::regex language("s( new release| start stop)* f");
    const auto sigma = symbol_names(resource_alphabet(test::resource("MediaPlayer")));
    std::size_t n = 0;
    each_word(sigma, 8, [&](const Word& word) {
        std::string text;
        for (const auto& s : word) text += (text.empty() ? "" : " ") + s;
        ASSERT_EQ(accepts(a, word), std::regex_match(text, language)) << text;
        ++n;
    });
    EXPECT_GT(n, 390000u);
}

TEST(Complement, MediaPlayerExamples) {
    const auto c = complement(resource_automaton(test::resource("MediaPlayer")));
    EXPECT_TRUE(accepts(c, w("s new f")));
    EXPECT_FALSE(accepts(c, w("s f")));
    EXPECT_FALSE(accepts(c, w("new f")));
}

TEST(Complement, DualityOnRandomStrings) {
    std::mt19937_64 rng(7);
    for (const auto& spec : test::all_resources()) {
        const auto a = resource_automaton(spec);
        const auto c = complement(a);
        const auto cc = complement(c);
        auto sigma = symbol_names(resource_alphabet(spec));
        std::erase_if(sigma, [](const std::string& a) { return a == "s" || a == "f"; });
        for (int i = 0; i < 200; ++i) {
            Word body;
            const auto len = std::uniform_int_distribution<int>(0, 8)(rng);
            for (int k = 0; k < len; ++k) {
                body.push_back(sigma[std::uniform_int_distribution<std::size_t>(0, sigma.size() - 1)(rng)]);
            }
            Word framed{"s"};
            framed.insert(framed.end(), body.begin(), body.end());
            framed.push_back("f");
            EXPECT_NE(accepts(a, framed), accepts(c, framed)) << spec.name();
            EXPECT_EQ(accepts(cc, framed), accepts(a, framed)) << spec.name();
            EXPECT_FALSE(accepts(c, body)) << spec.name();
        }
    }
}

TEST(Complement, RejectsNondeterministicInput) {
    FiniteAutomaton fa(resource_alphabet(test::resource("MediaPlayer")));
    const auto q0 = fa.add_state();
    const auto q1 = fa.add_state();
    fa.add_initial(q0);
    fa.add_transition(q0, fa.alphabet().at("s"), q0);
    fa.add_transition(q0, fa.alphabet().at("s"), q1);
    EXPECT_THROW((void)complement(fa), NotDeterministic);
}

TEST(FlowAutomaton, IrcCloudOnCreate) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = test::fixture("irccloud");
    const auto fa = flow_automaton(build_rfg(app.procedure("onCreate"), spec, false), spec);
    EXPECT_TRUE(fa.deterministic());
    EXPECT_EQ(accepted_words(fa, 5), std::set<Word>{w("s new f")});
}

TEST(FlowAutomaton, EmptyProcedure) {
    const auto spec = test::resource("MediaPlayer");
    const auto fa = flow_automaton(graph_of({{"b0", {Statement::ret()}, {}}}, spec), spec);
    EXPECT_EQ(accepted_words(fa, 4), std::set<Word>{w("s f")});
}

TEST(FlowAutomaton, DiamondAcceptsBothArms) {
    const auto spec = test::resource("MediaPlayer");
    const auto g = graph_of({{"b0", {}, {"b1", "b2"}},
                             {"b1", {Statement::acquire("new", "p")}, {"b3"}},
                             {"b2", {Statement::release("release", "p")}, {"b3"}},
                             {"b3", {Statement::ret()}, {}}},
                            spec);
    EXPECT_EQ(accepted_words(flow_automaton(g, spec), 5),
              (std::set<Word>{w("s new f"), w("s release f")}));
}

TEST(Intersect, IrcCloudAcceptsSingleLeak) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = test::fixture("irccloud");
    const auto flow = flow_automaton(build_rfg(app.procedure("onCreate"), spec, false), spec);
    const auto x = intersect(as_pushdown(complement(resource_automaton(spec))), flow);
    EXPECT_TRUE(x.deterministic());
    const auto sigma = symbol_names(x.alphabet());
    std::set<Word> accepted;
    each_word(sigma, 5, [&](const Word& word) {
        if (x.accepts(word)) accepted.insert(word);
    });
    EXPECT_EQ(accepted, std::set<Word>{w("s new f")});
    const auto witness = emptiness(x);
    ASSERT_TRUE(witness);
    EXPECT_EQ(witness->symbols, w("s new f"));
}

TEST(Intersect, EmptyFactorAnnihilates) {
    const auto spec = test::resource("WifiLock");
    FiniteAutomaton none(resource_alphabet(spec));
    none.add_initial(none.add_state());
    const auto x = intersect(as_pushdown(complement(resource_automaton(spec))), none);
    EXPECT_FALSE(emptiness(x));
}

TEST(Intersect, AlphabetMismatchIsRejected) {
    const auto c = as_pushdown(complement(resource_automaton(test::resource("WifiLock"))));
    FiniteAutomaton other(resource_alphabet(test::resource("MediaPlayer")));
    other.add_initial(other.add_state());
    EXPECT_THROW((void)intersect(c, other), AlphabetMismatch);
}

TEST(Intersect, MembershipIsConjunction) {
    std::mt19937_64 rng(11);
    const auto specs = test::all_resources();
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 500 && seed < 400; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        const auto app = generate_app(seed, spec);
        const auto& p = app.procedures().begin()->second;
        const auto flow = flow_automaton(build_rfg(p, spec, false), spec);
        const auto c = as_pushdown(complement(resource_automaton(spec)));
        const auto x = intersect(c, flow);
        const auto sigma = symbol_names(flow.alphabet());
        for (int i = 0; i < 5; ++i, ++checked) {
            Word word{"s"};
            const auto len = std::uniform_int_distribution<int>(0, 6)(rng);
            for (int k = 0; k < len; ++k) {
                word.push_back(sigma[std::uniform_int_distribution<std::size_t>(0, sigma.size() - 1)(rng)]);
            }
            word.push_back("f");
            EXPECT_EQ(x.accepts(word), flow.accepts(word) && !leak_free(word, spec)) << seed;
        }
    }
    EXPECT_GE(checked, 500);
}

TEST(Emptiness, MatchedPairIsEmpty) {
    const auto spec = test::resource("MediaPlayer");
    const auto g = graph_of({{"b0", {Statement::acquire("new", "p"), Statement::release("release", "p")}, {}}},
                            spec);
    const auto x = intersect(as_pushdown(complement(resource_automaton(spec))), flow_automaton(g, spec));
    EXPECT_FALSE(emptiness(x));
}

TEST(Emptiness, LoopThatAcquiresTwiceReleasesOnce) {
    const auto spec = test::resource("WakeLock");
    const auto g = graph_of({{"head", {}, {"body", "out"}},
                             {"body",
                              {Statement::acquire("acquire", "l"), Statement::acquire("acquire", "l"),
                               Statement::release("release", "l")},
                              {"head"}},
                             {"out", {Statement::ret()}, {}}},
                            spec);
    const auto x = intersect(as_pushdown(complement(resource_automaton(spec))), flow_automaton(g, spec));
    const auto witness = emptiness(x);
    ASSERT_TRUE(witness);
    EXPECT_EQ(witness->symbols, w("s acquire acquire release f"));
    // Stack height 2 is needed: every shorter word of the flow language is leak-free.
    EXPECT_FALSE(leak_free(witness->symbols, spec));
    each_word(symbol_names(x.alphabet()), witness->symbols.size() - 1, [&](const Word& word) {
        EXPECT_FALSE(x.accepts(word));
    });
}

TEST(Emptiness, FiniteAutomatonSpecialCase) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = test::fixture("irccloud");
    const auto fa = flow_automaton(build_rfg(app.procedure("onCreate"), spec, false), spec);
    const auto witness = emptiness(fa);
    ASSERT_TRUE(witness);
    EXPECT_EQ(witness->symbols, w("s new f"));
    EXPECT_EQ(witness->states.size(), witness->symbols.size() + 1);
}

TEST(Emptiness, AgreesWithBoundedSearchOnGeneratedGraphs) {
    const auto specs = test::all_resources();
    int nonempty = 0;
    int empty = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        GeneratorOptions small;
        small.max_blocks = 4;
        small.max_statements = 2;
        const auto app = generate_app(seed, spec, small);
        for (const auto& [name, p] : app.procedures()) {
            const auto flow = flow_automaton(build_rfg(p, spec, false), spec);
            const auto x = intersect(as_pushdown(complement(resource_automaton(spec))), flow);
            const auto witness = emptiness(x);
            const std::size_t bound = witness ? witness->symbols.size() : 9;
            std::size_t shortest = 0;
            // Flow words are enumerated through the deterministic flow automaton.
            std::function<void(State, Word&)> walk = [&](State q, Word& word) {
                if (flow.is_final(q) && !leak_free(word, spec) && (shortest == 0 || word.size() < shortest)) {
                    shortest = word.size();
                }
                if (word.size() == bound) return;
                for (const auto& [a, r] : flow.transitions(q)) {
                    word.push_back(flow.alphabet().name(a));
                    walk(r, word);
                    word.pop_back();
                }
            };
            for (auto q0 : flow.initial()) {
                Word word;
                walk(q0, word);
            }
            if (witness) {
                ++nonempty;
                EXPECT_EQ(shortest, witness->symbols.size()) << seed << " " << name;
                EXPECT_TRUE(x.accepts(witness->symbols));
                EXPECT_TRUE(flow.accepts(witness->symbols));
                EXPECT_FALSE(leak_free(witness->symbols, spec));
            } else {
                ++empty;
                EXPECT_EQ(shortest, 0u) << seed << " " << name;
            }
        }
    }
    EXPECT_GT(nonempty, 20);
    EXPECT_GT(empty, 20);
}

TEST(Determinize, PreservesLanguage) {
    FiniteAutomaton nfa(resource_alphabet(test::resource("WifiLock")));
    const auto q0 = nfa.add_state();
    const auto q1 = nfa.add_state();
    const auto q2 = nfa.add_state();
    nfa.add_initial(q0);
    nfa.add_transition(q0, nfa.alphabet().at("s"), q1);
    nfa.add_transition(q0, nfa.alphabet().at("s"), q2);
    nfa.add_epsilon(q1, q2);
    nfa.add_transition(q2, nfa.alphabet().at("acquire"), q2);
    nfa.add_transition(q2, nfa.alphabet().at("f"), q1);
    nfa.set_final(q1);
    const auto dfa = nfa.determinize();
    EXPECT_FALSE(nfa.deterministic());
    EXPECT_TRUE(dfa.deterministic());
    each_word(symbol_names(nfa.alphabet()), 6, [&](const Word& word) {
        EXPECT_EQ(dfa.accepts(word), nfa.accepts(word));
    });
}
