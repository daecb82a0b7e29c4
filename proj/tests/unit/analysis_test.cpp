#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"

using namespace drip;

namespace {

Procedure proc(std::string name, std::vector<BasicBlock> blocks) {
    Procedure p;
    p.name = std::move(name);
    p.entry = blocks.front().id;
    p.blocks = std::move(blocks);
    return p;
}

AppModel one_component(std::vector<Procedure> procedures, std::map<std::string, std::string> callbacks) {
    return AppModel::create("T", {Component{"Main", "activity", std::move(callbacks)}}, std::move(procedures));
}

std::set<Origin> origins(const std::vector<Witness>& paths) {
    std::set<Origin> out;
    for (const auto& w : paths) {
        for (const auto& p : w.provenance) {
            if (p) out.insert(*p);
        }
    }
    return out;
}

// Replaces every internal call by a copy of the callee's blocks. Only for acyclic call graphs.
Procedure inline_calls(const AppModel& app, const std::string& name, const std::string& prefix) {
    const auto& p = app.procedure(name);
    Procedure out;
    out.name = name;
    out.entry = prefix + p.entry;
    for (const auto& b : p.blocks) {
        BasicBlock cur{prefix + b.id, {}, {}};
        bool returned = false;
        for (std::size_t i = 0; i < b.statements.size() && !returned; ++i) {
            const auto& s = b.statements[i];
            if (s.kind == StmtKind::Call && app.is_internal(s.callee)) {
                const auto callee = inline_calls(app, s.callee, prefix + b.id + "." + std::to_string(i) + "/");
                const auto cont = prefix + b.id + "#" + std::to_string(i);
                cur.successors = {callee.entry};
                out.blocks.push_back(std::move(cur));
                for (auto cb : callee.blocks) {
                    auto ret = std::find_if(cb.statements.begin(), cb.statements.end(),
                                            [](const Statement& t) { return t.kind == StmtKind::Return; });
                    if (ret != cb.statements.end()) {
                        cb.statements.erase(ret, cb.statements.end());
                        cb.successors = {cont};
                    } else if (cb.successors.empty()) {
                        cb.successors = {cont};
                    }
                    out.blocks.push_back(std::move(cb));
                }
                cur = BasicBlock{cont, {}, {}};
                continue;
            }
            cur.statements.push_back(s);
            returned = s.kind == StmtKind::Return;
        }
        if (!returned) {
            for (const auto& id : b.successors) cur.successors.push_back(prefix + id);
        }
        out.blocks.push_back(std::move(cur));
    }
    return out;
}

std::size_t shortest(const std::vector<Witness>& paths) {
    std::size_t best = 0;
    for (const auto& w : paths) {
        if (best == 0 || w.symbols.size() < best) best = w.symbols.size();
    }
    return best;
}

std::set<std::pair<std::string, Origin>> report_keys(const std::vector<LeakReport>& reports) {
    std::set<std::pair<std::string, Origin>> out;
    for (const auto& r : reports) out.emplace(r.component, r.acquire_origin);
    return out;
}

} // namespace

TEST(LeakingPaths, IrcCloudSequence) {
    const auto app = test::fixture("irccloud");
    const auto spec = test::resource("MediaPlayer");
    const auto summaries = all_calls(app, spec);
    const auto g = sequence_graph(app.components()[0], {"onCreate", "onStart", "onResume", "onPause"},
                                  summaries);
    const auto paths = leaking_paths(g, spec);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(plain_symbols(paths[0]), test::words("s new f"));
    EXPECT_EQ(origins(paths), (std::set<Origin>{{"onCreate", "b0", 0}}));
}

TEST(LeakingPaths, MatchedPairsAreClean) {
    const auto spec = test::resource("MediaPlayer");
    const auto p = proc("p", {{"b0", {}, {"b1", "b2"}},
                              {"b1", {Statement::acquire("new", "x"), Statement::release("release", "x")}, {"b3"}},
                              {"b2", {Statement::acquire("start", "x"), Statement::release("stop", "x")}, {"b3"}},
                              {"b3", {Statement::ret()}, {}}});
    EXPECT_TRUE(leaking_paths(build_rfg(p, spec, false), spec).empty());
}

TEST(LeakingPaths, LoopAcquiringTwiceReleasingOnce) {
    const auto spec = test::resource("WakeLock");
    const auto p = proc("p", {{"head", {}, {"body", "out"}},
                              {"body",
                               {Statement::acquire("acquire", "l"), Statement::acquire("acquire", "l"),
                                Statement::release("release", "l")},
                               {"head"}},
                              {"out", {Statement::ret()}, {}}});
    const auto paths = leaking_paths(build_rfg(p, spec, false), spec);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(plain_symbols(paths[0]), test::words("s acquire acquire release f"));
    EXPECT_EQ(origins(paths), (std::set<Origin>{{"p", "body", 0}, {"p", "body", 1}, {"p", "body", 2}}));
}

TEST(LeakingPaths, OneWitnessPerAcquireOrigin) {
    const auto spec = test::resource("MediaPlayer");
    const auto p = proc("p", {{"b0", {}, {"b1", "b2"}},
                              {"b1", {Statement::acquire("new", "x")}, {"b3"}},
                              {"b2", {Statement::acquire("start", "x")}, {"b3"}},
                              {"b3", {Statement::ret()}, {}}});
    const auto paths = leaking_paths(build_rfg(p, spec, false), spec);
    EXPECT_EQ(paths.size(), 2u);
    EXPECT_EQ(origins(paths), (std::set<Origin>{{"p", "b1", 0}, {"p", "b2", 0}}));
}

TEST(AllCalls, CalleeReleaseClearsCaller) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = one_component(
        {proc("A", {{"b0", {Statement::acquire("new", "x"), Statement::call("B"), Statement::ret()}, {}}}),
         proc("B", {{"b0", {Statement::release("release", "x"), Statement::ret()}, {}}})},
        {{"onCreate", "A"}});
    const auto s = all_calls(app, spec);
    EXPECT_TRUE(s.procedures.at("A").leaking_paths.empty());
    EXPECT_TRUE(s.procedures.at("B").leaking_paths.empty());
    EXPECT_EQ(s.order, (std::vector<std::string>{"B", "A"}));
    EXPECT_TRUE(s.warnings.empty());
}

TEST(AllCalls, LeakFreeCalleeIsNeutral) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = one_component(
        {proc("A", {{"b0", {Statement::acquire("new", "x"), Statement::call("B"), Statement::ret()}, {}}}),
         proc("B", {{"b0", {Statement::other("log"), Statement::ret()}, {}}})},
        {{"onCreate", "A"}});
    const auto alone = proc("A", {{"b0", {Statement::acquire("new", "x"), Statement::ret()}, {}}});
    const auto s = all_calls(app, spec);
    EXPECT_EQ(s.procedures.at("A").leaking_paths, leaking_paths(build_rfg(alone, spec, false), spec));
}

TEST(AllCalls, SelfRecursionWarnsAndCompletes) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = one_component(
        {proc("A", {{"b0", {Statement::acquire("new", "x")}, {"b1", "b2"}},
                    {"b1", {Statement::call("A")}, {"b2"}},
                    {"b2", {Statement::ret()}, {}}})},
        {{"onCreate", "A"}});
    const auto s = all_calls(app, spec);
    EXPECT_EQ(s.warnings, (std::vector<CycleWarning>{{"A", "A"}}));
    EXPECT_FALSE(s.procedures.at("A").leaking_paths.empty());
    EXPECT_NE(s.warnings[0].message().find("A"), std::string::npos);
}

TEST(AllCalls, MutualRecursionBreaksSmallestBackEdge) {
    const auto spec = test::resource("MediaPlayer");
    const auto app = one_component({proc("A", {{"b0", {Statement::call("B")}, {}}}),
                                    proc("B", {{"b0", {Statement::call("C")}, {}}}),
                                    proc("C", {{"b0", {Statement::call("A")}, {}}})},
                                   {{"onCreate", "A"}});
    EXPECT_EQ(break_cycles(app), (std::vector<CycleWarning>{{"C", "A"}}));
    const auto s = all_calls(app, spec);
    EXPECT_EQ(s.order, (std::vector<std::string>{"C", "B", "A"}));
}

TEST(AllCalls, AgreesWithBodilyInlining) {
    const auto specs = test::all_resources();
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        const auto app = generate_app(seed, spec);
        if (!break_cycles(app).empty()) continue;
        const auto s = all_calls(app, spec);
        for (const auto& [name, _] : app.procedures()) {
            const auto flat = inline_calls(app, name, "");
            const auto direct = leaking_paths(build_rfg(flat, spec, false), spec);
            const auto& composed = s.procedures.at(name).leaking_paths;
            EXPECT_EQ(direct.empty(), composed.empty()) << seed << " " << name;
            EXPECT_EQ(shortest(direct), shortest(composed)) << seed << " " << name;
            ++compared;
        }
    }
    EXPECT_GT(compared, 500);
}

TEST(Unroll, ActivityDepthTwoRevisitsRunningState) {
    const auto spec = test::resource("MediaPlayer");
    const auto seqs = unroll_callbacks(activity_lifecycle(), spec, 2);
    const std::vector<std::string> revisit{"onCreate", "onStart", "onResume", "onPause", "onResume", "onPause"};
    EXPECT_NE(std::find(seqs.begin(), seqs.end(), revisit), seqs.end());
}

TEST(Unroll, DepthOneHasSimplePathOnce) {
    const auto spec = test::resource("MediaPlayer");
    const auto seqs = unroll_callbacks(activity_lifecycle(), spec, 1);
    const std::vector<std::string> simple{"onCreate", "onStart", "onResume", "onPause"};
    EXPECT_EQ(std::count(seqs.begin(), seqs.end(), simple), 1);
    for (const auto& s : seqs) {
        EXPECT_TRUE(std::find(spec.release_callbacks().begin(), spec.release_callbacks().end(), s.back()) !=
                    spec.release_callbacks().end());
    }
}

TEST(Unroll, SequencesGrowWithDepth) {
    for (const auto& spec : test::all_resources()) {
        std::set<std::vector<std::string>> prev;
        for (int d = 1; d <= 4; ++d) {
            const auto seqs = unroll_callbacks(activity_lifecycle(), spec, d);
            const std::set<std::vector<std::string>> cur(seqs.begin(), seqs.end());
            EXPECT_EQ(cur.size(), seqs.size());
            EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) << spec.name() << d;
            prev = cur;
        }
    }
}

TEST(Unroll, MissingReleaseCallbackThrows) {
    const auto spec = parse_resource_spec(
        R"({"resource": "X", "reentrant": false, "pairs": [["a", "r"]], "release_callbacks": ["onDetach"]})");
    EXPECT_THROW((void)unroll_callbacks(activity_lifecycle(), spec, 3), NoReleaseCallback);
}

TEST(Analyze, IrcCloudHasOneLeak) {
    const auto reports = analyze(test::fixture("irccloud"), test::resource("MediaPlayer"), 3);
    ASSERT_EQ(reports.size(), 1u);
    const auto& r = reports[0];
    EXPECT_EQ(r.resource, "MediaPlayer");
    EXPECT_EQ(r.component, "ImageViewerActivity");
    EXPECT_EQ(r.release_callback, "onPause");
    EXPECT_EQ(r.acquire_origin, (Origin{"onCreate", "b0", 0}));
    EXPECT_EQ(r.callback_sequence.front(), "onCreate");
    EXPECT_EQ(r.callback_sequence.back(), "onPause");
    EXPECT_EQ(plain_symbols(r.witness), test::words("s new f"));
}

TEST(Analyze, LeakFreeFixture) {
    EXPECT_TRUE(analyze(test::fixture("leak_free"), test::resource("MediaPlayer"), 3).empty());
}

TEST(Analyze, ReportsAreDeterministic) {
    const auto app = test::fixture("two_leaks");
    const auto spec = test::resource("MediaPlayer");
    const auto a = analyze_app(app, spec, 3);
    const auto b = analyze_app(app, spec, 3);
    EXPECT_EQ(reports_to_json(a, spec, 3, {}), reports_to_json(b, spec, 3, {}));
    EXPECT_EQ(reports_to_text(a), reports_to_text(b));
    EXPECT_EQ(a.reports.size(), 2u);
}

TEST(Analyze, DepthFixturesNeedDeeperUnrolling) {
    const std::vector<std::pair<std::string, std::string>> fixtures{
        {"depth_resume_reacquire", "WakeLock"}, {"depth_double_create", "WakeLock"},
        {"depth_helper_release", "WakeLock"},   {"depth_wifi_resume", "WifiLock"},
        {"depth_wifi_start", "WifiLock"}};
    int missed_at_two = 0;
    for (const auto& [name, resource] : fixtures) {
        const auto app = test::fixture(name);
        const auto spec = test::resource(resource);
        std::vector<std::set<std::pair<std::string, Origin>>> found(7);
        for (int d = 1; d <= 6; ++d) {
            found[d] = report_keys(analyze(app, spec, d));
            OracleOptions o;
            o.depth = d;
            std::set<std::pair<std::string, Origin>> expected;
            for (const auto& l : oracle_leaks(app, spec, o)) expected.emplace(l.component, l.origin);
            EXPECT_EQ(found[d], expected) << name << " D=" << d;
        }
        EXPECT_LT(found[1].size(), found[3].size()) << name;
        if (found[2].size() < found[3].size()) ++missed_at_two;
        for (int d = 4; d <= 6; ++d) EXPECT_EQ(found[d], found[3]) << name << " D=" << d;
    }
    EXPECT_GE(missed_at_two, 1);
}

TEST(Analyze, MonotoneInDepthOnCorpus) {
    const auto specs = test::all_resources();
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        const auto app = generate_app(seed, spec);
        auto prev = report_keys(analyze(app, spec, 1));
        for (int d = 2; d <= 4; ++d) {
            const auto cur = report_keys(analyze(app, spec, d));
            EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) << seed << " D=" << d;
            prev = cur;
        }
    }
}

TEST(Analyze, AgreesWithOracleOnSmallCorpus) {
    const auto specs = test::all_resources();
    int compared = 0;
    for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        const auto app = generate_app(seed, spec);
        try {
            EXPECT_EQ(test::leak_keys(analyze(app, spec, 3)), oracle_leaks(app, spec)) << seed;
            ++compared;
        } catch (const BudgetExceeded&) {
        }
    }
    EXPECT_GE(compared, 50);
}

TEST(Analyze, LatePolicyTargetsLastReleaseCallback) {
    const auto spec = test::resource("MediaPlayer");
    EXPECT_EQ(target_callback(spec, ReleasePolicy::Early), "onPause");
    EXPECT_EQ(target_callback(spec, ReleasePolicy::Late), "onStop");
    const auto reports = analyze(test::fixture("irccloud"), spec, 3, {ReleasePolicy::Late});
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].release_callback, "onStop");
}
