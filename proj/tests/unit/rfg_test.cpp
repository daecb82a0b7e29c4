#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"

using namespace drip;

namespace {

Procedure make_proc(std::vector<BasicBlock> blocks) {
    Procedure p;
    p.name = "p";
    p.entry = blocks.front().id;
    p.blocks = std::move(blocks);
    return p;
}

std::vector<NodeKind> kinds(const std::vector<RfgNode>& nodes) {
    std::vector<NodeKind> out;
    for (const auto& n : nodes) out.push_back(n.kind);
    return out;
}

using OpSeq = std::vector<std::string>;

std::string op_word(NodeKind kind, const std::string& op) {
    switch (kind) {
    case NodeKind::Acquire: return "a:" + op;
    case NodeKind::Release: return "r:" + op;
    case NodeKind::GuardedRelease: return "g:" + op;
    default: return {};
    }
}

// All s-to-f paths of an acyclic graph as acquire/release words.
std::vector<OpSeq> rfg_words(const ResourceFlowGraph& g) {
    std::vector<OpSeq> out;
    OpSeq cur;
    std::function<void(std::size_t)> walk = [&](std::size_t n) {
        const auto w = op_word(g.node(n).kind, g.node(n).op);
        if (!w.empty()) cur.push_back(w);
        if (n == ResourceFlowGraph::exit) out.push_back(cur);
        for (auto m : g.successors(n)) walk(m);
        if (!w.empty()) cur.pop_back();
    };
    walk(ResourceFlowGraph::entry);
    std::sort(out.begin(), out.end());
    return out;
}

// The same words read directly off the CFG.
std::vector<OpSeq> cfg_words(const Procedure& p, const ResourceSpec& spec) {
    std::vector<OpSeq> out;
    OpSeq cur;
    std::function<void(const BasicBlock&)> walk = [&](const BasicBlock& b) {
        const auto mark = cur.size();
        bool returned = false;
        for (const auto& s : b.statements) {
            if (s.kind == StmtKind::Acquire && spec.is_acquire(s.api)) cur.push_back("a:" + s.api);
            if (s.kind == StmtKind::Release && spec.is_release(s.api)) cur.push_back("r:" + s.api);
            if (s.kind == StmtKind::ReleaseIfHeld && spec.is_release(s.api)) cur.push_back("g:" + s.api);
            if (s.kind == StmtKind::Return) {
                returned = true;
                break;
            }
        }
        if (returned || b.successors.empty()) {
            out.push_back(cur);
        } else {
            for (const auto& id : b.successors) walk(p.block(id));
        }
        cur.resize(mark);
    };
    walk(p.block(p.entry));
    std::sort(out.begin(), out.end());
    return out;
}

bool acyclic(const Procedure& p) {
    std::map<std::string, int> color;
    std::function<bool(const std::string&)> dfs = [&](const std::string& id) {
        color[id] = 1;
        const auto& b = p.block(id);
        const bool returns = std::any_of(b.statements.begin(), b.statements.end(),
                                         [](const Statement& s) { return s.kind == StmtKind::Return; });
        if (!returns) {
            for (const auto& s : b.successors) {
                if (color[s] == 1) return false;
                if (color[s] == 0 && !dfs(s)) return false;
            }
        }
        color[id] = 2;
        return true;
    };
    return dfs(p.entry);
}

} // namespace

TEST(PathGraph, BlockWithoutResourceStatementsIsTrivial) {
    const auto mp = test::resource("MediaPlayer");
    const BasicBlock b{"b0", {Statement::other(), Statement::other()}, {}};
    EXPECT_EQ(kinds(build_path_graph(b, mp, false)), std::vector<NodeKind>{NodeKind::Trivial});
}

TEST(PathGraph, AcquireThenLabelledOther) {
    const auto mp = test::resource("MediaPlayer");
    const BasicBlock b{"b0", {Statement::acquire("new", "player"), Statement::other("findViewById")}, {}};
    const auto nodes = build_path_graph(b, mp, false, "onCreate");
    ASSERT_EQ(kinds(nodes), (std::vector<NodeKind>{NodeKind::Acquire, NodeKind::Transfer}));
    EXPECT_EQ(nodes[0].op, "new");
    EXPECT_EQ(nodes[0].origin, (Origin{"onCreate", "b0", 0}));
    EXPECT_EQ(nodes[1].op, "findViewById");
}

TEST(PathGraph, ReleaseThenReturn) {
    const auto mp = test::resource("MediaPlayer");
    const BasicBlock b{"b0", {Statement::release("stop", "p"), Statement::ret()}, {}};
    const auto nodes = build_path_graph(b, mp, false);
    ASSERT_EQ(kinds(nodes), (std::vector<NodeKind>{NodeKind::Release, NodeKind::ExitNode}));
    EXPECT_EQ(nodes[0].op, "stop");
}

TEST(PathGraph, UsesAppearOnlyWhenTracked) {
    const auto mp = test::resource("MediaPlayer");
    const BasicBlock b{"b0", {Statement::use("p")}, {}};
    EXPECT_EQ(kinds(build_path_graph(b, mp, false)), std::vector<NodeKind>{NodeKind::Trivial});
    const auto tracked = build_path_graph(b, mp, true);
    ASSERT_EQ(kinds(tracked), std::vector<NodeKind>{NodeKind::Use});
    EXPECT_EQ(tracked[0].op, "p");
}

TEST(PathGraph, ForeignOperationsBecomeTransfers) {
    const auto mp = test::resource("MediaPlayer");
    const BasicBlock b{"b0", {Statement::acquire("acquire", "lock"), Statement::call("helper")}, {}};
    EXPECT_EQ(kinds(build_path_graph(b, mp, false)),
              (std::vector<NodeKind>{NodeKind::Transfer, NodeKind::Transfer}));
}

TEST(BuildRfg, IrcCloudOnCreate) {
    const auto app = test::fixture("irccloud");
    const auto g = build_rfg(app.procedure("onCreate"), test::resource("MediaPlayer"), false);
    ASSERT_EQ(g.node_count(), 4u);
    EXPECT_EQ(g.node(0).kind, NodeKind::Entry);
    EXPECT_EQ(g.node(1).kind, NodeKind::Exit);
    ASSERT_EQ(g.successors(0).size(), 1u);
    const auto a = g.successors(0)[0];
    EXPECT_EQ(g.node(a).kind, NodeKind::Acquire);
    ASSERT_EQ(g.successors(a).size(), 1u);
    const auto t = g.successors(a)[0];
    EXPECT_EQ(g.node(t).kind, NodeKind::Transfer);
    EXPECT_EQ(g.successors(t), std::vector<std::size_t>{ResourceFlowGraph::exit});
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(cyclomatic(g), 1);
}

TEST(BuildRfg, BranchShapeIsPreserved) {
    const auto p = make_proc({{"b0", {Statement::other()}, {"b1", "b2"}},
                              {"b1", {Statement::other()}, {}},
                              {"b2", {Statement::other()}, {}}});
    const auto g = build_rfg(p, test::resource("MediaPlayer"), false);
    ASSERT_EQ(g.node_count(), 5u);
    ASSERT_EQ(g.successors(0).size(), 1u);
    const auto root = g.successors(0)[0];
    EXPECT_EQ(g.node(root).kind, NodeKind::Trivial);
    ASSERT_EQ(g.successors(root).size(), 2u);
    for (auto arm : g.successors(root)) {
        EXPECT_EQ(g.node(arm).kind, NodeKind::Trivial);
        EXPECT_EQ(g.successors(arm), std::vector<std::size_t>{ResourceFlowGraph::exit});
    }
    EXPECT_EQ(cyclomatic(g), 2);
}

TEST(BuildRfg, DiamondArmsCarryOneOperationEach) {
    const auto p = make_proc({{"b0", {}, {"b1", "b2"}},
                              {"b1", {Statement::acquire("new", "p")}, {"b3"}},
                              {"b2", {Statement::release("release", "p")}, {"b3"}},
                              {"b3", {Statement::ret()}, {}}});
    const auto g = build_rfg(p, test::resource("MediaPlayer"), false);
    EXPECT_EQ(rfg_words(g), (std::vector<OpSeq>{{"a:new"}, {"r:release"}}));
}

TEST(BuildRfg, StatementsAfterReturnAreIgnored) {
    const auto p = make_proc({{"b0", {Statement::ret(), Statement::acquire("new", "p")}, {"b1"}},
                              {"b1", {Statement::acquire("new", "p")}, {}}});
    const auto g = build_rfg(p, test::resource("MediaPlayer"), false);
    EXPECT_EQ(rfg_words(g), std::vector<OpSeq>{{}});
}

TEST(Cyclomatic, TextbookShapes) {
    EXPECT_EQ(cyclomatic(4, {{0, 1}, {1, 2}, {2, 3}}), 1);
    EXPECT_EQ(cyclomatic(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 2);
    EXPECT_EQ(cyclomatic(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}), 2);
}

TEST(Cyclomatic, StraightLineProcedure) {
    const auto p = make_proc({{"b0", {Statement::other()}, {"b1"}}, {"b1", {Statement::ret()}, {}}});
    const auto spec = test::resource("MediaPlayer");
    EXPECT_EQ(cyclomatic(build_rfg(p, spec, false)), 1);
    EXPECT_EQ(cfg_cyclomatic(p), 1);
}

TEST(BuildRfgCorpus, StructuralBoundsHold) {
    const auto specs = test::all_resources();
    int acyclic_checked = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto& spec = specs[seed % specs.size()];
        const auto app = generate_app(seed, spec);
        for (const auto& [name, p] : app.procedures()) {
            for (bool track : {false, true}) {
                const auto g = build_rfg(p, spec, track);
                std::size_t relevant = 0;
                for (const auto& b : p.blocks) {
                    for (const auto& s : b.statements) {
                        if (s.kind != StmtKind::Other || !s.api.empty()) ++relevant;
                    }
                }
                EXPECT_LE(g.node_count(), relevant + p.blocks.size() + 2) << seed << " " << name;
                const auto live = g.reachable();
                EXPECT_TRUE(std::all_of(live.begin(), live.end(), [](bool b) { return b; }))
                    << seed << " " << name;
                EXPECT_TRUE(g.successors(ResourceFlowGraph::exit).empty());
            }
            const auto g = build_rfg(p, spec, false);
            EXPECT_LE(cyclomatic(g), cfg_cyclomatic(p)) << seed << " " << name;
            if (acyclic(p)) {
                ++acyclic_checked;
                EXPECT_EQ(rfg_words(g), cfg_words(p, spec)) << seed << " " << name;
            }
        }
    }
    EXPECT_GT(acyclic_checked, 200);
}

TEST(Contract, KeepsPathsBetweenKeptNodes) {
    const auto p = make_proc({{"b0", {Statement::other("x")}, {"b1", "b2"}},
                              {"b1", {Statement::acquire("new", "p")}, {"b3"}},
                              {"b2", {Statement::other("y")}, {"b3"}},
                              {"b3", {Statement::release("release", "p")}, {}}});
    const auto g = build_rfg(p, test::resource("MediaPlayer"), false);
    const auto c = contract(g, [](const RfgNode& n) {
        return n.kind == NodeKind::Acquire || n.kind == NodeKind::Release;
    });
    EXPECT_EQ(c.node_count(), 4u);
    EXPECT_EQ(rfg_words(c), rfg_words(g));
}

TEST(Dot, MentionsEveryNode) {
    const auto app = test::fixture("irccloud");
    const auto dot = to_dot(build_rfg(app.procedure("onCreate"), test::resource("MediaPlayer"), false),
                            "onCreate");
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("new"), std::string::npos);
    EXPECT_NE(dot.find("findViewById"), std::string::npos);
}
