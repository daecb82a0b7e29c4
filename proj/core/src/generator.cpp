#include "drip/oracle.hpp"

#include <algorithm>
#include <random>

namespace drip {

namespace {

const std::vector<std::string> kCallbacks{"onCreate", "onStart", "onResume",
                                          "onPause",  "onStop",  "onDestroy"};

class Random {
  public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[below(items.size())];
    }

  private:
    std::mt19937_64 engine_;
};

std::string block_name(std::size_t i) { return "b" + std::to_string(i); }

struct Shape {
    std::vector<std::vector<std::size_t>> successors;
};

// Every block is reachable from b0 and reaches the last block through forward edges.
Shape random_shape(Random& rng, std::size_t n, double back_edge) {
    Shape shape;
    shape.successors.resize(n);
    for (std::size_t j = 1; j < n; ++j) shape.successors[rng.below(j)].push_back(j);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto& succ = shape.successors[i];
        if (succ.empty() || rng.chance(0.3)) succ.push_back(i + 1 + rng.below(n - i - 1));
        if (rng.chance(back_edge)) succ.push_back(rng.below(i + 1));
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return shape;
}

} // namespace

AppModel generate_app(std::uint64_t seed, const ResourceSpec& spec, const GeneratorOptions& options) {
    Random rng(seed);
    const auto acquires = spec.acquire_ops();
    const auto releases = spec.release_ops();
    const auto max_procs = static_cast<std::size_t>(std::max(1, options.max_procedures));
    const auto procedure_count = 1 + rng.below(max_procs);
    const auto helper_count = procedure_count > 1 ? rng.below(std::min<std::size_t>(3, procedure_count)) : 0;
    const auto callback_count = procedure_count - helper_count;
    const std::size_t component_count = callback_count > 2 && rng.chance(0.4) ? 2 : 1;

    std::vector<Component> components;
    for (std::size_t c = 0; c < component_count; ++c) {
        components.push_back({"Comp" + std::to_string(c), "activity", {}});
    }
    std::vector<std::string> callback_procs;
    for (std::size_t k = 0; k < callback_count; ++k) {
        auto* comp = &components[k < component_count ? k : rng.below(component_count)];
        if (comp->callbacks.size() == kCallbacks.size()) comp = &components.front();
        std::vector<std::string> free;
        for (const auto& cb : kCallbacks) {
            if (!comp->callbacks.contains(cb)) free.push_back(cb);
        }
        if (free.empty()) break;
        const auto& cb = rng.pick(free);
        auto name = comp->name + "_" + cb;
        comp->callbacks[cb] = name;
        callback_procs.push_back(name);
    }
    std::vector<std::string> helpers;
    for (std::size_t h = 0; h < helper_count; ++h) helpers.push_back("helper" + std::to_string(h));

    std::vector<std::string> order = callback_procs;
    order.insert(order.end(), helpers.begin(), helpers.end());

    const std::vector<double> weights{
        options.acquire_weight, options.release_weight, options.use_weight, options.call_weight,
        std::max(0.0, 1.0 - options.acquire_weight - options.release_weight - options.use_weight -
                          options.call_weight)};
    const auto draw_kind = [&] {
        double x = rng.unit();
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            if (x < weights[i]) return static_cast<int>(i);
            x -= weights[i];
        }
        return static_cast<int>(weights.size() - 1);
    };

    std::vector<Procedure> procedures;
    for (std::size_t pi = 0; pi < order.size(); ++pi) {
        Procedure p;
        p.name = order[pi];
        p.entry = "b0";
        std::vector<std::string> refs{"res"};
        if (pi >= callback_procs.size() && rng.chance(0.4)) {
            p.locals = {"tmp"};
            refs = {"tmp"};
        } else if (rng.chance(0.3)) {
            refs.push_back("res2");
        }
        std::vector<std::string> callees;
        for (const auto& h : helpers) {
            const bool later = std::find(order.begin(), order.end(), h) - order.begin() >
                               static_cast<std::ptrdiff_t>(pi);
            if (later || rng.chance(options.cycle_probability)) callees.push_back(h);
        }

        const auto blocks = 1 + rng.below(static_cast<std::size_t>(std::max(1, options.max_blocks)));
        const auto shape = random_shape(rng, blocks, options.back_edge_probability);
        for (std::size_t bi = 0; bi < blocks; ++bi) {
            BasicBlock b;
            b.id = block_name(bi);
            const auto count = rng.below(static_cast<std::size_t>(options.max_statements) + 1);
            for (std::size_t si = 0; si < count; ++si) {
                switch (draw_kind()) {
                case 0: b.statements.push_back(Statement::acquire(rng.pick(acquires), rng.pick(refs))); break;
                case 1: b.statements.push_back(Statement::release(rng.pick(releases), rng.pick(refs))); break;
                case 2: b.statements.push_back(Statement::use(rng.pick(refs))); break;
                case 3:
                    if (!callees.empty()) {
                        b.statements.push_back(Statement::call(rng.pick(callees)));
                        break;
                    }
                    [[fallthrough]];
                default: b.statements.push_back(Statement::other(rng.chance(0.5) ? "log" : "")); break;
                }
            }
            if (bi + 1 == blocks && rng.chance(0.7)) b.statements.push_back(Statement::ret());
            for (auto s : shape.successors[bi]) b.successors.push_back(block_name(s));
            p.blocks.push_back(std::move(b));
        }
        procedures.push_back(std::move(p));
    }
    return AppModel::create("gen_" + std::to_string(seed), std::move(components),
                            std::move(procedures));
}

AppModel generate_scaled_app(std::uint64_t seed, const ResourceSpec& spec, int statements) {
    Random rng(seed);
    const auto acquire = spec.pairs().front().acquire;
    const auto release = spec.pairs().front().release;
    constexpr std::size_t kBlocks = 25;
    constexpr std::size_t kPerBlock = 8;
    const auto helper_count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::max(statements, 1)) / (kBlocks * kPerBlock));

    std::vector<Procedure> procedures;
    for (std::size_t h = 0; h < helper_count; ++h) {
        Procedure p{"work" + std::to_string(h), "b0", {}, {}};
        for (std::size_t bi = 0; bi < kBlocks; ++bi) {
            BasicBlock b{block_name(bi), {}, {}};
            for (std::size_t k = 0; k < kPerBlock; ++k) {
                b.statements.push_back(Statement::other("api" + std::to_string(rng.below(50))));
            }
            if (bi == kBlocks / 2 && h + 1 < helper_count) {
                b.statements.push_back(Statement::call("work" + std::to_string(h + 1)));
            }
            if (bi == 3 && h % 7 == 0) {
                b.statements.insert(b.statements.begin(), Statement::acquire(acquire, "scratch"));
                b.statements.push_back(Statement::use("scratch"));
                b.statements.push_back(Statement::release(release, "scratch"));
            }
            if (bi + 1 < kBlocks) {
                b.successors.push_back(block_name(bi + 1));
                if (bi % 5 == 0 && bi + 2 < kBlocks) b.successors.push_back(block_name(bi + 2));
                if (bi % 8 == 7) b.successors.push_back(block_name(bi - 3));
            } else {
                b.statements.push_back(Statement::ret());
            }
            p.blocks.push_back(std::move(b));
        }
        procedures.push_back(std::move(p));
    }

    auto callback = [](std::string name, std::vector<BasicBlock> blocks) {
        return Procedure{std::move(name), "b0", std::move(blocks), {}};
    };
    procedures.push_back(callback(
        "onCreate", {{"b0", {Statement::acquire(acquire, "res"), Statement::use("res"), Statement::ret()}, {}}}));
    procedures.push_back(callback(
        "onResume", {{"b0", {Statement::other("refresh")}, {"b1", "b2"}},
                     {"b1", {Statement::acquire(acquire, "res"), Statement::ret()}, {}},
                     {"b2", {Statement::ret()}, {}}}));
    procedures.push_back(callback(
        "onPause", {{"b0", {Statement::call("work0"), Statement::ret()}, {}}}));
    procedures.push_back(callback(
        "onStop", {{"b0", {Statement::other("save"), Statement::ret()}, {}}}));

    Component component{"ScaledActivity", "activity",
                        {{"onCreate", "onCreate"},
                         {"onResume", "onResume"},
                         {"onPause", "onPause"},
                         {"onStop", "onStop"}}};
    return AppModel::create("scaled_" + std::to_string(seed), {component}, std::move(procedures));
}

} // namespace drip
