#include "drip/analysis.hpp"

#include <algorithm>
#include <tuple>

namespace drip {

ResourceFlowGraph sequence_graph(const Component& component,
                                 const std::vector<std::string>& sequence,
                                 const Summaries& summaries) {
    ResourceFlowGraph g;
    std::size_t tail = ResourceFlowGraph::entry;
    for (const auto& cb : sequence) {
        auto it = component.callbacks.find(cb);
        if (it == component.callbacks.end()) continue;
        const auto [in, out] = g.splice(summaries.procedures.at(it->second).graph);
        g.add_edge(tail, in);
        tail = out;
    }
    g.add_edge(tail, ResourceFlowGraph::exit);
    return g;
}

AnalysisResult analyze_app(const AppModel& app, const ResourceSpec& spec, int depth,
                           AnalysisOptions options) {
    if (depth < 1) throw Error("unrolling depth must be at least 1");
    AnalysisResult result;
    const auto summaries = all_calls(app, spec, false, false);
    for (const auto& w : summaries.warnings) result.warnings.push_back(w.message());
    result.warnings.insert(result.warnings.end(), app.warnings().begin(), app.warnings().end());

    const auto& target = target_callback(spec, options.policy);
    std::vector<const Component*> components;
    for (const auto& c : app.components()) components.push_back(&c);
    std::sort(components.begin(), components.end(),
              [](const Component* a, const Component* b) { return a->name < b->name; });

    for (const auto* component : components) {
        // same procedure chain => same findings
        std::map<std::vector<std::string>, std::vector<Finding>> cache;
        std::map<Origin, LeakReport> found;
        for (const auto& prefix : unroll_callbacks(app.lifecycle_of(*component), spec, depth)) {
            if (prefix.back() != target) continue;
            std::vector<std::string> chain;
            for (const auto& cb : prefix) {
                if (auto it = component->callbacks.find(cb); it != component->callbacks.end()) {
                    chain.push_back(it->second);
                }
            }
            auto it = cache.find(chain);
            if (it == cache.end()) {
                auto g = sequence_graph(*component, prefix, summaries);
                it = cache.emplace(chain, check_graph(g, spec, {true, false})).first;
            }
            for (const auto& finding : it->second) {
                if (!finding.origin || found.contains(*finding.origin)) continue;
                found.emplace(*finding.origin, LeakReport{spec.name(), component->name, prefix,
                                                          finding.witness, *finding.origin, target});
            }
        }
        std::vector<LeakReport> reports;
        for (auto& [_, r] : found) reports.push_back(std::move(r));
        std::sort(reports.begin(), reports.end(), [](const LeakReport& a, const LeakReport& b) {
            return std::tie(a.callback_sequence, a.acquire_origin) <
                   std::tie(b.callback_sequence, b.acquire_origin);
        });
        for (auto& r : reports) result.reports.push_back(std::move(r));
    }
    return result;
}

std::vector<LeakReport> analyze(const AppModel& app, const ResourceSpec& spec, int depth,
                                AnalysisOptions options) {
    return analyze_app(app, spec, depth, options).reports;
}

} // namespace drip
