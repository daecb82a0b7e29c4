#include "drip/repair.hpp"

#include <algorithm>

namespace drip {

ValidationResult validate(const AppModel& app, const ResourceSpec& spec, int depth,
                          AnalysisOptions options) {
    ValidationResult result;
    for (auto& r : analyze(app, spec, depth, options)) {
        result.violations.push_back(
            {ViolationKind::NewLeak, r.component, r.acquire_origin, std::move(r.witness)});
    }

    const auto summaries = all_calls(app, spec, true, false);
    std::vector<const Component*> components;
    for (const auto& c : app.components()) components.push_back(&c);
    std::sort(components.begin(), components.end(),
              [](const Component* a, const Component* b) { return a->name < b->name; });

    for (const auto* component : components) {
        std::map<ViolationKind, Witness> best;
        std::set<std::vector<std::string>> seen;
        for (const auto& path : lifecycle_paths(app.lifecycle_of(*component), depth)) {
            std::vector<std::string> chain;
            for (const auto& cb : path) {
                if (auto it = component->callbacks.find(cb); it != component->callbacks.end()) {
                    chain.push_back(it->second);
                }
            }
            if (!seen.insert(chain).second) continue;
            const auto g = sequence_graph(*component, path, summaries);
            for (auto& f : check_graph(g, spec, {false, true})) {
                auto it = best.find(f.kind);
                if (it == best.end()) {
                    best.emplace(f.kind, std::move(f.witness));
                } else if (f.witness.symbols.size() < it->second.symbols.size()) {
                    it->second = std::move(f.witness);
                }
            }
        }
        for (auto& [kind, w] : best) {
            result.violations.push_back({kind, component->name, std::nullopt, std::move(w)});
        }
    }
    result.verdict = result.violations.empty() ? Verdict::Valid : Verdict::Invalid;
    return result;
}

} // namespace drip
