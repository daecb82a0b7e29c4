#include "drip/analysis.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace drip {

std::string_view to_string(ReleasePolicy policy) {
    return policy == ReleasePolicy::Early ? "early" : "late";
}

const std::string& target_callback(const ResourceSpec& spec, ReleasePolicy policy) {
    return policy == ReleasePolicy::Early ? spec.release_callbacks().front()
                                          : spec.release_callbacks().back();
}

namespace {

bool shortest_first(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return std::make_tuple(a.size(), std::cref(a)) < std::make_tuple(b.size(), std::cref(b));
}

} // namespace

std::vector<std::vector<std::string>> lifecycle_paths(const CallbackGraph& graph, int depth) {
    if (depth < 1) throw Error("unrolling depth must be at least 1");
    std::map<std::string, int> visits;
    std::set<std::vector<std::string>> found;
    std::vector<std::string> sequence;

    auto extend = [&](auto& self, const std::string& state) -> void {
        bool extended = false;
        for (const auto& e : graph.edges) {
            if (e.from != state || visits[e.to] >= depth) continue;
            extended = true;
            ++visits[e.to];
            sequence.insert(sequence.end(), e.callbacks.begin(), e.callbacks.end());
            self(self, e.to);
            sequence.resize(sequence.size() - e.callbacks.size());
            --visits[e.to];
        }
        if (!extended) found.insert(sequence);
    };
    visits[graph.initial] = 1;
    extend(extend, graph.initial);

    std::vector<std::vector<std::string>> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), shortest_first);
    return out;
}

std::vector<std::vector<std::string>> unroll_callbacks(const CallbackGraph& graph,
                                                       const ResourceSpec& spec, int depth) {
    const auto& releases = spec.release_callbacks();
    std::set<std::vector<std::string>> prefixes;
    for (const auto& path : lifecycle_paths(graph, depth)) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (std::find(releases.begin(), releases.end(), path[i]) != releases.end()) {
                prefixes.emplace(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            }
        }
    }
    if (prefixes.empty()) {
        throw NoReleaseCallback("lifecycle '" + graph.name + "' never invokes a release callback of " +
                                spec.name());
    }
    std::vector<std::vector<std::string>> out(prefixes.begin(), prefixes.end());
    std::sort(out.begin(), out.end(), shortest_first);
    return out;
}

} // namespace drip
