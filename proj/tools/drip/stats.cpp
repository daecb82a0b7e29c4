#include "drip/stats.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "drip/rfg.hpp"

namespace drip::cli {

double GraphStats::ratio() const {
    return cfg_cyclomatic == 0 ? 0.0
                               : static_cast<double>(rfg_cyclomatic) / static_cast<double>(cfg_cyclomatic);
}

AppStats app_stats(const AppModel& app, const ResourceSpec& spec) {
    AppStats out;
    out.total.name = app.name();
    for (const auto& [name, p] : app.procedures()) {
        const auto g = build_rfg(p, spec, false);
        GraphStats s{name,
                     g.node_count(),
                     g.edge_count(),
                     cyclomatic(g),
                     cfg_node_count(p),
                     cfg_edge_count(p),
                     cfg_cyclomatic(p)};
        out.total.rfg_nodes += s.rfg_nodes;
        out.total.rfg_edges += s.rfg_edges;
        out.total.rfg_cyclomatic += s.rfg_cyclomatic;
        out.total.cfg_nodes += s.cfg_nodes;
        out.total.cfg_edges += s.cfg_edges;
        out.total.cfg_cyclomatic += s.cfg_cyclomatic;
        out.procedures.push_back(std::move(s));
    }
    return out;
}

namespace {

nlohmann::ordered_json row(const GraphStats& s) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["rfg"] = {{"nodes", s.rfg_nodes}, {"edges", s.rfg_edges}, {"cyclomatic", s.rfg_cyclomatic}};
    j["cfg"] = {{"nodes", s.cfg_nodes}, {"edges", s.cfg_edges}, {"cyclomatic", s.cfg_cyclomatic}};
    j["ratio"] = s.ratio();
    return j;
}

std::string text_row(const GraphStats& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-32s %7zu %7zu %5ld %7zu %7zu %5ld %6.3f\n", s.name.c_str(),
                  s.rfg_nodes, s.rfg_edges, s.rfg_cyclomatic, s.cfg_nodes, s.cfg_edges,
                  s.cfg_cyclomatic, s.ratio());
    return buf;
}

} // namespace

std::string stats_to_json(const AppStats& stats, const ResourceSpec& spec) {
    nlohmann::ordered_json doc;
    doc["resource"] = spec.name();
    doc["procedures"] = nlohmann::ordered_json::array();
    for (const auto& s : stats.procedures) doc["procedures"].push_back(row(s));
    doc["app"] = row(stats.total);
    return doc.dump(2) + "\n";
}

std::string stats_to_text(const AppStats& stats) {
    char head[256];
    std::snprintf(head, sizeof head, "%-32s %7s %7s %5s %7s %7s %5s %6s\n", "procedure", "|V|", "|E|",
                  "M", "cfg|V|", "cfg|E|", "M'", "M/M'");
    std::string out = head;
    for (const auto& s : stats.procedures) out += text_row(s);
    out += text_row(stats.total);
    return out;
}

} // namespace drip::cli
