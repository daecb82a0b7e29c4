#pragma once

#include <string>
#include <vector>

#include "drip/ir.hpp"

namespace drip::cli {

struct GraphStats {
    std::string name;
    std::size_t rfg_nodes = 0;
    std::size_t rfg_edges = 0;
    long rfg_cyclomatic = 0;
    std::size_t cfg_nodes = 0;
    std::size_t cfg_edges = 0;
    long cfg_cyclomatic = 0;

    [[nodiscard]] double ratio() const;
};

struct AppStats {
    std::vector<GraphStats> procedures;
    GraphStats total; // sums; complexity of the disjoint union
};

[[nodiscard]] AppStats app_stats(const AppModel& app, const ResourceSpec& spec);
[[nodiscard]] std::string stats_to_json(const AppStats& stats, const ResourceSpec& spec);
[[nodiscard]] std::string stats_to_text(const AppStats& stats);

} // namespace drip::cli
