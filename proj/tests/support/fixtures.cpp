#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace drip::test {

std::string data_path(const std::string& relative) { return std::string(DRIP_DATA_DIR) + "/" + relative; }

AppModel fixture(const std::string& name) { return load_app(data_path("apps/" + name + ".json")); }

ResourceSpec resource(const std::string& name) {
    return load_resource_spec(data_path("resources/" + name + ".json"));
}

std::vector<ResourceSpec> all_resources() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(data_path("resources"))) {
        names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    std::vector<ResourceSpec> out;
    for (const auto& n : names) out.push_back(resource(n));
    return out;
}

std::vector<std::string> words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::set<OracleLeak> leak_keys(const std::vector<LeakReport>& reports) {
    std::set<OracleLeak> out;
    for (const auto& r : reports) out.insert({r.component, r.acquire_origin});
    return out;
}

std::set<OracleViolation> violation_keys(const ValidationResult& result) {
    std::set<OracleViolation> out;
    for (const auto& v : result.violations) out.insert({v.component, std::string(to_string(v.kind))});
    return out;
}

namespace {

// Edit distance between statement lists restricted to insert/delete, plus in-place rewrites.
std::size_t diff_count(const std::vector<Statement>& a, const std::vector<Statement>& b) {
    const auto n = a.size();
    const auto m = b.size();
    std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
    }
    return d[n][m];
}

} // namespace

std::size_t changed_statements(const AppModel& before, const AppModel& after) {
    std::size_t total = 0;
    std::set<std::string> names;
    for (const auto& [n, _] : before.procedures()) names.insert(n);
    for (const auto& [n, _] : after.procedures()) names.insert(n);
    for (const auto& name : names) {
        const auto* p = before.find_procedure(name);
        const auto* q = after.find_procedure(name);
        std::map<std::string, std::pair<std::vector<Statement>, std::vector<Statement>>> blocks;
        if (p) {
            for (const auto& b : p->blocks) blocks[b.id].first = b.statements;
        }
        if (q) {
            for (const auto& b : q->blocks) blocks[b.id].second = b.statements;
        }
        for (const auto& [_, pair] : blocks) total += diff_count(pair.first, pair.second);
    }
    return total;
}

} // namespace drip::test
