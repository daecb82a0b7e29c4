#pragma once

#include <nlohmann/json.hpp>

#include "drip/analysis.hpp"

namespace drip::json_util {

using ojson = nlohmann::ordered_json;

inline ojson origin(const Origin& o) {
    return {{"procedure", o.procedure}, {"block", o.block}, {"index", o.index}};
}

inline ojson optional_origin(const std::optional<Origin>& o) {
    return o ? origin(*o) : ojson(nullptr);
}

inline ojson witness(const Witness& w) {
    ojson j;
    j["symbols"] = plain_symbols(w);
    j["provenance"] = ojson::array();
    for (const auto& p : w.provenance) j["provenance"].push_back(optional_origin(p));
    return j;
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

} // namespace drip::json_util
