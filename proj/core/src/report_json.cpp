#include "json_util.hpp"

namespace drip {

std::string reports_to_json(const AnalysisResult& result, const ResourceSpec& spec, int depth,
                            AnalysisOptions options) {
    using json_util::ojson;
    ojson doc;
    doc["resource"] = spec.name();
    doc["depth"] = depth;
    doc["release_policy"] = std::string(to_string(options.policy));
    doc["leaks"] = ojson::array();
    for (const auto& r : result.reports) {
        ojson j;
        j["component"] = r.component;
        j["release_callback"] = r.release_callback;
        j["callback_sequence"] = r.callback_sequence;
        j["acquire"] = json_util::origin(r.acquire_origin);
        j["witness"] = json_util::witness(r.witness);
        doc["leaks"].push_back(std::move(j));
    }
    doc["warnings"] = result.warnings;
    return doc.dump(2) + "\n";
}

std::string reports_to_text(const AnalysisResult& result) {
    std::string out;
    for (const auto& r : result.reports) {
        out += r.component + ": " + r.resource + " acquired at " + r.acquire_origin.to_string() +
               " is not released by " + r.release_callback + "\n";
        out += "  callbacks: " + json_util::join(r.callback_sequence, " ") + "\n";
        out += "  witness:   " + json_util::join(plain_symbols(r.witness), " ") + "\n";
    }
    out += std::to_string(result.reports.size()) + (result.reports.size() == 1 ? " leak" : " leaks") +
           "\n";
    return out;
}

} // namespace drip
