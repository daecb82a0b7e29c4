#include "drip/repair.hpp"

#include <algorithm>

#include "json_util.hpp"

namespace drip {

namespace {

using json_util::ojson;

ojson violations_json(const ValidationResult& result) {
    ojson out = ojson::array();
    for (const auto& v : result.violations) {
        ojson j;
        j["kind"] = std::string(to_string(v.kind));
        j["component"] = v.component;
        j["acquire"] = json_util::optional_origin(v.origin);
        j["witness"] = json_util::witness(v.witness);
        out.push_back(std::move(j));
    }
    return out;
}

ojson validation_json(const ValidationResult& result) {
    ojson j;
    j["verdict"] = std::string(to_string(result.verdict));
    j["violations"] = violations_json(result);
    return j;
}

std::string render(const Statement& s) {
    std::string out(to_string(s.kind));
    switch (s.kind) {
    case StmtKind::Call: return out + " " + s.callee;
    case StmtKind::Use: return out + " " + s.target;
    case StmtKind::Return: return out;
    case StmtKind::Other: return s.api.empty() ? out : out + " " + s.api;
    default: return out + " " + s.api + " " + s.target;
    }
}

std::vector<std::string> listing(const Procedure& p) {
    std::vector<std::string> out;
    for (const auto& b : p.blocks) {
        std::string head = b.id + ":";
        if (!b.successors.empty()) head += " -> " + json_util::join(b.successors, ", ");
        out.push_back(head);
        for (const auto& s : b.statements) out.push_back("  " + render(s));
    }
    return out;
}

// Line diff by longest common subsequence.
std::string diff_lines(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const auto n = a.size();
    const auto m = b.size();
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    std::string out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) {
            out += " " + a[i++] + "\n";
            ++j;
        } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
            out += "+" + b[j++] + "\n";
        } else {
            out += "-" + a[i++] + "\n";
        }
    }
    return out;
}

std::vector<std::string> bindings(const Component& c) {
    std::vector<std::string> out;
    for (const auto& [cb, proc] : c.callbacks) out.push_back(cb + " -> " + proc);
    return out;
}

} // namespace

std::string validation_to_json(const ValidationResult& result, const ResourceSpec& spec) {
    ojson doc;
    doc["resource"] = spec.name();
    doc["verdict"] = std::string(to_string(result.verdict));
    doc["violations"] = violations_json(result);
    return doc.dump(2) + "\n";
}

std::string validation_to_text(const ValidationResult& result) {
    std::string out;
    for (const auto& v : result.violations) {
        out += v.component + ": " + std::string(to_string(v.kind));
        if (v.origin) out += " of the acquire at " + v.origin->to_string();
        out += "\n  witness:   " + json_util::join(plain_symbols(v.witness), " ") + "\n";
    }
    out += std::string(to_string(result.verdict)) + "\n";
    return out;
}

std::string patch_bundle_json(const RepairResult& result, const ResourceSpec& spec) {
    ojson doc;
    doc["resource"] = spec.name();
    doc["fixes"] = ojson::array();
    for (const auto& applied : result.fixes) {
        const auto& f = applied.fix;
        ojson j;
        j["resource"] = f.resource;
        j["component"] = f.component;
        j["location"] = json_util::origin(f.location);
        j["release_op"] = f.release_op;
        j["target"] = f.target_ref;
        j["guarded"] = f.guarded ? ojson(*f.guarded) : ojson(nullptr);
        j["introduces_field"] = f.introduces_field ? ojson(*f.introduces_field) : ojson(nullptr);
        j["acquire"] = json_util::origin(f.acquire_origin);
        j["synthesized_callback"] =
            f.synthesized_callback ? ojson(*f.synthesized_callback) : ojson(nullptr);
        j["validation"] = applied.validation ? validation_json(*applied.validation) : ojson(nullptr);
        doc["fixes"].push_back(std::move(j));
    }
    doc["validation"] = result.validation ? validation_json(*result.validation) : ojson(nullptr);
    doc["errors"] = result.errors;
    doc["warnings"] = result.warnings;
    doc["patched_app"] = ojson::parse(serialize_app(result.patched));
    return doc.dump(2) + "\n";
}

std::string patch_diff(const AppModel& before, const AppModel& after) {
    std::string out;
    std::set<std::string> names;
    for (const auto& [name, _] : before.procedures()) names.insert(name);
    for (const auto& [name, _] : after.procedures()) names.insert(name);
    for (const auto& name : names) {
        const auto* a = before.find_procedure(name);
        const auto* b = after.find_procedure(name);
        if (a && b && *a == *b) continue;
        out += "@@ procedure " + name + " @@\n";
        out += diff_lines(a ? listing(*a) : std::vector<std::string>{},
                          b ? listing(*b) : std::vector<std::string>{});
    }
    for (const auto& c : after.components()) {
        const auto* old = before.find_component(c.name);
        if (old && *old == c) continue;
        out += "@@ component " + c.name + " @@\n";
        out += diff_lines(old ? bindings(*old) : std::vector<std::string>{}, bindings(c));
    }
    if (out.empty()) return out;
    return "--- " + before.name() + "\n+++ " + after.name() + "\n" + out;
}

} // namespace drip
