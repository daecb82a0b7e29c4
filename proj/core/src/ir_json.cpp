#include "drip/ir.hpp"

#include <nlohmann/json.hpp>

namespace drip {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

const json& member(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(where + ": missing field '" + key + "'");
    }
    return *it;
}

void expect_object(const json& v, const std::string& where) {
    if (!v.is_object()) throw SchemaError(where + ": expected an object");
}

const json& array_member(const json& obj, const char* key, const std::string& where) {
    const auto& v = member(obj, key, where);
    if (!v.is_array()) throw SchemaError(where + ": field '" + key + "' must be an array");
    return v;
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw SchemaError(where + ": expected a string");
    return v.get<std::string>();
}

std::string string_member(const json& obj, const char* key, const std::string& where) {
    return as_string(member(obj, key, where), where + "." + key);
}

std::string optional_string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    return as_string(*it, where + "." + key);
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where) {
    std::vector<std::string> out;
    for (const auto& v : array_member(obj, key, where)) {
        out.push_back(as_string(v, where + "." + key));
    }
    return out;
}

Statement parse_statement(const json& j, const std::string& where) {
    expect_object(j, where);
    auto op = string_member(j, "op", where);
    auto kind = stmt_kind_from_string(op);
    if (!kind) throw SchemaError(where + ": unknown statement op '" + op + "'");
    Statement s;
    s.kind = *kind;
    s.api = optional_string(j, "api", where);
    s.target = optional_string(j, "target", where);
    s.callee = optional_string(j, "callee", where);
    return s;
}

Procedure parse_procedure(const json& j) {
    expect_object(j, "procedure");
    Procedure p;
    p.name = string_member(j, "name", "procedure");
    const std::string where = "procedure '" + p.name + "'";
    p.entry = string_member(j, "entry", where);
    for (const auto& jb : array_member(j, "blocks", where)) {
        expect_object(jb, where + " block");
        BasicBlock b;
        b.id = string_member(jb, "id", where + " block");
        const std::string bwhere = p.name + "/" + b.id;
        const auto& stmts = array_member(jb, "statements", bwhere);
        for (std::size_t i = 0; i < stmts.size(); ++i) {
            b.statements.push_back(parse_statement(stmts[i], bwhere + "/" + std::to_string(i)));
        }
        if (jb.contains("successors")) b.successors = string_list(jb, "successors", bwhere);
        p.blocks.push_back(std::move(b));
    }
    if (j.contains("locals")) p.locals = string_list(j, "locals", where);
    return p;
}

Component parse_component(const json& j) {
    expect_object(j, "component");
    Component c;
    c.name = string_member(j, "name", "component");
    const std::string where = "component '" + c.name + "'";
    if (j.contains("lifecycle")) c.lifecycle = string_member(j, "lifecycle", where);
    if (j.contains("callbacks")) {
        const auto& cbs = j.at("callbacks");
        expect_object(cbs, where + ".callbacks");
        for (const auto& [cb, proc] : cbs.items()) {
            c.callbacks.emplace(cb, as_string(proc, where + ".callbacks." + cb));
        }
    }
    return c;
}

CallbackGraph parse_lifecycle(const json& j) {
    expect_object(j, "lifecycle");
    CallbackGraph g;
    g.name = string_member(j, "name", "lifecycle");
    const std::string where = "lifecycle '" + g.name + "'";
    g.states = string_list(j, "states", where);
    g.initial = string_member(j, "initial", where);
    for (const auto& je : array_member(j, "edges", where)) {
        expect_object(je, where + " edge");
        CallbackEdge e;
        e.from = string_member(je, "from", where + " edge");
        e.to = string_member(je, "to", where + " edge");
        e.callbacks = string_list(je, "callbacks", where + " edge");
        g.edges.push_back(std::move(e));
    }
    return g;
}

ojson statement_json(const Statement& s) {
    ojson j;
    j["op"] = std::string(to_string(s.kind));
    if (!s.api.empty()) j["api"] = s.api;
    if (!s.target.empty()) j["target"] = s.target;
    if (!s.callee.empty()) j["callee"] = s.callee;
    return j;
}

} // namespace

AppModel parse_app(std::string_view text) {
    auto doc = parse_document(text);
    expect_object(doc, "app document");
    auto name = string_member(doc, "app", "app document");
    std::vector<Component> components;
    for (const auto& jc : array_member(doc, "components", "app document")) {
        components.push_back(parse_component(jc));
    }
    std::vector<Procedure> procedures;
    for (const auto& jp : array_member(doc, "procedures", "app document")) {
        procedures.push_back(parse_procedure(jp));
    }
    std::vector<CallbackGraph> lifecycles;
    if (doc.contains("lifecycles")) {
        for (const auto& jl : array_member(doc, "lifecycles", "app document")) {
            lifecycles.push_back(parse_lifecycle(jl));
        }
    }
    return AppModel::create(std::move(name), std::move(components), std::move(procedures),
                            std::move(lifecycles));
}

std::string serialize_app(const AppModel& app) {
    ojson doc;
    doc["app"] = app.name();
    doc["components"] = ojson::array();
    for (const auto& c : app.components()) {
        ojson jc;
        jc["name"] = c.name;
        jc["lifecycle"] = c.lifecycle;
        jc["callbacks"] = ojson::object();
        for (const auto& [cb, proc] : c.callbacks) jc["callbacks"][cb] = proc;
        doc["components"].push_back(std::move(jc));
    }
    doc["procedures"] = ojson::array();
    for (const auto& [_, p] : app.procedures()) {
        ojson jp;
        jp["name"] = p.name;
        jp["entry"] = p.entry;
        if (!p.locals.empty()) jp["locals"] = p.locals;
        jp["blocks"] = ojson::array();
        for (const auto& b : p.blocks) {
            ojson jb;
            jb["id"] = b.id;
            jb["statements"] = ojson::array();
            for (const auto& s : b.statements) jb["statements"].push_back(statement_json(s));
            jb["successors"] = b.successors;
            jp["blocks"].push_back(std::move(jb));
        }
        doc["procedures"].push_back(std::move(jp));
    }
    if (!app.lifecycles().empty()) {
        doc["lifecycles"] = ojson::array();
        for (const auto& [_, g] : app.lifecycles()) {
            ojson jl;
            jl["name"] = g.name;
            jl["states"] = g.states;
            jl["initial"] = g.initial;
            jl["edges"] = ojson::array();
            for (const auto& e : g.edges) {
                jl["edges"].push_back({{"from", e.from}, {"to", e.to}, {"callbacks", e.callbacks}});
            }
            doc["lifecycles"].push_back(std::move(jl));
        }
    }
    return doc.dump(2) + "\n";
}

ResourceSpec parse_resource_spec(std::string_view text) {
    auto doc = parse_document(text);
    const std::string where = "resource spec";
    expect_object(doc, where);
    auto name = string_member(doc, "resource", where);
    const auto& reentrant = member(doc, "reentrant", where);
    if (!reentrant.is_boolean()) throw SchemaError(where + ": 'reentrant' must be a boolean");
    std::vector<ReleasePair> pairs;
    for (const auto& jp : array_member(doc, "pairs", where)) {
        if (!jp.is_array() || jp.size() != 2) {
            throw SchemaError(where + ": each pair must be a two-element array");
        }
        pairs.push_back({as_string(jp[0], where + ".pairs"), as_string(jp[1], where + ".pairs")});
    }
    auto callbacks = string_list(doc, "release_callbacks", where);
    std::optional<std::string> held;
    if (auto h = optional_string(doc, "held_check", where); !h.empty()) held = std::move(h);
    return ResourceSpec(std::move(name), std::move(pairs), reentrant.get<bool>(),
                        std::move(callbacks), std::move(held));
}

std::string serialize_resource_spec(const ResourceSpec& spec) {
    ojson doc;
    doc["resource"] = spec.name();
    doc["reentrant"] = spec.reentrant();
    doc["pairs"] = ojson::array();
    for (const auto& p : spec.pairs()) doc["pairs"].push_back({p.acquire, p.release});
    doc["release_callbacks"] = spec.release_callbacks();
    if (spec.held_check()) doc["held_check"] = *spec.held_check();
    return doc.dump(2) + "\n";
}

} // namespace drip
