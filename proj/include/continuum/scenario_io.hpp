#ifndef CONTINUUM_SCENARIO_IO_HPP
#define CONTINUUM_SCENARIO_IO_HPP

#include <continuum/errors.hpp>
#include <continuum/scenario.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace continuum {

using Json = nlohmann::ordered_json;

namespace detail {

inline void require_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        throw ParseError(std::string(where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(std::string(where) + ": unknown key '" + key + "'");
    }
}

inline const Json& member(const Json& obj, std::string_view where, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string(where) + ": missing key '" + key + "'");
    return *it;
}

inline std::int64_t get_int(const Json& obj, std::string_view where, const char* key)
{
    const auto& v = member(obj, where, key);
    if (!v.is_number_integer())
        throw ParseError(std::string(where) + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

inline double get_number(const Json& obj, std::string_view where, const char* key)
{
    const auto& v = member(obj, where, key);
    if (!v.is_number())
        throw ParseError(std::string(where) + "." + key + ": expected a number");
    return v.get<double>();
}

inline double get_number_or(const Json& obj, std::string_view where, const char* key, double fallback)
{
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

inline std::string get_string(const Json& obj, std::string_view where, const char* key)
{
    const auto& v = member(obj, where, key);
    if (!v.is_string())
        throw ParseError(std::string(where) + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline const Json& get_array(const Json& obj, std::string_view where, const char* key)
{
    const auto& v = member(obj, where, key);
    if (!v.is_array())
        throw ParseError(std::string(where) + "." + key + ": expected an array");
    return v;
}

inline ResourceVector resources_from_json(const Json& j, const std::string& where)
{
    require_keys(j, where, {"cpu", "ram", "storage"});
    return {get_int(j, where, "cpu"), get_int(j, where, "ram"), get_int(j, where, "storage")};
}

inline Json resources_to_json(const ResourceVector& r)
{
    Json j;
    j["cpu"] = r.cpu;
    j["ram"] = r.ram;
    j["storage"] = r.storage;
    return j;
}

} // namespace detail

inline std::string_view to_string(Tier t) { return t == Tier::cloud ? "cloud" : "edge"; }
inline std::string_view to_string(ElementKind k) { return k == ElementKind::base_station ? "base_station" : "switch"; }

inline Json to_json(const ModelWeights& w)
{
    Json j;
    j["alpha"] = w.alpha;
    j["beta"] = w.beta;
    j["gamma_w"] = w.gamma_w;
    j["omega"] = w.omega;
    j["rho"] = w.rho;
    j["eta"] = w.eta;
    return j;
}

inline Json to_json(const Scenario& s)
{
    Json j;
    j["nodes"] = Json::array();
    for (const auto& n : s.nodes) {
        Json e;
        e["id"] = n.id;
        e["tier"] = to_string(n.tier);
        e["capacity"] = detail::resources_to_json(n.capacity);
        e["power_idle"] = n.power_idle;
        e["power_max"] = n.power_max;
        j["nodes"].push_back(std::move(e));
    }
    j["elements"] = Json::array();
    for (const auto& el : s.elements)
        j["elements"].push_back(Json{{"id", el.id}, {"kind", to_string(el.kind)}});
    j["links"] = Json::array();
    for (const auto& l : s.links) {
        Json e;
        e["endpoint_a"] = l.endpoint_a;
        e["endpoint_b"] = l.endpoint_b;
        e["bandwidth"] = l.bandwidth;
        e["latency"] = l.latency;
        e["max_delay"] = l.max_delay;
        j["links"].push_back(std::move(e));
    }
    j["users"] = Json::array();
    for (const auto& u : s.users)
        j["users"].push_back(Json{{"id", u.id}, {"base_station", u.base_station}});
    j["tasks"] = Json::array();
    for (const auto& t : s.tasks) {
        Json e;
        e["id"] = t.id;
        e["user"] = t.user;
        e["demand"] = detail::resources_to_json(t.demand);
        e["processing_time"] = t.processing_time;
        e["data_size"] = t.data_size;
        e["arrival"] = t.arrival;
        e["deadline"] = t.deadline;
        e["penalty"] = t.penalty;
        j["tasks"].push_back(std::move(e));
    }
    j["weights"] = to_json(s.weights);
    j["horizon_ms"] = s.horizon;
    j["cloud_enabled"] = s.cloud_enabled;
    return j;
}

inline ModelWeights weights_from_json(const Json& j)
{
    constexpr std::string_view where = "weights";
    detail::require_keys(j, where, {"alpha", "beta", "gamma_w", "omega", "rho", "eta"});
    ModelWeights w;
    w.alpha = detail::get_number_or(j, where, "alpha", w.alpha);
    w.beta = detail::get_number_or(j, where, "beta", w.beta);
    w.gamma_w = detail::get_number_or(j, where, "gamma_w", w.gamma_w);
    w.omega = detail::get_number_or(j, where, "omega", w.omega);
    w.rho = detail::get_number_or(j, where, "rho", w.rho);
    w.eta = detail::get_number_or(j, where, "eta", w.eta);
    return w;
}

/// Strict structural decode: unknown keys and wrong types are parse errors.
/// Does not check semantic invariants; see validate().
inline Scenario scenario_from_json(const Json& j)
{
    using namespace detail;
    require_keys(j, "scenario", {"nodes", "elements", "links", "users", "tasks", "weights", "horizon_ms", "cloud_enabled"});

    Scenario s;
    for (const auto& e : get_array(j, "scenario", "nodes")) {
        const std::string where = "nodes[" + std::to_string(s.nodes.size()) + "]";
        require_keys(e, where, {"id", "tier", "capacity", "power_idle", "power_max"});
        ComputeNode n;
        n.id = get_string(e, where, "id");
        auto tier = get_string(e, where, "tier");
        if (tier == "edge")
            n.tier = Tier::edge;
        else if (tier == "cloud")
            n.tier = Tier::cloud;
        else
            throw ParseError(where + ".tier: expected 'edge' or 'cloud'");
        n.capacity = resources_from_json(member(e, where, "capacity"), where + ".capacity");
        n.power_idle = get_number(e, where, "power_idle");
        n.power_max = get_number(e, where, "power_max");
        s.nodes.push_back(std::move(n));
    }
    for (const auto& e : get_array(j, "scenario", "elements")) {
        const std::string where = "elements[" + std::to_string(s.elements.size()) + "]";
        require_keys(e, where, {"id", "kind"});
        NetworkElement el;
        el.id = get_string(e, where, "id");
        auto kind = get_string(e, where, "kind");
        if (kind == "switch")
            el.kind = ElementKind::network_switch;
        else if (kind == "base_station")
            el.kind = ElementKind::base_station;
        else
            throw ParseError(where + ".kind: expected 'switch' or 'base_station'");
        s.elements.push_back(std::move(el));
    }
    for (const auto& e : get_array(j, "scenario", "links")) {
        const std::string where = "links[" + std::to_string(s.links.size()) + "]";
        require_keys(e, where, {"endpoint_a", "endpoint_b", "bandwidth", "latency", "max_delay"});
        Link l;
        l.endpoint_a = get_string(e, where, "endpoint_a");
        l.endpoint_b = get_string(e, where, "endpoint_b");
        l.bandwidth = get_number(e, where, "bandwidth");
        l.latency = get_int(e, where, "latency");
        l.max_delay = get_number_or(e, where, "max_delay", unconstrained_delay_ms);
        s.links.push_back(std::move(l));
    }
    for (const auto& e : get_array(j, "scenario", "users")) {
        const std::string where = "users[" + std::to_string(s.users.size()) + "]";
        require_keys(e, where, {"id", "base_station"});
        s.users.push_back({get_string(e, where, "id"), get_string(e, where, "base_station")});
    }
    for (const auto& e : get_array(j, "scenario", "tasks")) {
        const std::string where = "tasks[" + std::to_string(s.tasks.size()) + "]";
        require_keys(e, where, {"id", "user", "demand", "processing_time", "data_size", "arrival", "deadline", "penalty"});
        Task t;
        t.id = get_string(e, where, "id");
        t.user = get_string(e, where, "user");
        t.demand = resources_from_json(member(e, where, "demand"), where + ".demand");
        t.processing_time = get_int(e, where, "processing_time");
        t.data_size = get_number_or(e, where, "data_size", 0.0);
        t.arrival = get_int(e, where, "arrival");
        t.deadline = get_int(e, where, "deadline");
        t.penalty = get_number_or(e, where, "penalty", 1.0);
        s.tasks.push_back(std::move(t));
    }
    if (j.contains("weights"))
        s.weights = weights_from_json(j["weights"]);
    if (j.contains("horizon_ms"))
        s.horizon = get_int(j, "scenario", "horizon_ms");
    if (j.contains("cloud_enabled")) {
        if (!j["cloud_enabled"].is_boolean())
            throw ParseError("scenario.cloud_enabled: expected a boolean");
        s.cloud_enabled = j["cloud_enabled"].get<bool>();
    }
    return s;
}

/// Applies one `dotted.path=value` override to a JSON document. Numeric path
/// segments index arrays. The value is read as JSON when it parses, otherwise
/// it is taken as a plain string.
inline void apply_override(Json& doc, std::string_view assignment)
{
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ParseError("override '" + std::string(assignment) + "': expected key=value");
    std::string path(assignment.substr(0, eq));
    std::string raw(assignment.substr(eq + 1));

    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded())
        value = raw;

    Json* cursor = &doc;
    std::stringstream segments(path);
    std::string segment;
    std::vector<std::string> parts;
    while (std::getline(segments, segment, '.'))
        parts.push_back(segment);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& part = parts[i];
        const bool last = i + 1 == parts.size();
        if (cursor->is_array()) {
            std::size_t index = 0;
            try {
                index = std::stoul(part);
            } catch (const std::exception&) {
                throw ParseError("override '" + path + "': '" + part + "' is not an array index");
            }
            if (index >= cursor->size())
                throw ParseError("override '" + path + "': index " + part + " out of range");
            cursor = &(*cursor)[index];
        } else if (cursor->is_object() || cursor->is_null()) {
            cursor = &(*cursor)[part];
        } else {
            throw ParseError("override '" + path + "': cannot descend into a scalar");
        }
        if (last)
            *cursor = value;
    }
}

inline Json parse_json_document(std::string_view text)
{
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ParseError("malformed JSON document");
    return doc;
}

inline Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_document(buf.str());
}

/// Decodes and applies overrides without semantic validation.
inline Scenario read_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {})
{
    Json doc = read_json_file(path);
    for (const auto& o : overrides)
        apply_override(doc, o);
    return scenario_from_json(doc);
}

inline void ensure_valid(const Scenario& s)
{
    auto violations = validate(s);
    if (!violations.empty())
        throw ValidationError(violations.front().to_string());
}

/// Reads, overrides and validates a scenario file. Throws ParseError or
/// ValidationError naming the first violated invariant.
inline Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {})
{
    Scenario s = read_scenario(path, overrides);
    ensure_valid(s);
    return s;
}

inline std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

} // namespace continuum

#endif // CONTINUUM_SCENARIO_IO_HPP
