#ifndef VECOFFLOAD_CONFIG_IO_HPP
#define VECOFFLOAD_CONFIG_IO_HPP

// Flat key/value scenario and experiment documents: `key = value` pairs,
// `[section]` tables and repeated `[[table]]` arrays. Values are numbers,
// booleans, quoted strings, or lists of strings.

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vecoffload/errors.hpp"
#include "vecoffload/model.hpp"

namespace vecoffload {

struct ConfigValue {
    enum class Kind { Number, Boolean, String, List };
    Kind kind = Kind::Number;
    double number = 0.0;
    bool boolean = false;
    std::string text;
    std::vector<std::string> list;
};

using ConfigTable = std::map<std::string, ConfigValue>;

struct ConfigDocument {
    ConfigTable root;
    std::map<std::string, ConfigTable> sections;
    std::map<std::string, std::vector<ConfigTable>> table_arrays;
};

namespace detail {

inline std::string trim(std::string_view sv) {
    std::size_t a = 0, b = sv.size();
    while (a < b && std::isspace(static_cast<unsigned char>(sv[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(sv[b - 1]))) --b;
    return std::string(sv.substr(a, b - a));
}

inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline ConfigValue parse_value(const std::string& key, const std::string& raw) {
    ConfigValue v;
    if (raw.empty()) throw ConfigError(key, "empty value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw ConfigError(key, "unterminated string");
        v.kind = ConfigValue::Kind::String;
        v.text = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError(key, "unterminated list");
        v.kind = ConfigValue::Kind::List;
        std::string inner = raw.substr(1, raw.size() - 2);
        std::size_t pos = 0;
        while (pos <= inner.size()) {
            std::size_t comma = inner.find(',', pos);
            std::string item = trim(std::string_view(inner).substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (!item.empty()) {
                if (item.front() == '"' && item.back() == '"' && item.size() >= 2)
                    item = item.substr(1, item.size() - 2);
                v.list.push_back(item);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = ConfigValue::Kind::Boolean;
        v.boolean = (raw == "true");
        return v;
    }
    char* end = nullptr;
    v.number = std::strtod(raw.c_str(), &end);
    if (end != raw.c_str() + raw.size()) throw ConfigError(key, "not a number: " + raw);
    v.kind = ConfigValue::Kind::Number;
    return v;
}

}  // namespace detail

inline ConfigDocument parse_config(std::string_view text) {
    ConfigDocument doc;
    ConfigTable* current = &doc.root;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::trim(detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.size() >= 4 && s[1] == '[') {
                if (s.substr(s.size() - 2) != "]]")
                    throw ConfigError(s, "malformed table header at line " + std::to_string(lineno));
                std::string name = detail::trim(s.substr(2, s.size() - 4));
                doc.table_arrays[name].emplace_back();
                current = &doc.table_arrays[name].back();
            } else {
                if (s.back() != ']')
                    throw ConfigError(s, "malformed section header at line " + std::to_string(lineno));
                std::string name = detail::trim(s.substr(1, s.size() - 2));
                current = &doc.sections[name];
            }
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(s, "expected key = value at line " + std::to_string(lineno));
        std::string key = detail::trim(std::string_view(s).substr(0, eq));
        std::string raw = detail::trim(std::string_view(s).substr(eq + 1));
        if (key.empty()) throw ConfigError(s, "empty key at line " + std::to_string(lineno));
        (*current)[key] = detail::parse_value(key, raw);
    }
    return doc;
}

namespace detail {

inline double require_number(const ConfigTable& t, const std::string& key, const ConfigValue& v) {
    (void)t;
    if (v.kind != ConfigValue::Kind::Number) throw ConfigError(key, "expected a number");
    return v.number;
}

// Reads `key` into `out` when present; returns whether it consumed the key.
inline bool take_number(const ConfigTable& t, const std::string& key, double& out) {
    auto it = t.find(key);
    if (it == t.end()) return false;
    out = require_number(t, key, it->second);
    return true;
}

inline bool take_int(const ConfigTable& t, const std::string& key, int& out) {
    double d = 0.0;
    if (!take_number(t, key, d)) return false;
    out = static_cast<int>(d);
    if (static_cast<double>(out) != d) throw ConfigError(key, "expected an integer");
    return true;
}

inline bool take_bool(const ConfigTable& t, const std::string& key, bool& out) {
    auto it = t.find(key);
    if (it == t.end()) return false;
    if (it->second.kind != ConfigValue::Kind::Boolean) throw ConfigError(key, "expected a boolean");
    out = it->second.boolean;
    return true;
}

template <typename Allowed>
inline void reject_unknown_keys(const ConfigTable& t, const Allowed& allowed,
                                const std::string& where) {
    for (const auto& [key, _] : t) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(key, "unknown key in " + where);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario documents
// ---------------------------------------------------------------------------

// Parses a scenario document. Absent optional keys fall back to the values of
// the "default" preset; a document without [[task]] sections keeps the
// preset's five tasks. Throws ConfigError naming the offending key.
inline ScenarioConfig load_scenario(std::string_view text) {
    const ConfigDocument doc = parse_config(text);
    ScenarioConfig s = default_scenario("default");

    static const std::vector<std::string> top_keys = {
        "n_vehicles", "theta_veh", "theta_epc",      "r_dsrc",
        "r_cv2x",     "theta",     "horizon",        "rts_burstiness",
        "tech_mask",  "rmmw_control", "dsrc_access_overhead"};
    detail::reject_unknown_keys(doc.root, top_keys, "scenario");
    for (const auto& [name, _] : doc.sections)
        if (name != "mac") throw ConfigError(name, "unknown section");
    for (const auto& [name, _] : doc.table_arrays)
        if (name != "task") throw ConfigError(name, "unknown table array");

    detail::take_int(doc.root, "n_vehicles", s.n_vehicles);
    detail::take_number(doc.root, "theta_veh", s.theta_veh);
    detail::take_number(doc.root, "theta_epc", s.theta_epc);
    detail::take_number(doc.root, "r_dsrc", s.r_dsrc);
    detail::take_number(doc.root, "r_cv2x", s.r_cv2x);
    detail::take_number(doc.root, "theta", s.theta);
    detail::take_number(doc.root, "horizon", s.horizon);
    detail::take_number(doc.root, "rts_burstiness", s.rts_burstiness);
    detail::take_bool(doc.root, "rmmw_control", s.rmmw_control);
    double overhead = 0.0;
    if (detail::take_number(doc.root, "dsrc_access_overhead", overhead))
        s.dsrc_access_overhead_mb = overhead;
    if (auto it = doc.root.find("tech_mask"); it != doc.root.end()) {
        if (it->second.kind != ConfigValue::Kind::List)
            throw ConfigError("tech_mask", "expected a list of technology names");
        TechMask mask;
        for (const std::string& name : it->second.list) {
            auto t = parse_tech(name);
            if (!t) throw ConfigError("tech_mask", "unknown technology: " + name);
            mask = mask.with(*t);
        }
        s.tech_mask = mask;
    }

    if (auto it = doc.sections.find("mac"); it != doc.sections.end()) {
        static const std::vector<std::string> mac_keys = {"w0", "backoff_threshold", "retry_limit",
                                                          "collision_prob"};
        detail::reject_unknown_keys(it->second, mac_keys, "[mac]");
        detail::take_number(it->second, "w0", s.mac.w0);
        detail::take_int(it->second, "backoff_threshold", s.mac.backoff_threshold);
        detail::take_int(it->second, "retry_limit", s.mac.retry_limit);
        detail::take_number(it->second, "collision_prob", s.mac.collision_prob);
    }

    if (auto it = doc.table_arrays.find("task"); it != doc.table_arrays.end()) {
        static const std::vector<std::string> task_keys = {
            "lambda",     "burstiness", "t_max",   "priority",
            "complexity", "fee_cv2x",   "fee_infra", "fee_veh"};
        s.tasks.clear();
        for (const ConfigTable& tt : it->second) {
            detail::reject_unknown_keys(tt, task_keys, "[[task]]");
            TaskSpec task;
            task.burstiness = 0.0;
            if (!detail::take_number(tt, "lambda", task.arrival_rate))
                throw ConfigError("lambda", "required in every [[task]]");
            if (!detail::take_number(tt, "t_max", task.t_max))
                throw ConfigError("t_max", "required in every [[task]]");
            detail::take_number(tt, "burstiness", task.burstiness);
            detail::take_number(tt, "priority", task.priority);
            detail::take_number(tt, "complexity", task.complexity);
            detail::take_number(tt, "fee_cv2x", task.fee_cv2x);
            detail::take_number(tt, "fee_infra", task.fee_infra);
            detail::take_number(tt, "fee_veh", task.fee_veh);
            s.tasks.push_back(task);
        }
    }

    const std::vector<std::string> violations = validate(s);
    if (!violations.empty()) throw ConfigError(violations.front(), "invariant violated");
    return s;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

// Scenario by preset name or file path.
inline ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    if (name_or_path == "default" || name_or_path == "light" || name_or_path == "heavy")
        return default_scenario(name_or_path);
    return load_scenario_file(name_or_path);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Canonical text form; load_scenario(serialize(s)) == s.
inline std::string serialize(const ScenarioConfig& s) {
    std::ostringstream out;
    auto num = [&](const char* key, double v) { out << key << " = " << detail::format_double(v) << "\n"; };
    out << "n_vehicles = " << s.n_vehicles << "\n";
    num("theta_veh", s.theta_veh);
    num("theta_epc", s.theta_epc);
    num("r_dsrc", s.r_dsrc);
    num("r_cv2x", s.r_cv2x);
    num("theta", s.theta);
    num("horizon", s.horizon);
    num("rts_burstiness", s.rts_burstiness);
    out << "tech_mask = [";
    bool first = true;
    for (TechKind t : s.tech_mask.techs()) {
        out << (first ? "" : ", ") << '"' << tech_name(t) << '"';
        first = false;
    }
    out << "]\n";
    out << "rmmw_control = " << (s.rmmw_control ? "true" : "false") << "\n";
    if (s.dsrc_access_overhead_mb) num("dsrc_access_overhead", *s.dsrc_access_overhead_mb);
    out << "\n[mac]\n";
    num("w0", s.mac.w0);
    out << "backoff_threshold = " << s.mac.backoff_threshold << "\n";
    out << "retry_limit = " << s.mac.retry_limit << "\n";
    num("collision_prob", s.mac.collision_prob);
    for (const TaskSpec& t : s.tasks) {
        out << "\n[[task]]\n";
        num("lambda", t.arrival_rate);
        num("burstiness", t.burstiness);
        num("t_max", t.t_max);
        num("priority", t.priority);
        num("complexity", t.complexity);
        num("fee_cv2x", t.fee_cv2x);
        num("fee_infra", t.fee_infra);
        num("fee_veh", t.fee_veh);
    }
    return out.str();
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_CONFIG_IO_HPP
