#include "schoolsim/config.hpp"

#include <fstream>

namespace schoolsim {

using nlohmann::json;

// Calibrated anchors for the default scenario. Reproduce with
// `schoolsim calibrate-gamma --target-rs 3.0 --populations 1000 --resamples 10
//  --grid-n 100 --seed 20240999` and
// `schoolsim calibrate-eta --target-x 0.6 --samples 100000 --seed 20240999`.
static constexpr double kDefaultGamma = 0.03991913239861386;
static constexpr double kDefaultEta = 1.7507691393088258;

ScenarioConfig default_config()
{
    ScenarioConfig c;
    c.infectivity.gamma = kDefaultGamma;
    c.lfd.eta = kDefaultEta;
    return c;
}

static void require_known_keys(const json& obj, const std::string& path,
                               std::initializer_list<const char*> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config: unknown key '" +
                              (path.empty() ? it.key() : path + "." + it.key()) + "'");
    }
}

static std::string joined(const std::string& path, const char* key)
{
    return path.empty() ? key : path + "." + key;
}

static void read_double(const json& obj, const std::string& path, const char* key,
                        double& target)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("config: '" + joined(path, key) + "' must be a number");
    target = v.get<double>();
}

static void read_int(const json& obj, const std::string& path, const char* key,
                     int& target)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError("config: '" + joined(path, key) + "' must be an integer");
    target = v.get<int>();
}

static void read_u64(const json& obj, const std::string& path, const char* key,
                     std::uint64_t& target)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError("config: '" + joined(path, key) + "' must be an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw ConfigError("config: '" + joined(path, key) + "' must be non-negative");
    target = v.get<std::uint64_t>();
}

static void read_bool(const json& obj, const std::string& path, const char* key,
                      bool& target)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ConfigError("config: '" + joined(path, key) + "' must be a boolean");
    target = v.get<bool>();
}

ScenarioConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");
    require_known_keys(j, "",
                       {"schema_version", "lli", "school", "contacts", "disease", "noise",
                        "infectivity", "lfd", "pcr", "compliance", "policy",
                        "horizon_days", "external_infection_prob", "replications",
                        "base_seed", "emit_daily", "grid"});

    if (!j.contains("schema_version"))
        throw ConfigError("config: missing 'schema_version'");
    if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != 1)
        throw ConfigError("config: 'schema_version' must be the integer 1");

    ScenarioConfig c = default_config();

    double lli = c.disease.lli;
    {
        json holder = json::object();
        if (j.contains("lli"))
            holder["lli"] = j.at("lli");
        read_double(holder, "", "lli", lli);
    }
    c.disease.lli = lli;
    c.infectivity.lli = lli;

    if (j.contains("school")) {
        const json& o = j.at("school");
        if (!o.is_object())
            throw ConfigError("config: 'school' must be an object");
        require_known_keys(o, "school",
                           {"years", "classes_per_year", "bubbles_per_class",
                            "pupils_per_bubble"});
        read_int(o, "school", "years", c.school.years);
        read_int(o, "school", "classes_per_year", c.school.classes_per_year);
        read_int(o, "school", "bubbles_per_class", c.school.bubbles_per_class);
        read_int(o, "school", "pupils_per_bubble", c.school.pupils_per_bubble);
    }

    if (j.contains("contacts")) {
        const json& o = j.at("contacts");
        if (!o.is_object())
            throw ConfigError("config: 'contacts' must be an object");
        require_known_keys(o, "contacts", {"p_bubble", "p_class", "p_school"});
        ContactStructure cs = ContactStructure::defaults_for(c.school);
        read_double(o, "contacts", "p_bubble", cs.p_bubble);
        read_double(o, "contacts", "p_class", cs.p_class);
        read_double(o, "contacts", "p_school", cs.p_school);
        c.contacts = cs;
    }

    if (j.contains("disease")) {
        const json& o = j.at("disease");
        if (!o.is_object())
            throw ConfigError("config: 'disease' must be an object");
        require_known_keys(o, "disease", {"p_symptomatic", "noncovid_symptom_rate", "t0"});
        read_double(o, "disease", "p_symptomatic", c.disease.p_symptomatic);
        read_double(o, "disease", "noncovid_symptom_rate", c.disease.noncovid_symptom_rate);
        read_double(o, "disease", "t0", c.disease.t0);
    }

    if (j.contains("noise")) {
        const json& o = j.at("noise");
        if (!o.is_object())
            throw ConfigError("config: 'noise' must be an object");
        require_known_keys(o, "noise",
                           {"enabled", "dof", "amplitude", "length_scale", "window_days",
                            "max_log10_vl", "max_attempts"});
        read_bool(o, "noise", "enabled", c.noise.enabled);
        read_double(o, "noise", "dof", c.noise.dof);
        read_double(o, "noise", "amplitude", c.noise.amplitude);
        read_double(o, "noise", "length_scale", c.noise.length_scale);
        read_int(o, "noise", "window_days", c.noise.window_days);
        read_double(o, "noise", "max_log10_vl", c.noise.max_log10_vl);
        read_int(o, "noise", "max_attempts", c.noise.max_attempts);
    }

    if (j.contains("infectivity")) {
        const json& o = j.at("infectivity");
        if (!o.is_object())
            throw ConfigError("config: 'infectivity' must be an object");
        require_known_keys(o, "infectivity", {"gamma"});
        read_double(o, "infectivity", "gamma", c.infectivity.gamma);
    }

    if (j.contains("lfd")) {
        const json& o = j.at("lfd");
        if (!o.is_object())
            throw ConfigError("config: 'lfd' must be an object");
        require_known_keys(o, "lfd",
                           {"beta_test", "c_test", "eta", "specificity", "ar_gain",
                            "ar_window", "beta_u"});
        read_double(o, "lfd", "beta_test", c.lfd.beta_test);
        read_double(o, "lfd", "c_test", c.lfd.c_test);
        read_double(o, "lfd", "eta", c.lfd.eta);
        read_double(o, "lfd", "specificity", c.lfd.specificity);
        read_double(o, "lfd", "ar_gain", c.lfd.ar_gain);
        read_int(o, "lfd", "ar_window", c.lfd.ar_window);
        read_double(o, "lfd", "beta_u", c.lfd.beta_u);
    }

    if (j.contains("pcr")) {
        const json& o = j.at("pcr");
        if (!o.is_object())
            throw ConfigError("config: 'pcr' must be an object");
        require_known_keys(o, "pcr", {"sensitivity", "lod", "specificity", "turnaround_days"});
        read_double(o, "pcr", "sensitivity", c.pcr.sensitivity);
        read_double(o, "pcr", "lod", c.pcr.lod);
        read_double(o, "pcr", "specificity", c.pcr.specificity);
        read_int(o, "pcr", "turnaround_days", c.pcr.turnaround_days);
    }

    if (j.contains("compliance")) {
        const json& o = j.at("compliance");
        if (!o.is_object())
            throw ConfigError("config: 'compliance' must be an object");
        require_known_keys(o, "compliance", {"enabled", "beta_alpha", "beta_beta"});
        read_bool(o, "compliance", "enabled", c.compliance.enabled);
        read_double(o, "compliance", "beta_alpha", c.compliance.beta_alpha);
        read_double(o, "compliance", "beta_beta", c.compliance.beta_beta);
    }

    if (j.contains("policy")) {
        const json& o = j.at("policy");
        if (!o.is_object())
            throw ConfigError("config: 'policy' must be an object");
        require_known_keys(o, "policy",
                           {"kind", "isolation_days", "negative_release_days",
                            "tfr_followup_schooldays"});
        if (o.contains("kind")) {
            if (!o.at("kind").is_string())
                throw ConfigError("config: 'policy.kind' must be a string");
            const auto kind = parse_policy(o.at("kind").get<std::string>());
            if (!kind.has_value())
                throw ConfigError(
                    "config: 'policy.kind' must be one of Reference, ExtendedWeekend, "
                    "MondayScreening, MonWedScreening, TestForRelease");
            c.policy.kind = *kind;
        }
        read_int(o, "policy", "isolation_days", c.policy.isolation_days);
        read_int(o, "policy", "negative_release_days", c.policy.negative_release_days);
        read_int(o, "policy", "tfr_followup_schooldays", c.policy.tfr_followup_schooldays);
    }

    read_int(j, "", "horizon_days", c.horizon_days);
    read_double(j, "", "external_infection_prob", c.external_infection_prob);
    read_int(j, "", "replications", c.replications);
    read_u64(j, "", "base_seed", c.base_seed);
    read_bool(j, "", "emit_daily", c.emit_daily);

    validate_scenario(c);
    return c;
}

json config_to_json(const ScenarioConfig& c)
{
    json j;
    j["schema_version"] = 1;
    j["lli"] = c.disease.lli;
    j["school"] = {{"years", c.school.years},
                   {"classes_per_year", c.school.classes_per_year},
                   {"bubbles_per_class", c.school.bubbles_per_class},
                   {"pupils_per_bubble", c.school.pupils_per_bubble}};
    const ContactStructure cs =
        c.contacts.has_value() ? *c.contacts : ContactStructure::defaults_for(c.school);
    j["contacts"] = {{"p_bubble", cs.p_bubble},
                     {"p_class", cs.p_class},
                     {"p_school", cs.p_school}};
    j["disease"] = {{"p_symptomatic", c.disease.p_symptomatic},
                    {"noncovid_symptom_rate", c.disease.noncovid_symptom_rate},
                    {"t0", c.disease.t0}};
    j["noise"] = {{"enabled", c.noise.enabled},
                  {"dof", c.noise.dof},
                  {"amplitude", c.noise.amplitude},
                  {"length_scale", c.noise.length_scale},
                  {"window_days", c.noise.window_days},
                  {"max_log10_vl", c.noise.max_log10_vl},
                  {"max_attempts", c.noise.max_attempts}};
    j["infectivity"] = {{"gamma", c.infectivity.gamma}};
    j["lfd"] = {{"beta_test", c.lfd.beta_test},
                {"c_test", c.lfd.c_test},
                {"eta", c.lfd.eta},
                {"specificity", c.lfd.specificity},
                {"ar_gain", c.lfd.ar_gain},
                {"ar_window", c.lfd.ar_window},
                {"beta_u", c.lfd.beta_u}};
    j["pcr"] = {{"sensitivity", c.pcr.sensitivity},
                {"lod", c.pcr.lod},
                {"specificity", c.pcr.specificity},
                {"turnaround_days", c.pcr.turnaround_days}};
    j["compliance"] = {{"enabled", c.compliance.enabled},
                       {"beta_alpha", c.compliance.beta_alpha},
                       {"beta_beta", c.compliance.beta_beta}};
    j["policy"] = {{"kind", policy_name(c.policy.kind)},
                   {"isolation_days", c.policy.isolation_days},
                   {"negative_release_days", c.policy.negative_release_days},
                   {"tfr_followup_schooldays", c.policy.tfr_followup_schooldays}};
    j["horizon_days"] = c.horizon_days;
    j["external_infection_prob"] = c.external_infection_prob;
    j["replications"] = c.replications;
    j["base_seed"] = c.base_seed;
    j["emit_daily"] = c.emit_daily;
    return j;
}

static json parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
}

ScenarioConfig load_config(const std::string& path)
{
    return config_from_json(parse_file(path));
}

static std::string value_label(const json& v)
{
    return v.is_string() ? v.get<std::string>() : v.dump();
}

std::vector<ScenarioCell> scenarios_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");

    json base = j;
    base.erase("grid");

    if (!j.contains("grid") || (j.at("grid").is_object() && j.at("grid").empty()))
        return {{"base", config_from_json(base)}};

    const json& grid = j.at("grid");
    if (!grid.is_object())
        throw ConfigError("config: 'grid' must be an object of parameter paths to value lists");

    std::vector<std::string> keys;
    std::vector<const json*> values;
    for (auto it = grid.begin(); it != grid.end(); ++it) { // iteration is key-sorted
        if (!it.value().is_array() || it.value().empty())
            throw ConfigError("config: 'grid." + it.key() + "' must be a non-empty array");
        keys.push_back(it.key());
        values.push_back(&it.value());
    }

    std::vector<ScenarioCell> cells;
    std::vector<std::size_t> idx(keys.size(), 0);
    for (;;) {
        json patched = base;
        std::string id;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const json& v = (*values[k])[idx[k]];
            std::string pointer = "/" + keys[k];
            for (char& ch : pointer)
                if (ch == '.')
                    ch = '/';
            patched[json::json_pointer(pointer)] = v;
            if (!id.empty())
                id += ',';
            id += keys[k] + "=" + value_label(v);
        }
        try {
            cells.push_back({id, config_from_json(patched)});
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (grid cell '" + id + "')");
        }

        std::size_t k = keys.size();
        while (k > 0) {
            --k;
            if (++idx[k] < values[k]->size())
                break;
            idx[k] = 0;
            if (k == 0)
                return cells;
        }
        if (keys.empty())
            return cells;
    }
}

std::vector<ScenarioCell> load_scenarios(const std::string& path)
{
    return scenarios_from_json(parse_file(path));
}

} // namespace schoolsim
