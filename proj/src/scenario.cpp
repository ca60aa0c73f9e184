#include "ransim/scenario.hpp"

#include <algorithm>
#include <limits>

#include "ransim/config.hpp"
#include "ransim/error.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string require_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
        throw ValidationError(std::string("command requires a non-empty string '") + key + "'");
    }
    return it->get<std::string>();
}

double require_number(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
        throw ValidationError(std::string("command requires a numeric '") + key + "'");
    }
    return it->get<double>();
}

void require_ue(const UeId& id) {
    if (id.empty()) throw ValidationError("command requires a UE id");
}

}  // namespace

std::string_view to_string(CommandOrigin o) noexcept {
    switch (o) {
        case CommandOrigin::console: return "console";
        case CommandOrigin::api: return "api";
        case CommandOrigin::scenario: return "scenario";
    }
    return "scenario";
}

std::string_view command_kind(const CommandPayload& payload) noexcept {
    return std::visit(overloaded{
                          [](const AddUe&) { return std::string_view("add_ue"); },
                          [](const DelUe&) { return std::string_view("del_ue"); },
                          [](const StartUeTraffic&) { return std::string_view("start_ue_traffic"); },
                          [](const StopUeTraffic&) { return std::string_view("stop_ue_traffic"); },
                          [](const SetUeThroughput&) { return std::string_view("set_ue_throughput"); },
                          [](const SetUeDelay&) { return std::string_view("set_ue_delay"); },
                          [](const SetProfile&) { return std::string_view("set_profile"); },
                          [](const SetSectorCapacity&) { return std::string_view("set_sector_capacity"); },
                          [](const Pause&) { return std::string_view("pause"); },
                          [](const Resume&) { return std::string_view("resume"); },
                          [](const StepN&) { return std::string_view("step_n"); },
                      },
                      payload);
}

bool is_control(const CommandPayload& payload) noexcept {
    return std::holds_alternative<Pause>(payload) || std::holds_alternative<Resume>(payload) ||
           std::holds_alternative<StepN>(payload);
}

void validate(const CommandPayload& payload) {
    std::visit(overloaded{
                   [](const AddUe& c) {
                       if (c.profile) validate(*c.profile);
                       if (c.sector_id && c.sector_id->empty()) {
                           throw ValidationError("add_ue sector_id must not be empty");
                       }
                   },
                   [](const DelUe& c) { require_ue(c.ue_id); },
                   [](const StartUeTraffic& c) { require_ue(c.ue_id); },
                   [](const StopUeTraffic& c) { require_ue(c.ue_id); },
                   [](const SetUeThroughput& c) {
                       require_ue(c.ue_id);
                       if (!(c.value >= 0.0)) {
                           throw ValidationError("throughput must be non-negative", c.ue_id);
                       }
                   },
                   [](const SetUeDelay& c) {
                       require_ue(c.ue_id);
                       if (!(c.value >= 0.0)) throw ValidationError("delay must be non-negative", c.ue_id);
                   },
                   [](const SetProfile& c) {
                       require_ue(c.ue_id);
                       validate(c.profile);
                   },
                   [](const SetSectorCapacity& c) {
                       if (c.sector_id.empty()) throw ValidationError("command requires a sector id");
                       if (!c.ue_capacity && !c.max_throughput) {
                           throw ValidationError("set_sector_capacity changes nothing", c.sector_id);
                       }
                       if (c.ue_capacity && *c.ue_capacity == 0) {
                           throw ValidationError("ue_capacity must be positive", c.sector_id);
                       }
                       if (c.max_throughput && !(*c.max_throughput > 0.0)) {
                           throw ValidationError("max_throughput must be positive", c.sector_id);
                       }
                   },
                   [](const Pause&) {},
                   [](const Resume&) {},
                   [](const StepN& c) {
                       if (c.n == 0) throw ValidationError("step count must be positive");
                   },
               },
               payload);
}

json to_json(const CommandPayload& payload) {
    json j = std::visit(
        overloaded{
            [](const AddUe& c) {
                json o{{"service_class", std::string(to_string(c.service_class))}};
                if (!c.ue_id.empty()) o["ue_id"] = c.ue_id;
                if (c.sector_id) o["sector_id"] = *c.sector_id;
                if (c.profile) o["profile"] = to_json(*c.profile);
                return o;
            },
            [](const DelUe& c) { return json{{"ue_id", c.ue_id}}; },
            [](const StartUeTraffic& c) { return json{{"ue_id", c.ue_id}}; },
            [](const StopUeTraffic& c) { return json{{"ue_id", c.ue_id}}; },
            [](const SetUeThroughput& c) { return json{{"ue_id", c.ue_id}, {"value", c.value}}; },
            [](const SetUeDelay& c) { return json{{"ue_id", c.ue_id}, {"value", c.value}}; },
            [](const SetProfile& c) { return json{{"ue_id", c.ue_id}, {"profile", to_json(c.profile)}}; },
            [](const SetSectorCapacity& c) {
                json o{{"sector_id", c.sector_id}};
                if (c.ue_capacity) o["ue_capacity"] = *c.ue_capacity;
                if (c.max_throughput) o["max_throughput"] = *c.max_throughput;
                return o;
            },
            [](const Pause&) { return json::object(); },
            [](const Resume&) { return json::object(); },
            [](const StepN& c) { return json{{"n", c.n}}; },
        },
        payload);
    j["kind"] = std::string(command_kind(payload));
    return j;
}

CommandPayload command_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("command must be a JSON object");
    const std::string kind = require_string(j, "kind");
    CommandPayload out;
    try {
        if (kind == "add_ue") {
            AddUe c;
            if (j.contains("ue_id")) c.ue_id = j.at("ue_id").get<std::string>();
            c.service_class = parse_service_class(j.value("service_class", std::string("data")));
            if (j.contains("sector_id") && !j.at("sector_id").is_null()) {
                c.sector_id = j.at("sector_id").get<std::string>();
            }
            if (j.contains("profile")) {
                c.profile = profile_from_json(j.at("profile"), default_profile(c.service_class));
                c.profile->kind = c.service_class;
            }
            out = c;
        } else if (kind == "del_ue") {
            out = DelUe{require_string(j, "ue_id")};
        } else if (kind == "start_ue_traffic") {
            out = StartUeTraffic{require_string(j, "ue_id")};
        } else if (kind == "stop_ue_traffic") {
            out = StopUeTraffic{require_string(j, "ue_id")};
        } else if (kind == "set_ue_throughput") {
            out = SetUeThroughput{require_string(j, "ue_id"), require_number(j, "value")};
        } else if (kind == "set_ue_delay") {
            out = SetUeDelay{require_string(j, "ue_id"), require_number(j, "value")};
        } else if (kind == "set_profile") {
            SetProfile c;
            c.ue_id = require_string(j, "ue_id");
            if (!j.contains("profile")) throw ValidationError("set_profile requires 'profile'");
            const auto& pj = j.at("profile");
            const ServiceClass base = pj.is_object() && pj.contains("kind")
                                          ? parse_service_class(pj.at("kind").get<std::string>())
                                          : ServiceClass::data;
            c.profile = profile_from_json(pj, default_profile(base));
            out = c;
        } else if (kind == "set_sector_capacity") {
            SetSectorCapacity c;
            c.sector_id = require_string(j, "sector_id");
            if (j.contains("ue_capacity")) {
                const auto cap = j.at("ue_capacity").get<std::int64_t>();
                if (cap <= 0 || cap > std::numeric_limits<std::uint32_t>::max()) {
                    throw ValidationError("ue_capacity out of range", c.sector_id);
                }
                c.ue_capacity = static_cast<std::uint32_t>(cap);
            }
            if (j.contains("max_throughput")) c.max_throughput = j.at("max_throughput").get<double>();
            out = c;
        } else if (kind == "pause") {
            out = Pause{};
        } else if (kind == "resume") {
            out = Resume{};
        } else if (kind == "step_n") {
            const auto n = j.value("n", std::int64_t{1});
            if (n <= 0 || n > std::numeric_limits<std::uint32_t>::max()) {
                throw ValidationError("step count out of range");
            }
            out = StepN{static_cast<std::uint32_t>(n)};
        } else {
            throw ValidationError("unknown command kind '" + kind + "'", kind);
        }
    } catch (const json::exception& e) {
        throw ParseError("command '" + kind + "' has a field of the wrong type: " + e.what());
    }
    validate(out);
    return out;
}

void validate(const Scenario& s) {
    if (s.duration < 0) throw ValidationError("scenario duration must be non-negative", s.name);
    std::int64_t prev = 0;
    for (const auto& c : s.commands) {
        if (c.tick < 0 || c.tick >= s.duration) {
            throw ValidationError("scenario command at tick " + std::to_string(c.tick) +
                                      " lies outside the duration",
                                  s.name);
        }
        if (c.tick < prev) throw ValidationError("scenario commands must be sorted by tick", s.name);
        prev = c.tick;
        validate(c.payload);
    }
    if (s.ramp) {
        if (!(s.ramp->step > 0.0)) throw ValidationError("ramp step must be positive", s.name);
        if (s.ramp->start_tick < 0) throw ValidationError("ramp start_tick must be non-negative", s.name);
    }
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");
    Scenario s;
    try {
        s.name = j.value("name", std::string("scenario"));
        s.duration = j.value("duration", std::int64_t{0});
        if (auto it = j.find("commands"); it != j.end()) {
            if (!it->is_array()) throw ParseError("scenario 'commands' must be an array");
            for (const auto& c : *it) {
                if (!c.is_object() || !c.contains("tick")) {
                    throw ParseError("scenario command requires a 'tick'");
                }
                s.commands.push_back({c.at("tick").get<std::int64_t>(), command_from_json(c)});
            }
        }
        if (auto it = j.find("ramp"); it != j.end() && !it->is_null()) {
            RampSpec r;
            if (it->contains("sector") && !it->at("sector").is_null()) {
                r.sector = it->at("sector").get<std::string>();
            }
            r.step = it->value("step", r.step);
            const std::string mode = it->value("mode", std::string("multiplicative"));
            if (mode == "multiplicative") {
                r.mode = RampMode::multiplicative;
            } else if (mode == "additive") {
                r.mode = RampMode::additive;
            } else {
                throw ValidationError("unknown ramp mode '" + mode + "'", mode);
            }
            r.start_tick = it->value("start_tick", r.start_tick);
            if (it->contains("until_load") && !it->at("until_load").is_null()) {
                r.until_load = it->at("until_load").get<double>();
            }
            s.ramp = r;
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario field has the wrong type: ") + e.what());
    }
    validate(s);
    return s;
}

Scenario load_scenario(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed scenario document: ") + e.what());
    }
    return scenario_from_json(j);
}

json to_json(const Scenario& s) {
    json j{{"name", s.name}, {"duration", s.duration}, {"commands", json::array()}};
    for (const auto& c : s.commands) {
        json entry = to_json(c.payload);
        entry["tick"] = c.tick;
        j["commands"].push_back(std::move(entry));
    }
    if (s.ramp) {
        j["ramp"] = {{"sector", s.ramp->sector ? json(*s.ramp->sector) : json(nullptr)},
                     {"step", s.ramp->step},
                     {"mode", s.ramp->mode == RampMode::additive ? "additive" : "multiplicative"},
                     {"start_tick", s.ramp->start_tick},
                     {"until_load", s.ramp->until_load ? json(*s.ramp->until_load) : json(nullptr)}};
    }
    return j;
}

Scenario rush_hour_scenario(std::optional<SectorId> sector, RampMode mode) {
    Scenario s;
    s.name = "rush_hour";
    s.duration = 300;
    RampSpec r;
    r.sector = std::move(sector);
    r.mode = mode;
    s.ramp = r;
    return s;
}

Scenario idle_scenario(std::int64_t duration, std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.duration = duration;
    return s;
}

}  // namespace ransim
