#include "ransim/gateway.hpp"

#include <atomic>
#include <charconv>
#include <limits>
#include <set>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "ransim/config.hpp"
#include "ransim/error.hpp"

namespace ransim {

using nlohmann::json;

namespace {

constexpr auto kJson = "application/json";

int parse_port(std::string_view s) {
    int port = -1;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
    if (ec != std::errc{} || ptr != s.data() + s.size() || port < 0 || port > 65535) {
        throw ValidationError("invalid port '" + std::string(s) + "'", std::string(s));
    }
    return port;
}

json opt_number(const std::optional<LoadReport>& report, const std::string& id,
                const std::map<std::string, double> LoadReport::*member) {
    if (!report) return nullptr;
    const auto& m = (*report).*member;
    auto it = m.find(id);
    return it == m.end() ? json(nullptr) : json(it->second);
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& message,
                 const std::string& entity = {}) {
    json body{{"error", message}};
    if (!entity.empty()) body["entity"] = entity;
    reply(res, status, body);
}

json accepted(const CommandTicket& t) {
    return json{{"command_id", t.id}, {"apply_tick", t.apply_tick}};
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    json body = json::parse(req.body);
    if (!body.is_object()) throw ParseError("request body must be a JSON object");
    return body;
}

std::optional<std::int64_t> query_tick(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    const std::string v = req.get_param_value(name);
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ValidationError(std::string("query parameter '") + name + "' must be an integer");
    }
    return out;
}

}  // namespace

BindAddress parse_bind_address(std::string_view text) {
    BindAddress out;
    if (text.empty()) return out;
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) {
        out.host = std::string(text);
        return out;
    }
    if (colon > 0) out.host = std::string(text.substr(0, colon));
    out.port = parse_port(text.substr(colon + 1));
    return out;
}

BindAddress with_env_override(BindAddress address) {
    if (const char* env = std::getenv("RANSIM_API_PORT"); env && *env) {
        address.port = parse_port(env);
    }
    return address;
}

json ue_view(const Ue& ue) {
    return json{{"id", ue.id},
                {"service_class", std::string(to_string(ue.service_class))},
                {"sector_id", ue.sector_id ? json(*ue.sector_id) : json(nullptr)},
                {"throughput", ue.current_throughput},
                {"throughput_pinned", ue.throughput_pinned},
                {"traffic_active", ue.traffic_active},
                {"qos", {{"delay", ue.qos.delay}, {"jitter", ue.qos.jitter}, {"packet_loss", ue.qos.packet_loss}}},
                {"profile", to_json(ue.profile)}};
}

json sector_view(const Snapshot& snap, const SectorId& id) {
    const Sector& s = snap.network.sector(id);
    return json{{"id", s.id},
                {"cell_id", s.cell_id},
                {"gnb_id", snap.network.cell(s.cell_id).gnb_id},
                {"ue_capacity", s.ue_capacity},
                {"max_throughput", s.max_throughput},
                {"attached_ue_ids", s.attached_ue_ids},
                {"load", opt_number(snap.report, id, &LoadReport::per_sector)},
                {"tick", snap.report ? json(snap.report->tick) : json(nullptr)}};
}

json loads_view(const Snapshot& snap) {
    if (!snap.report) {
        return json{{"tick", nullptr}, {"clock", snap.clock}, {"per_sector", json::object()},
                    {"per_cell", json::object()}, {"per_gnb", json::object()}, {"network_load", nullptr}};
    }
    json j = to_json(*snap.report);
    j["clock"] = snap.clock;
    return j;
}

json network_view(const Snapshot& snap) {
    const auto& net = snap.network;
    json gnbs = json::array();
    for (const auto& [gid, g] : net.gnbs()) {
        json cells = json::array();
        for (const auto& cid : g.cell_ids) {
            json sectors = json::array();
            for (const auto& sid : net.cell(cid).sector_ids) {
                const Sector& s = net.sector(sid);
                sectors.push_back({{"id", sid},
                                   {"ue_capacity", s.ue_capacity},
                                   {"max_throughput", s.max_throughput},
                                   {"attached", s.attached_ue_ids.size()},
                                   {"load", opt_number(snap.report, sid, &LoadReport::per_sector)}});
            }
            cells.push_back({{"id", cid},
                             {"load", opt_number(snap.report, cid, &LoadReport::per_cell)},
                             {"sectors", std::move(sectors)}});
        }
        gnbs.push_back({{"id", gid},
                        {"latitude", g.latitude},
                        {"longitude", g.longitude},
                        {"load", opt_number(snap.report, gid, &LoadReport::per_gnb)},
                        {"cells", std::move(cells)}});
    }
    json ues = json::array();
    for (const auto& [id, ue] : net.ues()) ues.push_back(ue_view(ue));
    const auto& p = snap.policy;
    return json{{"clock", snap.clock},
                {"tick", snap.report ? json(snap.report->tick) : json(nullptr)},
                {"paused", snap.paused},
                {"policy",
                 {{"threshold", p.threshold},
                  {"latency", p.latency},
                  {"failure_injection", p.failure_injection},
                  {"max_ues_per_trigger", p.max_ues_per_trigger},
                  {"strategy", p.strategy}}},
                {"weights", {{"count_weight", snap.weights.count_weight}, {"tp_weight", snap.weights.tp_weight}}},
                {"network_load", snap.report ? json(snap.report->network_load) : json(nullptr)},
                {"gnbs", std::move(gnbs)},
                {"ues", std::move(ues)}};
}

struct Gateway::Impl {
    Simulation& sim;
    GatewayOptions options;
    httplib::Server server;
    std::thread thread;
    std::atomic<bool> stopping{false};
    int bound_port = -1;

    Impl(Simulation& s, GatewayOptions o) : sim(s), options(std::move(o)) {
        // The library default adds SO_REUSEPORT, which would let a second
        // gateway silently share a port already in use.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        install_routes();
    }

    CommandTicket submit(CommandPayload payload) {
        return sim.submit(std::move(payload), CommandOrigin::api);
    }

    // Wraps a handler with the common error mapping.
    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const json::exception& e) {
                reply_error(res, 400, std::string("invalid JSON body: ") + e.what());
            } catch (const UnknownEntityError& e) {
                reply_error(res, 404, e.what(), e.id());
            } catch (const CapacityError& e) {
                reply_error(res, 409, e.what(), e.sector());
            } catch (const ParseError& e) {
                reply_error(res, 400, e.what());
            } catch (const ValidationError& e) {
                reply_error(res, 400, e.what(), e.entity());
            } catch (const Error& e) {
                reply_error(res, 500, e.what());
            }
        };
    }

    void install_routes() {
        server.Get("/network", guarded([this](const auto&, auto& res) {
            reply(res, 200, network_view(*sim.snapshot()));
        }));

        server.Get("/loads", guarded([this](const auto&, auto& res) {
            reply(res, 200, loads_view(*sim.snapshot()));
        }));

        server.Get(R"(/sectors/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            reply(res, 200, sector_view(*sim.snapshot(), req.matches[1]));
        }));

        server.Patch(R"(/sectors/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            const std::string id = req.matches[1];
            const json body = parse_body(req);
            auto snap = sim.snapshot();
            const Sector& s = snap->network.sector(id);
            SetSectorCapacity cmd{id, {}, {}};
            if (body.contains("ue_capacity")) {
                const auto cap = body.at("ue_capacity").get<std::int64_t>();
                if (cap <= 0 || cap > std::numeric_limits<std::uint32_t>::max()) {
                    throw ValidationError("ue_capacity must be a positive count", id);
                }
                if (static_cast<std::size_t>(cap) < s.attached_ue_ids.size()) {
                    throw CapacityError("sector '" + id + "' holds " +
                                            std::to_string(s.attached_ue_ids.size()) +
                                            " UEs; capacity cannot drop below that",
                                        id);
                }
                cmd.ue_capacity = static_cast<std::uint32_t>(cap);
            }
            if (body.contains("max_throughput_bps")) {
                cmd.max_throughput = body.at("max_throughput_bps").get<double>();
            }
            reply(res, 202, accepted(submit(cmd)));
        }));

        server.Get(R"(/ues/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            auto snap = sim.snapshot();
            reply(res, 200, ue_view(snap->network.ue(req.matches[1])));
        }));

        server.Post("/ues", guarded([this](const httplib::Request& req, auto& res) {
            json body = parse_body(req);
            body["kind"] = "add_ue";
            auto cmd = std::get<AddUe>(command_from_json(body));
            auto snap = sim.snapshot();
            if (cmd.sector_id) snap->network.sector(*cmd.sector_id);
            if (!cmd.ue_id.empty() && snap->network.find_ue(cmd.ue_id)) {
                reply_error(res, 409, "UE '" + cmd.ue_id + "' already exists", cmd.ue_id);
                return;
            }
            reply(res, 202, accepted(submit(cmd)));
        }));

        server.Delete(R"(/ues/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            const std::string id = req.matches[1];
            sim.snapshot()->network.ue(id);
            reply(res, 202, accepted(submit(DelUe{id})));
        }));

        server.Post(R"(/ues/([^/]+)/traffic)", guarded([this](const httplib::Request& req, auto& res) {
            const std::string id = req.matches[1];
            const json body = parse_body(req);
            const std::string action = body.value("action", std::string());
            if (action != "start" && action != "stop") {
                throw ValidationError("traffic action must be \"start\" or \"stop\"");
            }
            sim.snapshot()->network.ue(id);
            const CommandPayload cmd =
                action == "start" ? CommandPayload{StartUeTraffic{id}} : CommandPayload{StopUeTraffic{id}};
            reply(res, 202, accepted(submit(cmd)));
        }));

        server.Patch(R"(/ues/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            const std::string id = req.matches[1];
            const json body = parse_body(req);
            std::vector<CommandPayload> cmds;
            if (body.contains("throughput_bps")) {
                cmds.push_back(SetUeThroughput{id, body.at("throughput_bps").get<double>()});
            }
            if (body.contains("delay_s")) cmds.push_back(SetUeDelay{id, body.at("delay_s").get<double>()});
            if (cmds.empty()) throw ValidationError("expected \"throughput_bps\" or \"delay_s\"", id);
            for (const auto& c : cmds) validate(c);
            sim.snapshot()->network.ue(id);
            json ids = json::array();
            CommandTicket last;
            for (auto& c : cmds) {
                last = submit(std::move(c));
                ids.push_back(last.id);
            }
            json body_out = accepted(last);
            body_out["command_id"] = ids.front();
            body_out["command_ids"] = ids;
            reply(res, 202, body_out);
        }));

        server.Get("/stats/handover", guarded([this](const auto&, auto& res) {
            reply(res, 200, to_json(sim.snapshot()->stats));
        }));

        server.Get("/metrics/export", guarded([this](const httplib::Request& req, auto& res) {
            const TickRange range{query_tick(req, "from"), query_tick(req, "to")};
            res.status = 200;
            res.set_content(sim.with_engine([&](const Engine& e) {
                return e.metrics().export_line_protocol(range);
            }),
                            "text/plain; charset=utf-8");
        }));

        server.Post("/sim", guarded([this](const httplib::Request& req, auto& res) {
            const json body = parse_body(req);
            const std::string action = body.value("action", std::string());
            CommandPayload cmd;
            if (action == "pause") {
                cmd = Pause{};
            } else if (action == "resume") {
                cmd = Resume{};
            } else if (action == "step") {
                const auto n = body.value("n", std::int64_t{1});
                if (n <= 0 || n > std::numeric_limits<std::uint32_t>::max()) {
                    throw ValidationError("step count must be positive");
                }
                cmd = StepN{static_cast<std::uint32_t>(n)};
            } else {
                throw ValidationError("sim action must be \"pause\", \"resume\" or \"step\"");
            }
            reply(res, 202, accepted(submit(cmd)));
        }));

        server.Post("/scenarios/rush_hour", guarded([this](const httplib::Request& req, auto& res) {
            const json body = parse_body(req);
            std::optional<SectorId> sector;
            if (body.contains("sector") && !body.at("sector").is_null()) {
                sector = body.at("sector").get<std::string>();
                sim.snapshot()->network.sector(*sector);
            }
            const std::string mode = body.value("mode", std::string("multiplicative"));
            if (mode != "multiplicative" && mode != "additive") {
                throw ValidationError("ramp mode must be \"multiplicative\" or \"additive\"");
            }
            Scenario s = rush_hour_scenario(sector, mode == "additive" ? RampMode::additive
                                                                       : RampMode::multiplicative);
            sim.schedule(s);
            const auto snap = sim.snapshot();
            reply(res, 202,
                  json{{"scenario", s.name},
                       {"sector", sector ? *sector : snap->network.sector_order().front()},
                       {"apply_tick", snap->clock + s.ramp->start_tick}});
        }));

        server.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
            std::uint64_t after = sim.events().last_seq();
            try {
                if (req.has_header("Last-Event-ID")) {
                    after = std::stoull(req.get_header_value("Last-Event-ID"));
                } else if (req.has_param("since")) {
                    after = std::stoull(req.get_param_value("since"));
                }
            } catch (const std::exception&) {
                reply_error(res, 400, "resume position must be a sequence number");
                return;
            }
            std::set<std::string> types;
            if (req.has_param("types")) {
                std::string list = req.get_param_value("types");
                std::size_t start = 0;
                while (start <= list.size()) {
                    const auto comma = list.find(',', start);
                    const auto item = list.substr(start, comma - start);
                    if (!item.empty()) types.insert(item);
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            auto cursor = std::make_shared<std::uint64_t>(after);
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream",
                [this, cursor, types](std::size_t, httplib::DataSink& sink) {
                    if (stopping.load()) {
                        sink.done();
                        return true;
                    }
                    auto batch = sim.events().wait_since(*cursor, options.heartbeat);
                    if (stopping.load() || sim.events().closed()) {
                        sink.done();
                        return true;
                    }
                    std::string out;
                    for (const auto& ev : batch) {
                        *cursor = ev.seq;
                        if (!types.empty() && !types.count(ev.type)) continue;
                        out += "id: " + std::to_string(ev.seq) + "\nevent: " + ev.type +
                               "\ndata: " + json{{"tick", ev.tick}, {"data", ev.data}}.dump() + "\n\n";
                    }
                    if (out.empty()) out = ": heartbeat\n\n";
                    return sink.write(out.data(), out.size());
                });
        });
    }
};

Gateway::Gateway(Simulation& simulation, GatewayOptions options)
    : impl_(std::make_unique<Impl>(simulation, std::move(options))) {}

Gateway::~Gateway() { stop(); }

void Gateway::start() {
    if (impl_->thread.joinable()) return;
    auto& bind = impl_->options.bind;
    if (bind.port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port(bind.host);
    } else {
        impl_->bound_port = impl_->server.bind_to_port(bind.host, bind.port) ? bind.port : -1;
    }
    if (impl_->bound_port <= 0) {
        throw Error("cannot bind API gateway to " + bind.host + ":" + std::to_string(bind.port));
    }
    impl_->stopping = false;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void Gateway::stop() {
    if (!impl_ || !impl_->thread.joinable()) return;
    impl_->stopping = true;
    impl_->server.stop();
    impl_->thread.join();
}

int Gateway::port() const noexcept { return impl_->bound_port; }

}  // namespace ransim
