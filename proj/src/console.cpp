#include "ransim/console.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ransim/error.hpp"

namespace ransim {

namespace {

struct Verb {
    const char* name;
    const char* usage;
};

constexpr Verb kVerbs[] = {
    {"add_ue", "add_ue <voice|video|gaming|iot|data> [sector]"},
    {"del_ue", "del_ue <ue>"},
    {"start_ue_traffic", "start_ue_traffic <ue>"},
    {"stop_ue_traffic", "stop_ue_traffic <ue>"},
    {"ue_log", "ue_log <ue>"},
    {"loads", "loads"},
    {"handover_stats", "handover_stats"},
    {"run_scenario", "run_scenario <rush_hour|file.json>"},
    {"pause", "pause"},
    {"resume", "resume"},
    {"step", "step [n]"},
    {"export", "export [file]"},
    {"quit", "quit"},
};

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string opt_ratio(const std::optional<double>& v) { return v ? fixed(*v, 4) : "n/a"; }

std::vector<std::string> split(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

void print_menu(std::ostream& out) {
    out << "commands:\n";
    int i = 1;
    for (const auto& v : kVerbs) out << "  " << i++ << ") " << v.usage << "\n";
}

void print_usage(std::ostream& out) {
    out << "usage:";
    for (const auto& v : kVerbs) out << "\n  " << v.usage;
    out << "\n";
}

class Console {
public:
    Console(Simulation& sim, std::ostream& out, ConsoleOptions options)
        : sim_(sim), out_(out), options_(options) {}

    int rejected() const { return rejected_; }

    // Returns false on quit.
    bool handle(std::vector<std::string> words) {
        if (words.empty()) return true;
        std::string verb = words[0];
        // A bare number picks from the menu.
        if (verb.find_first_not_of("0123456789") == std::string::npos) {
            const auto n = std::stoul(verb);
            if (n >= 1 && n <= std::size(kVerbs)) verb = kVerbs[n - 1].name;
        }
        try {
            if (verb == "quit" || verb == "exit") return false;
            if (verb == "help" || verb == "menu") {
                print_menu(out_);
            } else if (verb == "add_ue") {
                add_ue(words);
            } else if (verb == "del_ue") {
                mutate(DelUe{ue_arg(words, verb)});
            } else if (verb == "start_ue_traffic") {
                mutate(StartUeTraffic{ue_arg(words, verb)});
            } else if (verb == "stop_ue_traffic") {
                mutate(StopUeTraffic{ue_arg(words, verb)});
            } else if (verb == "ue_log") {
                ue_log(ue_arg(words, verb));
            } else if (verb == "loads") {
                loads();
            } else if (verb == "handover_stats") {
                handover_stats();
            } else if (verb == "run_scenario") {
                run_scenario(words);
            } else if (verb == "pause") {
                sim_.submit(Pause{}, CommandOrigin::console);
                out_ << "paused at tick " << sim_.snapshot()->clock << "\n";
            } else if (verb == "resume") {
                sim_.submit(Resume{}, CommandOrigin::console);
                out_ << "resumed at tick " << sim_.snapshot()->clock << "\n";
            } else if (verb == "step") {
                step(words);
            } else if (verb == "export") {
                export_metrics(words);
            } else {
                out_ << "unknown command '" << words[0] << "'\n";
                print_usage(out_);
                ++rejected_;
            }
        } catch (const Error& e) {
            out_ << "error: " << e.what() << "\n";
            ++rejected_;
        } catch (const std::exception& e) {
            out_ << "error: " << e.what() << "\n";
            ++rejected_;
        }
        return true;
    }

private:
    static std::string ue_arg(const std::vector<std::string>& words, const std::string& verb) {
        if (words.size() != 2) throw ValidationError("expected: " + verb + " <ue>");
        return words[1];
    }

    // Queues a mutation and reports its outcome once applied.
    std::optional<CommandRecord> mutate(CommandPayload payload) {
        const auto ticket = sim_.submit(std::move(payload), CommandOrigin::console);
        if (options_.auto_step && !sim_.running()) sim_.step(1);
        auto rec = sim_.wait_for(ticket.id, sim_.running() || options_.auto_step
                                                ? options_.ack_timeout
                                                : std::chrono::milliseconds(0));
        if (!rec) {
            out_ << "queued command " << ticket.id << " for tick " << ticket.apply_tick << "\n";
            return std::nullopt;
        }
        if (rec->ok) {
            if (!std::holds_alternative<AddUe>(rec->payload)) {
                out_ << "ok: " << command_kind(rec->payload) << " at tick " << rec->tick << "\n";
            }
        } else {
            out_ << "failed: " << rec->error << "\n";
            ++rejected_;
        }
        return rec;
    }

    void add_ue(const std::vector<std::string>& words) {
        if (words.size() < 2 || words.size() > 3) {
            throw ValidationError("expected: add_ue <service_class> [sector]");
        }
        AddUe cmd;
        cmd.service_class = parse_service_class(words[1]);
        if (words.size() == 3) {
            sim_.snapshot()->network.sector(words[2]);
            cmd.sector_id = words[2];
        }
        auto rec = mutate(cmd);
        if (!rec || !rec->ok) return;
        out_ << "added " << rec->result.at("ue_id").get<std::string>() << " ("
             << to_string(cmd.service_class) << ") to " << rec->result.at("sector_id").get<std::string>()
             << " at tick " << rec->tick << "\n";
    }

    void ue_log(const UeId& id) {
        auto samples = sim_.with_engine([&](const Engine& e) {
            e.network().ue(id);
            return e.ue_log(id);
        });
        if (samples.empty()) {
            out_ << "no traffic recorded for " << id << "\n";
            return;
        }
        out_ << "tick  bytes        packets  delay_ms  jitter_ms  loss\n";
        for (const auto& s : samples) {
            char line[160];
            std::snprintf(line, sizeof line, "%-5lld %-12.0f %-8llu %-9.3f %-10.4f %.4f\n",
                          static_cast<long long>(s.tick), s.bytes_sent,
                          static_cast<unsigned long long>(s.packets), s.delay * 1e3, s.jitter * 1e3,
                          s.packet_loss);
            out_ << line;
        }
    }

    void loads() {
        auto snap = sim_.snapshot();
        if (!snap->report) {
            out_ << "no load report yet (clock " << snap->clock << ")\n";
            return;
        }
        const auto& r = *snap->report;
        out_ << "tick " << r.tick << " network " << fixed(r.network_load) << "%\n";
        for (const auto& [gid, g] : snap->network.gnbs()) {
            out_ << gid << " " << fixed(r.per_gnb.at(gid)) << "%\n";
            for (const auto& cid : g.cell_ids) {
                out_ << "  " << cid << " " << fixed(r.per_cell.at(cid)) << "%:";
                for (const auto& sid : snap->network.cell(cid).sector_ids) {
                    const auto& s = snap->network.sector(sid);
                    out_ << " " << sid.substr(cid.size() + 1) << "=" << fixed(r.per_sector.at(sid)) << "("
                         << s.attached_ue_ids.size() << "/" << s.ue_capacity << ")";
                }
                out_ << "\n";
            }
        }
    }

    void handover_stats() {
        const auto s = sim_.snapshot()->stats;
        out_ << "attempts " << s.attempts << " successes " << s.successes << " failures " << s.failures
             << " hsr " << opt_ratio(s.hsr()) << " hfr " << opt_ratio(s.hfr()) << "\n";
    }

    void run_scenario(const std::vector<std::string>& words) {
        if (words.size() != 2) throw ValidationError("expected: run_scenario <rush_hour|file.json>");
        Scenario s;
        if (words[1] == "rush_hour") {
            s = rush_hour_scenario();
        } else {
            std::ifstream f(words[1]);
            if (!f) throw ValidationError("cannot open scenario file '" + words[1] + "'", words[1]);
            std::stringstream buf;
            buf << f.rdbuf();
            s = load_scenario(buf.str());
        }
        sim_.schedule(s);
        out_ << "scheduled " << s.name << " (" << s.duration << " ticks) from tick "
             << sim_.snapshot()->clock << "\n";
    }

    void step(const std::vector<std::string>& words) {
        std::uint32_t n = 1;
        if (words.size() == 2) {
            const long v = std::stol(words[1]);
            if (v <= 0) throw ValidationError("step count must be positive");
            n = static_cast<std::uint32_t>(v);
        } else if (words.size() > 2) {
            throw ValidationError("expected: step [n]");
        }
        sim_.submit(StepN{n}, CommandOrigin::console);
        if (sim_.running()) {
            out_ << "stepping " << n << " ticks\n";
        } else {
            out_ << "clock " << sim_.snapshot()->clock << "\n";
        }
    }

    void export_metrics(const std::vector<std::string>& words) {
        const std::string text =
            sim_.with_engine([](const Engine& e) { return e.metrics().export_line_protocol(); });
        if (words.size() < 2) {
            out_ << text;
            return;
        }
        std::ofstream f(words[1], std::ios::binary);
        if (!f) throw ValidationError("cannot write '" + words[1] + "'", words[1]);
        f << text;
        out_ << "wrote " << text.size() << " bytes to " << words[1] << "\n";
    }

    Simulation& sim_;
    std::ostream& out_;
    ConsoleOptions options_;
    int rejected_ = 0;
};

}  // namespace

int run_console(Simulation& sim, std::istream& in, std::ostream& out, ConsoleOptions options) {
    Console console(sim, out, options);
    for (;;) {
        if (options.show_menu) print_menu(out);
        if (options.prompt) out << "ransim> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) break;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (!console.handle(split(line))) break;
    }
    return console.rejected();
}

}  // namespace ransim
