#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ransim/simulation.hpp"

namespace ransim {

struct BindAddress {
    std::string host = "127.0.0.1";
    int port = 8080;
};

/// Parses "host:port", "host" or ":port". Throws ValidationError.
BindAddress parse_bind_address(std::string_view text);

/// Applies the RANSIM_API_PORT environment override, if set.
BindAddress with_env_override(BindAddress address);

struct GatewayOptions {
    BindAddress bind;
    std::chrono::milliseconds heartbeat{1000};
};

// JSON views shared by the gateway and tests.
nlohmann::json network_view(const Snapshot& snapshot);
nlohmann::json loads_view(const Snapshot& snapshot);
nlohmann::json sector_view(const Snapshot& snapshot, const SectorId& id);
nlohmann::json ue_view(const Ue& ue);

/// HTTP control surface over a Simulation.
///
/// Reads are served from the latest published snapshot; every mutation is
/// turned into a queued command and answered with the tick it will apply at.
class Gateway {
public:
    Gateway(Simulation& simulation, GatewayOptions options);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds and starts serving on a background thread. Port 0 picks a free
    /// port. Throws Error when the address cannot be bound.
    void start();
    void stop();

    /// Port actually bound; valid after start().
    int port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ransim
