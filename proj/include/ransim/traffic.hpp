#pragma once

#include <cstdint>

#include "ransim/model.hpp"
#include "ransim/rng.hpp"

namespace ransim {

/// Default rate profile for a service class.
TrafficProfile default_profile(ServiceClass kind);

/// Builds a profile from packet size and interval; bitrate is derived.
TrafficProfile make_profile(ServiceClass kind, double packet_size, double interval);

/// Throws ValidationError when the profile cannot drive generation.
void validate(const TrafficProfile& profile);

/// One tick's worth of traffic for one UE.
struct TrafficSample {
    UeId ue_id;
    std::int64_t tick = 0;
    double bytes_sent = 0.0;
    std::uint64_t packets = 0;
    double delay = 0.0;
    double jitter = 0.0;
    double packet_loss = 0.0;

    friend bool operator==(const TrafficSample&, const TrafficSample&) = default;
};

/// Whole packets emitted per one-second tick.
std::uint64_t packets_per_tick(const TrafficProfile& profile);

/// Generates one tick of traffic for an active UE and updates its throughput
/// and QoS. `loss_rng` drives realized loss and `qos_rng` delay/jitter, each
/// with a fixed number of draws per call. A pinned UE keeps its throughput.
TrafficSample generate(Ue& ue, std::int64_t tick, RngStream& loss_rng, RngStream& qos_rng);

/// Swaps the profile used from the next generation on.
void set_profile(Ue& ue, const TrafficProfile& profile);

/// Pins the UE's throughput until traffic is restarted. Rejects negatives.
void set_throughput(Ue& ue, BytesPerSecond value);

/// Scales traffic volume without touching packet timing or QoS.
TrafficProfile scaled(const TrafficProfile& profile, double multiplier);

}  // namespace ransim
