#include "ransim/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "ransim/error.hpp"

namespace ransim {

namespace {
constexpr double kDefaultDelay = 0.01;
constexpr double kDefaultJitter = 1e-4;
constexpr double kDefaultLoss = 0.002;
}  // namespace

std::string_view to_string(ServiceClass c) noexcept {
    switch (c) {
        case ServiceClass::voice: return "voice";
        case ServiceClass::video: return "video";
        case ServiceClass::gaming: return "gaming";
        case ServiceClass::iot: return "iot";
        case ServiceClass::data: return "data";
    }
    return "data";
}

ServiceClass parse_service_class(std::string_view name) {
    for (ServiceClass c : kAllServiceClasses) {
        if (to_string(c) == name) return c;
    }
    throw ValidationError("unknown service class '" + std::string(name) + "'", std::string(name));
}

TrafficProfile make_profile(ServiceClass kind, double packet_size, double interval) {
    TrafficProfile p;
    p.kind = kind;
    p.packet_size = packet_size;
    p.interval = interval;
    p.bitrate = interval > 0.0 ? packet_size / interval : 0.0;
    p.delay = kDefaultDelay;
    p.jitter_spread = kDefaultJitter;
    p.loss_rate = kDefaultLoss;
    return p;
}

TrafficProfile default_profile(ServiceClass kind) {
    switch (kind) {
        case ServiceClass::voice: return make_profile(kind, 160.0, 0.020);      // 64 kbit/s
        case ServiceClass::video: return make_profile(kind, 1200.0, 1200.0 / 4e6);
        case ServiceClass::gaming: return make_profile(kind, 512.0, 512.0 / 0.5e6);
        case ServiceClass::iot: return make_profile(kind, 64.0, 64.0 / 2000.0);
        case ServiceClass::data: return make_profile(kind, 1500.0, 1500.0 / 8e6);
    }
    return make_profile(ServiceClass::data, 1500.0, 1500.0 / 8e6);
}

void validate(const TrafficProfile& p) {
    if (!(p.packet_size > 0.0)) throw ValidationError("profile packet_size must be positive");
    if (!(p.interval > 0.0)) throw ValidationError("profile interval must be positive");
    const double implied = p.packet_size / p.interval;
    if (!(std::abs(p.bitrate - implied) <= 0.01 * implied)) {
        throw ValidationError("profile bitrate disagrees with packet_size/interval by more than 1%");
    }
    if (!(p.loss_rate >= 0.0 && p.loss_rate <= 1.0)) {
        throw ValidationError("profile loss_rate must lie in [0, 1]");
    }
    if (!(p.delay >= 0.0)) throw ValidationError("profile delay must be non-negative");
    if (!(p.jitter_spread >= 0.0)) throw ValidationError("profile jitter_spread must be non-negative");
}

std::uint64_t packets_per_tick(const TrafficProfile& p) {
    // The epsilon absorbs representation error in intervals such as 0.02.
    return static_cast<std::uint64_t>(std::floor(1.0 / p.interval + 1e-9));
}

TrafficSample generate(Ue& ue, std::int64_t tick, RngStream& loss_rng, RngStream& qos_rng) {
    const TrafficProfile& p = ue.profile;
    TrafficSample s;
    s.ue_id = ue.id;
    s.tick = tick;
    s.packets = packets_per_tick(p);

    // Normal approximation of Binomial(packets, loss_rate); exact at 0 and 1.
    const double n = static_cast<double>(s.packets);
    const double z = loss_rng.standard_normal();
    double lost = n * p.loss_rate + std::sqrt(n * p.loss_rate * (1.0 - p.loss_rate)) * z;
    lost = std::clamp(std::round(lost), 0.0, n);
    s.packet_loss = s.packets > 0 ? lost / n : p.loss_rate;
    s.bytes_sent = (n - lost) * p.packet_size;

    s.delay = std::max(0.0, p.delay + qos_rng.uniform(-p.jitter_spread, p.jitter_spread));
    s.jitter = qos_rng.uniform(0.0, 2.0 * p.jitter_spread);

    if (!ue.throughput_pinned) ue.current_throughput = s.bytes_sent;
    ue.qos = UeQos{s.delay, s.jitter, s.packet_loss};
    return s;
}

void set_profile(Ue& ue, const TrafficProfile& profile) {
    validate(profile);
    ue.profile = profile;
    ue.service_class = profile.kind;
}

void set_throughput(Ue& ue, BytesPerSecond value) {
    if (!(value >= 0.0)) {
        throw ValidationError("throughput for UE '" + ue.id + "' must be non-negative", ue.id);
    }
    ue.current_throughput = value;
    ue.throughput_pinned = true;
}

TrafficProfile scaled(const TrafficProfile& profile, double multiplier) {
    if (!(multiplier > 0.0)) throw ValidationError("traffic multiplier must be positive");
    TrafficProfile p = profile;
    p.interval = profile.interval / multiplier;
    p.bitrate = profile.bitrate * multiplier;
    return p;
}

}  // namespace ransim
