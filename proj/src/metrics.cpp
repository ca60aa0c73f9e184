#include "ransim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "ransim/error.hpp"

namespace ransim {

namespace {

constexpr std::int64_t kNsPerTick = 1'000'000'000;

void append_escaped(std::string& out, std::string_view s, std::string_view specials) {
    for (char c : s) {
        if (c == '\\' || specials.find(c) != std::string_view::npos) out.push_back('\\');
        out.push_back(c);
    }
}

std::string render_key(const MetricPoint& p) {
    std::string out;
    append_escaped(out, p.measurement, ", ");
    for (const auto& [k, v] : p.tags) {
        out.push_back(',');
        append_escaped(out, k, ",= ");
        out.push_back('=');
        append_escaped(out, v, ",= ");
    }
    return out;
}

struct Ref {
    std::int64_t timestamp;
    const std::string* key;
    const MetricPoint* point;
};

bool in_range(std::int64_t tick, const TickRange& r) {
    return (!r.first || tick >= *r.first) && (!r.last || tick <= *r.last);
}

void sort_refs(std::vector<Ref>& refs) {
    std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
        return std::tie(a.timestamp, *a.key) < std::tie(b.timestamp, *b.key);
    });
}

// Reads one token up to an unescaped delimiter, unescaping as it goes.
std::string read_token(std::string_view line, std::size_t& pos, std::string_view stops) {
    std::string out;
    while (pos < line.size()) {
        char c = line[pos];
        if (c == '\\' && pos + 1 < line.size()) {
            out.push_back(line[pos + 1]);
            pos += 2;
            continue;
        }
        if (stops.find(c) != std::string_view::npos) break;
        out.push_back(c);
        ++pos;
    }
    return out;
}

}  // namespace

std::string series_key(const MetricPoint& point) { return render_key(point); }

MetricStore::MetricStore(std::int64_t epoch_ns, std::optional<std::int64_t> retention_ticks)
    : epoch_ns_(epoch_ns), retention_ticks_(retention_ticks) {
    if (retention_ticks_ && *retention_ticks_ <= 0) {
        throw ValidationError("metric retention must be a positive tick count");
    }
}

std::int64_t MetricStore::timestamp_for(std::int64_t tick) const noexcept {
    return epoch_ns_ + tick * kNsPerTick;
}

std::int64_t MetricStore::tick_for(std::int64_t timestamp) const noexcept {
    return (timestamp - epoch_ns_) / kNsPerTick;
}

void MetricStore::record(MetricPoint point) {
    if (point.measurement.empty()) throw ValidationError("metric measurement must not be empty");
    if (point.fields.empty()) {
        throw ValidationError("metric '" + point.measurement + "' has no fields", point.measurement);
    }
    for (const auto& [name, value] : point.fields) {
        if (!std::isfinite(value)) {
            throw ValidationError("metric field '" + name + "' is not finite", point.measurement);
        }
    }
    std::string key = render_key(point);
    auto& series = series_[key];
    if (!series.empty() && point.timestamp <= series.back().timestamp) {
        throw ValidationError("out-of-order timestamp for series '" + key + "'", key);
    }
    const std::int64_t tick = tick_for(point.timestamp);
    series.push_back(std::move(point));
    ++size_;
    enforce_retention(tick);
}

void MetricStore::enforce_retention(std::int64_t newest_tick) {
    if (!retention_ticks_) return;
    const std::int64_t oldest_kept = timestamp_for(newest_tick - *retention_ticks_ + 1);
    for (auto it = series_.begin(); it != series_.end();) {
        auto& pts = it->second;
        auto keep = std::find_if(pts.begin(), pts.end(),
                                 [&](const MetricPoint& p) { return p.timestamp >= oldest_kept; });
        size_ -= static_cast<std::size_t>(keep - pts.begin());
        pts.erase(pts.begin(), keep);
        it = pts.empty() ? series_.erase(it) : std::next(it);
    }
}

std::vector<MetricPoint> MetricStore::query(std::string_view measurement,
                                            const std::map<std::string, std::string>& tag_filter,
                                            TickRange range) const {
    std::vector<Ref> refs;
    for (const auto& [key, pts] : series_) {
        if (pts.empty() || pts.front().measurement != measurement) continue;
        const auto& tags = pts.front().tags;
        const bool match = std::all_of(tag_filter.begin(), tag_filter.end(), [&](const auto& kv) {
            auto it = tags.find(kv.first);
            return it != tags.end() && it->second == kv.second;
        });
        if (!match) continue;
        for (const auto& p : pts) {
            if (in_range(tick_for(p.timestamp), range)) refs.push_back({p.timestamp, &key, &p});
        }
    }
    sort_refs(refs);
    std::vector<MetricPoint> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(*r.point);
    return out;
}

std::vector<MetricPoint> MetricStore::points(TickRange range) const {
    std::vector<Ref> refs;
    refs.reserve(size_);
    for (const auto& [key, pts] : series_) {
        for (const auto& p : pts) {
            if (in_range(tick_for(p.timestamp), range)) refs.push_back({p.timestamp, &key, &p});
        }
    }
    sort_refs(refs);
    std::vector<MetricPoint> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(*r.point);
    return out;
}

std::string MetricStore::export_line_protocol(TickRange range) const {
    return ransim::export_line_protocol(points(range));
}

std::string format_field_value(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string to_line(const MetricPoint& p) {
    std::string line = render_key(p);
    line.push_back(' ');
    bool first = true;
    for (const auto& [name, value] : p.fields) {
        if (!first) line.push_back(',');
        first = false;
        append_escaped(line, name, ",= ");
        line.push_back('=');
        line += format_field_value(value);
    }
    line.push_back(' ');
    line += std::to_string(p.timestamp);
    return line;
}

std::string export_line_protocol(const std::vector<MetricPoint>& points) {
    std::string out;
    for (const auto& p : points) {
        out += to_line(p);
        out.push_back('\n');
    }
    return out;
}

std::vector<MetricPoint> parse_line_protocol(std::string_view text) {
    std::vector<MetricPoint> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;

        const auto fail = [&](const std::string& why) -> ParseError {
            return ParseError("line " + std::to_string(line_no) + ": " + why);
        };

        MetricPoint p;
        std::size_t pos = 0;
        p.measurement = read_token(line, pos, ", ");
        if (p.measurement.empty()) throw fail("empty measurement");
        while (pos < line.size() && line[pos] == ',') {
            ++pos;
            std::string key = read_token(line, pos, ",= ");
            if (pos >= line.size() || line[pos] != '=') throw fail("tag without '='");
            ++pos;
            std::string value = read_token(line, pos, ",= ");
            if (key.empty() || value.empty()) throw fail("empty tag key or value");
            p.tags[std::move(key)] = std::move(value);
        }
        if (pos >= line.size() || line[pos] != ' ') throw fail("missing field set");
        ++pos;
        do {
            if (pos < line.size() && line[pos] == ',') ++pos;
            std::string name = read_token(line, pos, ",= ");
            if (pos >= line.size() || line[pos] != '=' || name.empty()) throw fail("malformed field");
            ++pos;
            const std::size_t start = pos;
            while (pos < line.size() && line[pos] != ',' && line[pos] != ' ') ++pos;
            const std::string_view raw = line.substr(start, pos - start);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
            if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
                throw fail("field '" + name + "' is not a float");
            }
            p.fields[std::move(name)] = value;
        } while (pos < line.size() && line[pos] == ',');
        if (pos >= line.size() || line[pos] != ' ') throw fail("missing timestamp");
        ++pos;
        const std::string_view ts = line.substr(pos);
        auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), p.timestamp);
        if (ts.empty() || ec != std::errc{} || ptr != ts.data() + ts.size()) {
            throw fail("malformed timestamp");
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace ransim
