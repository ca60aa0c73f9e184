#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ransim {

/// One timestamped measurement.
struct MetricPoint {
    std::string measurement;
    std::map<std::string, std::string> tags;
    std::map<std::string, double> fields;
    std::int64_t timestamp = 0;  // ns since epoch

    friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

/// Canonical series identity: measurement plus its sorted tag set, rendered
/// the way the line protocol prints it.
std::string series_key(const MetricPoint& point);

/// Inclusive tick window. Unset ends are open.
struct TickRange {
    std::optional<std::int64_t> first;
    std::optional<std::int64_t> last;
};

/// In-memory time-series store, one series per (measurement, tag set).
class MetricStore {
public:
    explicit MetricStore(std::int64_t epoch_ns = 0, std::optional<std::int64_t> retention_ticks = {});

    std::int64_t epoch_ns() const noexcept { return epoch_ns_; }
    std::int64_t timestamp_for(std::int64_t tick) const noexcept;
    std::int64_t tick_for(std::int64_t timestamp) const noexcept;

    /// Throws ValidationError on an empty measurement, no fields, or a
    /// timestamp not strictly after the series' last point.
    void record(MetricPoint point);

    /// Points of `measurement` whose tags include every entry of `tag_filter`,
    /// within `range`, ordered by timestamp then series key.
    std::vector<MetricPoint> query(std::string_view measurement,
                                   const std::map<std::string, std::string>& tag_filter = {},
                                   TickRange range = {}) const;

    /// Every point in range, ordered by timestamp then series key.
    std::vector<MetricPoint> points(TickRange range = {}) const;

    std::string export_line_protocol(TickRange range = {}) const;

    std::size_t size() const noexcept { return size_; }
    std::size_t series_count() const noexcept { return series_.size(); }

private:
    void enforce_retention(std::int64_t newest_tick);

    std::int64_t epoch_ns_;
    std::optional<std::int64_t> retention_ticks_;
    std::map<std::string, std::vector<MetricPoint>> series_;
    std::size_t size_ = 0;
};

/// Renders a field value with up to 9 significant digits; integral values
/// keep a trailing ".0".
std::string format_field_value(double value);

std::string to_line(const MetricPoint& point);

std::string export_line_protocol(const std::vector<MetricPoint>& points);

/// Parses text produced by export_line_protocol. Throws ParseError naming the
/// offending line number.
std::vector<MetricPoint> parse_line_protocol(std::string_view text);

}  // namespace ransim
