#include "netfp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "netfp/csv.hpp"

namespace netfp::ingest {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool valid_country_code(std::string_view code) {
  if (code.size() != 2) return false;
  return code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

}  // namespace

std::uint32_t parse_ipv4(std::string_view text) {
  std::uint32_t value = 0;
  std::size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (pos >= text.size() || text[pos] != '.')
        throw std::runtime_error("parse_ipv4: malformed address '" + std::string(text) + "'");
      ++pos;
    }
    std::size_t digits = 0;
    std::uint32_t part = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      part = part * 10 + static_cast<std::uint32_t>(text[pos] - '0');
      ++digits;
      ++pos;
      if (digits > 3) break;
    }
    if (digits == 0 || digits > 3 || part > 255)
      throw std::runtime_error("parse_ipv4: malformed address '" + std::string(text) + "'");
    value = (value << 8) | part;
  }
  if (pos != text.size())
    throw std::runtime_error("parse_ipv4: malformed address '" + std::string(text) + "'");
  return value;
}

CrawlSnapshot parse_snapshot(std::string_view text) {
  CrawlSnapshot snapshot;
  snapshot.timestamp = std::numeric_limits<std::int64_t>::max();
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2)
      throw std::runtime_error("parse_snapshot: line " + std::to_string(line_number) +
                               ": expected 'timestamp,ip'");
    std::int64_t ts;
    std::uint32_t ip;
    try {
      ts = csv::parse_int64(fields[0], "parse_snapshot");
      ip = parse_ipv4(fields[1]);
    } catch (const std::exception& e) {
      throw std::runtime_error("parse_snapshot: line " + std::to_string(line_number) +
                               ": " + e.what());
    }
    if (ts < 0)
      throw std::runtime_error("parse_snapshot: line " + std::to_string(line_number) +
                               ": negative timestamp");
    snapshot.timestamp = std::min(snapshot.timestamp, ts);
    snapshot.peers.push_back(ip);
  }
  if (snapshot.peers.empty())
    throw std::runtime_error("parse_snapshot: no timestamp (empty snapshot)");
  return snapshot;
}

GeoDb load_geodb(std::string_view text) {
  GeoDb db;
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 3)
      throw std::runtime_error("load_geodb: line " + std::to_string(line_number) +
                               ": expected 'start,end,country'");
    std::uint64_t start = csv::parse_uint64(fields[0], "load_geodb");
    std::uint64_t end = csv::parse_uint64(fields[1], "load_geodb");
    if (start > 0xffffffffULL || end > 0xffffffffULL)
      throw std::runtime_error("load_geodb: line " + std::to_string(line_number) +
                               ": address outside 32-bit range");
    if (start > end)
      throw std::runtime_error("load_geodb: line " + std::to_string(line_number) +
                               ": range start exceeds end");
    if (!valid_country_code(fields[2]))
      throw std::runtime_error("load_geodb: line " + std::to_string(line_number) +
                               ": invalid country code '" + std::string(fields[2]) + "'");
    db.ranges.push_back(GeoRange{static_cast<std::uint32_t>(start),
                                 static_cast<std::uint32_t>(end),
                                 std::string(fields[2])});
  }
  std::sort(db.ranges.begin(), db.ranges.end(),
            [](const GeoRange& a, const GeoRange& b) { return a.start_ip < b.start_ip; });
  for (std::size_t i = 1; i < db.ranges.size(); ++i) {
    const GeoRange& prev = db.ranges[i - 1];
    const GeoRange& cur = db.ranges[i];
    if (cur.start_ip <= prev.end_ip)
      throw std::runtime_error(
          "load_geodb: overlapping ranges [" + std::to_string(prev.start_ip) + "," +
          std::to_string(prev.end_ip) + "] and [" + std::to_string(cur.start_ip) + "," +
          std::to_string(cur.end_ip) + "]");
  }
  return db;
}

std::string_view geolocate(const GeoDb& db, std::uint32_t ip) {
  auto it = std::upper_bound(
      db.ranges.begin(), db.ranges.end(), ip,
      [](std::uint32_t value, const GeoRange& range) { return value < range.start_ip; });
  if (it == db.ranges.begin()) return kUnknownCountry;
  --it;
  return ip <= it->end_ip ? std::string_view(it->country) : kUnknownCountry;
}

std::vector<CountSeries> aggregate(const std::vector<CrawlSnapshot>& snapshots,
                                   const GeoDb& db) {
  if (snapshots.empty()) throw std::runtime_error("aggregate: no snapshots");

  std::vector<std::size_t> order(snapshots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return snapshots[a].timestamp < snapshots[b].timestamp;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (snapshots[order[i - 1]].timestamp == snapshots[order[i]].timestamp)
      throw std::runtime_error("aggregate: duplicate snapshot timestamp " +
                               std::to_string(snapshots[order[i]].timestamp));
  }

  // Counts per snapshot: distinct addresses per country plus the
  // deduplicated total. Every entity gets a value at every snapshot (zero
  // when absent) so per-snapshot country counts always sum to ALL.
  std::map<std::string, std::vector<std::uint64_t>, std::less<>> counts;
  for (std::size_t si = 0; si < order.size(); ++si) {
    const CrawlSnapshot& snapshot = snapshots[order[si]];
    std::set<std::uint32_t> distinct(snapshot.peers.begin(), snapshot.peers.end());
    for (std::uint32_t ip : distinct) {
      std::string_view country = geolocate(db, ip);
      auto it = counts.find(country);
      if (it == counts.end())
        it = counts.emplace(std::string(country),
                            std::vector<std::uint64_t>(order.size(), 0)).first;
      ++it->second[si];
    }
    auto it = counts.find(std::string_view(kAllEntities));
    if (it == counts.end())
      it = counts.emplace(kAllEntities, std::vector<std::uint64_t>(order.size(), 0)).first;
    it->second[si] = distinct.size();
  }

  std::vector<CountSeries> result;
  result.reserve(counts.size());
  if (auto it = counts.find(std::string_view(kAllEntities)); it != counts.end()) {
    CountSeries series{it->first, {}};
    for (std::size_t si = 0; si < order.size(); ++si)
      series.points.push_back({snapshots[order[si]].timestamp, it->second[si]});
    result.push_back(std::move(series));
    counts.erase(it);
  }
  for (const auto& [entity, values] : counts) {
    CountSeries series{entity, {}};
    for (std::size_t si = 0; si < order.size(); ++si)
      series.points.push_back({snapshots[order[si]].timestamp, values[si]});
    result.push_back(std::move(series));
  }
  return result;
}

namespace {

// Usable points: those inside the window plus the nearest bracketing point
// on each side.
std::size_t count_usable_points(const CountSeries& series, std::int64_t window_start,
                                double span_seconds) {
  const auto& pts = series.points;
  double window_end = static_cast<double>(window_start) + span_seconds;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double ts = static_cast<double>(pts[i].timestamp);
    bool inside = ts >= static_cast<double>(window_start) && ts <= window_end;
    bool brackets_left = ts <= static_cast<double>(window_start) &&
                         (i + 1 == pts.size() ||
                          static_cast<double>(pts[i + 1].timestamp) > static_cast<double>(window_start));
    bool brackets_right = ts >= window_end &&
                          (i == 0 || static_cast<double>(pts[i - 1].timestamp) < window_end);
    if (inside || brackets_left || brackets_right) ++usable;
  }
  return usable;
}

}  // namespace

bool has_resample_coverage(const CountSeries& series, std::int64_t window_start,
                           double span_seconds) {
  return count_usable_points(series, window_start, span_seconds) >= 2;
}

EvolutionWindow resample(const CountSeries& series, std::int64_t window_start,
                         std::size_t t, double span_seconds) {
  if (!is_power_of_two(t))
    throw std::runtime_error("resample: T must be a power of two, got " + std::to_string(t));
  if (!(span_seconds > 0.0))
    throw std::runtime_error("resample: span must be positive");
  for (std::size_t i = 1; i < series.points.size(); ++i)
    if (series.points[i - 1].timestamp >= series.points[i].timestamp)
      throw std::runtime_error("resample: series timestamps not strictly increasing");

  const auto& pts = series.points;
  if (count_usable_points(series, window_start, span_seconds) < 2)
    throw std::runtime_error("resample: insufficient data for entity '" + series.entity +
                             "' in window starting " + std::to_string(window_start));

  EvolutionWindow window;
  window.entity = series.entity;
  window.start = window_start;
  window.span_seconds = span_seconds;
  window.samples.resize(t);
  double step = span_seconds / static_cast<double>(t);
  std::size_t hint = 0;
  for (std::size_t i = 0; i < t; ++i) {
    double grid = static_cast<double>(window_start) + step * static_cast<double>(i);
    // Flat extrapolation outside the observed range, linear interpolation
    // between the two neighbors otherwise.
    if (grid <= static_cast<double>(pts.front().timestamp)) {
      window.samples[i] = static_cast<double>(pts.front().count);
      continue;
    }
    if (grid >= static_cast<double>(pts.back().timestamp)) {
      window.samples[i] = static_cast<double>(pts.back().count);
      continue;
    }
    while (hint + 1 < pts.size() && static_cast<double>(pts[hint + 1].timestamp) < grid) ++hint;
    const SeriesPoint& lo = pts[hint];
    const SeriesPoint& hi = pts[hint + 1];
    double t0 = static_cast<double>(lo.timestamp);
    double t1 = static_cast<double>(hi.timestamp);
    double alpha = (grid - t0) / (t1 - t0);
    window.samples[i] =
        static_cast<double>(lo.count) + alpha * (static_cast<double>(hi.count) -
                                                 static_cast<double>(lo.count));
  }
  return window;
}

std::string write_series_csv(const CountSeries& series) {
  std::string out;
  for (const SeriesPoint& point : series.points) {
    out += series.entity;
    out += ',';
    out += std::to_string(point.timestamp);
    out += ',';
    out += std::to_string(point.count);
    out += '\n';
  }
  return out;
}

CountSeries read_series_csv(std::string_view text) {
  CountSeries series;
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 3)
      throw std::runtime_error("read_series_csv: line " + std::to_string(line_number) +
                               ": expected 'entity,timestamp,count'");
    std::string entity(fields[0]);
    if (series.entity.empty())
      series.entity = entity;
    else if (series.entity != entity)
      throw std::runtime_error("read_series_csv: line " + std::to_string(line_number) +
                               ": mixed entities '" + series.entity + "' and '" + entity + "'");
    SeriesPoint point;
    point.timestamp = csv::parse_int64(fields[1], "read_series_csv");
    point.count = csv::parse_uint64(fields[2], "read_series_csv");
    if (!series.points.empty() && series.points.back().timestamp >= point.timestamp)
      throw std::runtime_error("read_series_csv: line " + std::to_string(line_number) +
                               ": timestamps not strictly increasing");
    series.points.push_back(point);
  }
  if (series.points.empty()) throw std::runtime_error("read_series_csv: empty series");
  return series;
}

}  // namespace netfp::ingest
