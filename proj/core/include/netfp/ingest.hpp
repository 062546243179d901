// Ingestion of crawler snapshots: IPv4 parsing, country lookup, per-country
// peer counting, and resampling of count series onto fixed-length windows.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace netfp::ingest {

inline constexpr std::int64_t kWeekSeconds = 604800;
inline constexpr const char* kUnknownCountry = "ZZ";
inline constexpr const char* kAllEntities = "ALL";

// One crawl result: the peers observed during one crawl. Peer addresses are
// kept in file order, duplicates and all; aggregation deduplicates.
struct CrawlSnapshot {
  std::int64_t timestamp = 0;
  std::vector<std::uint32_t> peers;
};

// Inclusive IPv4 range mapped to an ISO 3166-1 alpha-2 code.
struct GeoRange {
  std::uint32_t start_ip = 0;
  std::uint32_t end_ip = 0;
  std::string country;
};

// Ranges sorted by start and pairwise disjoint, so lookup is a binary search.
struct GeoDb {
  std::vector<GeoRange> ranges;
};

struct SeriesPoint {
  std::int64_t timestamp = 0;
  std::uint64_t count = 0;
};

// Peer-count evolution for one entity (a country code or "ALL"), strictly
// increasing in timestamp.
struct CountSeries {
  std::string entity;
  std::vector<SeriesPoint> points;
};

// A count series resampled onto `samples.size()` evenly spaced points
// covering [start, start + span_seconds).
struct EvolutionWindow {
  std::string entity;
  std::int64_t start = 0;
  double span_seconds = 0.0;
  std::vector<double> samples;
};

// Dotted-quad parser; rejects anything but exactly four 0-255 decimal octets.
std::uint32_t parse_ipv4(std::string_view text);

// Snapshot file: lines of `timestamp,dotted-quad`. One file is one crawl;
// the snapshot timestamp is the minimum line timestamp. Parse errors name
// the offending line number. An empty file has no timestamp and is an error.
CrawlSnapshot parse_snapshot(std::string_view text);

// GeoDb CSV: `start_int,end_int,CC` per line. Validates ordering,
// disjointness, and 2-letter uppercase codes.
GeoDb load_geodb(std::string_view text);

// Country of an address, or "ZZ" when no range covers it.
std::string_view geolocate(const GeoDb& db, std::uint32_t ip);

// Per-country peer counts across snapshots, plus the "ALL" total. Every
// entity that appears anywhere gets a point for every snapshot (zero when
// absent), so per-snapshot entity counts sum to the snapshot's peer count
// under ALL. Snapshots are ordered by timestamp; duplicate timestamps are
// an error. Output entities are sorted, "ALL" first.
std::vector<CountSeries> aggregate(const std::vector<CrawlSnapshot>& snapshots,
                                   const GeoDb& db);

// Whether the series has at least two usable points for the given window
// (points inside it plus the nearest bracketing point on each side), i.e.
// whether resample would accept it.
bool has_resample_coverage(const CountSeries& series, std::int64_t window_start,
                           double span_seconds = kWeekSeconds);

// Linear interpolation of the series onto t evenly spaced samples starting
// at window_start with spacing span_seconds / t. Requires t >= 1 and series
// points covering both ends of the sampled grid.
EvolutionWindow resample(const CountSeries& series, std::int64_t window_start,
                         std::size_t t, double span_seconds = kWeekSeconds);

// CountSeries persistence: `entity,timestamp,count` rows.
std::string write_series_csv(const CountSeries& series);
CountSeries read_series_csv(std::string_view text);

}  // namespace netfp::ingest
