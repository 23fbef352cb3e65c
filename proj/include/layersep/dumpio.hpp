#pragma once

// LSD1 layer-dump format, all integers and floats little-endian:
//
//   magic     4 bytes  "LSD1"
//   version   u16      1
//   L         u16      layer count (>= 1)
//   n         u64      point count (>= 2)
//   dims      L x u32  per-layer dimensionality (each >= 1)
//   name_len  u16
//   name      name_len bytes, UTF-8
//   labels    n bytes, each 0 or 1
//   layers    for each layer j: n x dims[j] f32, row-major
//
// The file ends exactly after the last layer block.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "layersep/analysis.hpp"
#include "layersep/pointset.hpp"

namespace layersep {

inline constexpr char kDumpMagic[4] = {'L', 'S', 'D', '1'};
inline constexpr std::uint16_t kDumpVersion = 1;

struct DumpHeader {
  std::uint16_t version = kDumpVersion;
  std::vector<std::uint32_t> dims;
  std::uint64_t point_count = 0;
  std::string name;

  std::size_t encoded_size() const noexcept {
    return 4 + 2 + 2 + 8 + 4 * dims.size() + 2 + name.size();
  }
};

/// Decodes an LSD1 image. Validates lengths against the buffer before any
/// allocation sized by header fields.
LayerStack read_dump(std::span<const std::byte> bytes);
LayerStack read_dump(std::istream& in);
LayerStack read_dump_file(const std::string& path);

/// Encodes `stack`; coordinates are narrowed to f32 (round to nearest even).
/// Returns the number of bytes written.
std::size_t write_dump(const LayerStack& stack, std::ostream& out);
std::vector<std::byte> encode_dump(const LayerStack& stack);
std::size_t write_dump_file(const LayerStack& stack, const std::string& path);

enum class ReportFormat { Json, Csv };

/// %.17g, or "inf" / "-inf" / "nan".
std::string format_real(double v);

std::string write_report(const SeparabilityReport& report, ReportFormat fmt);

/// Several measures over the same layers as one table
/// (csv columns: layer,<m1>,<m2>,...,flags).
std::string write_report(std::span<const SeparabilityReport> reports,
                         ReportFormat fmt);

std::string write_recommendation(const Recommendation& rec, ReportFormat fmt);

struct CorrelationResult {
  Measure measure = Measure::Csm;
  double pcc = 0.0;
};

/// Per-layer table plus one recommendation per report (same order).
std::string write_recommendation_report(
    std::span<const SeparabilityReport> reports,
    std::span<const Recommendation> recs, ReportFormat fmt);

std::string write_correlations(const std::string& dataset_name,
                               std::span<const CorrelationResult> results,
                               ReportFormat fmt);

}  // namespace layersep
