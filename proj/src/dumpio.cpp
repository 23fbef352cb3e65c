#include "layersep/dumpio.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "layersep/error.hpp"

namespace layersep {

namespace {

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void need(std::size_t count, const char* what) const {
    if (remaining() < count) {
      throw Error(ErrorCode::TruncatedFile,
                  std::string("file ends inside ") + what);
    }
  }

  template <typename T>
  T read_le(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      v |= static_cast<T>(std::to_integer<std::uint8_t>(bytes_[pos_ + b]))
           << (8 * b);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::byte> take(std::size_t count, const char* what) {
    need(count, what);
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

// a * b + c with overflow detection.
bool checked_mul_add(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                     std::uint64_t& out) {
  std::uint64_t prod = 0;
  if (__builtin_mul_overflow(a, b, &prod)) return false;
  return !__builtin_add_overflow(prod, c, &out);
}

template <typename T>
void put_le(std::string& buf, T v) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    buf.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
}

void write_chunk(std::ostream& out, const std::string& buf) {
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to dump sink failed");
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char tmp[8];
          std::snprintf(tmp, sizeof tmp, "\\u%04x", ch);
          out += tmp;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out;
}

std::string json_real(double v) {
  if (std::isfinite(v)) return format_real(v);
  return "\"" + format_real(v) + "\"";
}

std::string join_ints(const std::vector<int>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

void check_aligned(std::span<const SeparabilityReport> reports) {
  if (reports.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no reports to write");
  }
  for (const auto& r : reports) {
    if (r.per_layer.size() != reports.front().per_layer.size()) {
      throw Error(ErrorCode::LayerMismatch, "reports cover different layers");
    }
    for (std::size_t j = 0; j < r.per_layer.size(); ++j) {
      if (r.per_layer[j].layer != reports.front().per_layer[j].layer) {
        throw Error(ErrorCode::LayerMismatch, "reports cover different layers");
      }
    }
  }
}

MeasureFlag row_flags(std::span<const SeparabilityReport> reports, std::size_t j) {
  MeasureFlag f = MeasureFlag::None;
  for (const auto& r : reports) f = f | r.per_layer[j].value.flags;
  return f;
}

std::string json_flag_array(MeasureFlag flags) {
  std::string out = "[";
  const std::string joined = flags_to_string(flags);
  std::size_t start = 0;
  bool first = true;
  while (start < joined.size()) {
    std::size_t end = joined.find('|', start);
    if (end == std::string::npos) end = joined.size();
    if (!first) out += ", ";
    out += "\"" + joined.substr(start, end - start) + "\"";
    first = false;
    start = end + 1;
  }
  return out + "]";
}

// "layers" array body shared by report and recommendation output.
std::string json_layer_rows(std::span<const SeparabilityReport> reports) {
  std::string out = "[\n";
  const auto& first = reports.front().per_layer;
  for (std::size_t j = 0; j < first.size(); ++j) {
    out += "    {\"layer\": " + std::to_string(first[j].layer);
    for (const auto& r : reports) {
      const auto& mv = r.per_layer[j].value;
      out += ", \"" + std::string(to_string(r.measure)) + "\": " + json_real(mv.value);
      if (mv.per_point_mean) {
        out += ", \"" + std::string(to_string(r.measure)) +
               "_mean\": " + json_real(*mv.per_point_mean);
      }
    }
    out += ", \"flags\": " + json_flag_array(row_flags(reports, j)) + "}";
    out += j + 1 < first.size() ? ",\n" : "\n";
  }
  return out + "  ]";
}

std::string csv_table(std::span<const SeparabilityReport> reports) {
  std::string out = "layer";
  for (const auto& r : reports) out += "," + std::string(to_string(r.measure));
  out += ",flags\n";
  const auto& first = reports.front().per_layer;
  for (std::size_t j = 0; j < first.size(); ++j) {
    out += std::to_string(first[j].layer);
    for (const auto& r : reports) out += "," + format_real(r.per_layer[j].value.value);
    out += "," + flags_to_string(row_flags(reports, j)) + "\n";
  }
  return out;
}

std::string json_sample(const std::optional<SampleInfo>& info) {
  if (!info) return "";
  return "  \"sample\": {\"fraction\": " + json_real(info->fraction) +
         ", \"seed\": " + std::to_string(info->seed) +
         ", \"sampled_n\": " + std::to_string(info->sampled_n) + "},\n";
}

std::string json_recommendation_fields(const Recommendation& rec) {
  return "\"chosen_layer\": " + std::to_string(rec.chosen_layer) +
         ", \"winning_value\": " + json_real(rec.winning_value) + ", \"ties\": [" +
         join_ints(rec.ties, ", ") + "]";
}

}  // namespace

LayerStack read_dump(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  const auto magic = in.take(4, "magic");
  if (std::memcmp(magic.data(), kDumpMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "not an LSD1 dump");
  }
  const auto version = in.read_le<std::uint16_t>("version");
  if (version != kDumpVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                "version " + std::to_string(version) + " (expected 1)");
  }
  const auto layer_count = in.read_le<std::uint16_t>("layer count");
  const auto n = in.read_le<std::uint64_t>("point count");
  if (layer_count == 0) throw Error(ErrorCode::ParseError, "layer count is 0");
  if (n < 2) {
    throw Error(ErrorCode::TooFewPoints, "point count " + std::to_string(n));
  }
  in.need(4ull * layer_count, "dims");
  std::vector<std::uint32_t> dims(layer_count);
  for (auto& d : dims) {
    d = in.read_le<std::uint32_t>("dims");
    if (d == 0) throw Error(ErrorCode::DimensionMismatch, "layer dimension 0");
  }
  const auto name_len = in.read_le<std::uint16_t>("name length");
  const auto name_bytes = in.take(name_len, "name");
  std::string name(reinterpret_cast<const char*>(name_bytes.data()), name_bytes.size());

  std::uint64_t body = n;
  for (auto d : dims) {
    if (!checked_mul_add(n, 4ull * d, body, body)) {
      throw Error(ErrorCode::TruncatedFile, "header implies an impossible size");
    }
  }
  if (body > in.remaining()) {
    throw Error(ErrorCode::TruncatedFile,
                "header implies " + std::to_string(body) + " body bytes, " +
                    std::to_string(in.remaining()) + " present");
  }
  if (body < in.remaining()) {
    throw Error(ErrorCode::ParseError,
                std::to_string(in.remaining() - body) + " trailing bytes after body");
  }

  const auto label_bytes = in.take(n, "labels");
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = std::to_integer<std::uint8_t>(label_bytes[i]);
    if (v > 1) {
      throw Error(ErrorCode::InvalidLabel, "row " + std::to_string(i) +
                                               " has label " + std::to_string(v));
    }
    labels[i] = v;
  }

  std::vector<LabeledPointSet> layers;
  layers.reserve(layer_count);
  for (std::size_t j = 0; j < layer_count; ++j) {
    const std::size_t d = dims[j];
    const auto block = in.take(n * d * 4, "layer block");
    std::vector<double> data(n * d);
    for (std::size_t idx = 0; idx < n * d; ++idx) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(
                    std::to_integer<std::uint8_t>(block[4 * idx + b]))
                << (8 * b);
      }
      const float f = std::bit_cast<float>(bits);
      if (!std::isfinite(f)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "row " + std::to_string(idx / d) + ", column " +
                        std::to_string(idx % d),
                    static_cast<int>(j + 1));
      }
      data[idx] = static_cast<double>(f);
    }
    layers.emplace_back(RowMatrix(n, d, std::move(data)), labels);
  }
  return LayerStack(std::move(layers), std::move(name));
}

LayerStack read_dump(std::istream& in) {
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "failed reading dump stream");
  return read_dump(std::as_bytes(std::span<const char>(buf)));
}

LayerStack read_dump_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  const auto size = static_cast<std::size_t>(f.tellg());
  f.seekg(0);
  std::vector<char> buf(size);
  if (!f.read(buf.data(), static_cast<std::streamsize>(size))) {
    throw Error(ErrorCode::IoError, "failed reading " + path);
  }
  return read_dump(std::as_bytes(std::span<const char>(buf)));
}

std::size_t write_dump(const LayerStack& stack, std::ostream& out) {
  if (stack.layer_count() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many layers for LSD1");
  }
  if (stack.dataset_name().size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "dataset name too long for LSD1");
  }
  const std::size_t n = stack.point_count();
  std::string buf;
  buf.append(kDumpMagic, 4);
  put_le<std::uint16_t>(buf, kDumpVersion);
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stack.layer_count()));
  put_le<std::uint64_t>(buf, n);
  for (const auto& layer : stack.layers()) {
    if (layer.dim() > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorCode::InvalidArgument, "layer dimension too large for LSD1");
    }
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(layer.dim()));
  }
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stack.dataset_name().size()));
  buf += stack.dataset_name();
  for (auto l : stack.labels()) buf.push_back(static_cast<char>(l));
  std::size_t written = buf.size();
  write_chunk(out, buf);

  for (std::size_t j = 0; j < stack.layer_count(); ++j) {
    const auto& layer = stack.layer(j);
    for (std::size_t i = 0; i < n; ++i) {
      buf.clear();
      for (double v : layer.point(i)) {
        const float f = static_cast<float>(v);
        if (!std::isfinite(f)) {
          throw Error(ErrorCode::NonFiniteValue,
                      "row " + std::to_string(i) + " overflows float32",
                      stack.layer_indices()[j]);
        }
        put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(f));
      }
      written += buf.size();
      write_chunk(out, buf);
    }
  }
  return written;
}

std::vector<std::byte> encode_dump(const LayerStack& stack) {
  std::ostringstream os(std::ios::binary);
  write_dump(stack, os);
  const std::string s = std::move(os).str();
  std::vector<std::byte> out(s.size());
  std::memcpy(out.data(), s.data(), s.size());
  return out;
}

std::size_t write_dump_file(const LayerStack& stack, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot create " + path);
  const std::size_t n = write_dump(stack, f);
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "failed writing " + path);
  return n;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> tmp{};
  std::snprintf(tmp.data(), tmp.size(), "%.17g", v);
  return tmp.data();
}

std::string write_report(const SeparabilityReport& report, ReportFormat fmt) {
  return write_report(std::span<const SeparabilityReport>(&report, 1), fmt);
}

std::string write_report(std::span<const SeparabilityReport> reports,
                         ReportFormat fmt) {
  check_aligned(reports);
  if (fmt == ReportFormat::Csv) return csv_table(reports);
  std::string out = "{\n";
  out += "  \"dataset\": \"" + json_escape(reports.front().dataset_name) + "\",\n";
  if (reports.size() == 1) {
    out += "  \"measure\": \"" + std::string(to_string(reports.front().measure)) + "\",\n";
  } else {
    out += "  \"measures\": [";
    for (std::size_t m = 0; m < reports.size(); ++m) {
      if (m) out += ", ";
      out += "\"" + std::string(to_string(reports[m].measure)) + "\"";
    }
    out += "],\n";
  }
  out += json_sample(reports.front().sample_info);
  out += "  \"layers\": " + json_layer_rows(reports) + "\n}\n";
  return out;
}

std::string write_recommendation(const Recommendation& rec, ReportFormat fmt) {
  if (fmt == ReportFormat::Csv) {
    return "chosen_layer,winning_value,ties\n" + std::to_string(rec.chosen_layer) +
           "," + format_real(rec.winning_value) + "," + join_ints(rec.ties, ";") + "\n";
  }
  return "{" + json_recommendation_fields(rec) + "}\n";
}

std::string write_recommendation_report(
    std::span<const SeparabilityReport> reports,
    std::span<const Recommendation> recs, ReportFormat fmt) {
  check_aligned(reports);
  if (recs.size() != reports.size()) {
    throw Error(ErrorCode::InvalidArgument, "one recommendation per report required");
  }
  if (fmt == ReportFormat::Csv) {
    std::string out = csv_table(reports);
    out += "\nmeasure,chosen_layer,winning_value,ties\n";
    for (std::size_t m = 0; m < reports.size(); ++m) {
      out += std::string(to_string(reports[m].measure)) + "," +
             std::to_string(recs[m].chosen_layer) + "," +
             format_real(recs[m].winning_value) + "," + join_ints(recs[m].ties, ";") +
             "\n";
    }
    return out;
  }
  std::string out = "{\n";
  out += "  \"dataset\": \"" + json_escape(reports.front().dataset_name) + "\",\n";
  if (reports.size() == 1) {
    out += "  \"measure\": \"" + std::string(to_string(reports.front().measure)) + "\",\n";
    out += "  " + json_recommendation_fields(recs.front()) + ",\n";
  } else {
    out += "  \"recommendations\": {\n";
    for (std::size_t m = 0; m < reports.size(); ++m) {
      out += "    \"" + std::string(to_string(reports[m].measure)) + "\": {" +
             json_recommendation_fields(recs[m]) + "}";
      out += m + 1 < reports.size() ? ",\n" : "\n";
    }
    out += "  },\n";
  }
  out += json_sample(reports.front().sample_info);
  out += "  \"layers\": " + json_layer_rows(reports) + "\n}\n";
  return out;
}

std::string write_correlations(const std::string& dataset_name,
                               std::span<const CorrelationResult> results,
                               ReportFormat fmt) {
  if (fmt == ReportFormat::Csv) {
    std::string out = "measure,pcc\n";
    for (const auto& r : results) {
      out += std::string(to_string(r.measure)) + "," + format_real(r.pcc) + "\n";
    }
    return out;
  }
  std::string out = "{\n  \"dataset\": \"" + json_escape(dataset_name) +
                    "\",\n  \"correlations\": [";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += "{\"measure\": \"" + std::string(to_string(results[i].measure)) +
           "\", \"pcc\": " + json_real(results[i].pcc) + "}";
  }
  out += results.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

}  // namespace layersep
