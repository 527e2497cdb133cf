#include "ace/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ace/errors.hpp"

namespace ace::io {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'E', '1'};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cells;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Little-endian primitives, independent of host byte order.
template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<unsigned char>(
        (static_cast<std::make_unsigned_t<T>>(value) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

void put_le_double(std::ostream& out, double value) {
  put_le(out, std::bit_cast<std::uint64_t>(value));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw DataError("sketch file truncated");
  std::make_unsigned_t<T> value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
  return static_cast<T>(value);
}

double get_le_double(std::istream& in) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in));
}

}  // namespace

Dataset load_dataset(const std::string& path,
                     std::optional<int> label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  Dataset data;
  data.name = path;

  std::string line;
  std::size_t line_number = 0;
  std::vector<std::size_t> zero_rows;
  bool first_data_line = true;

  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    auto cells = split_csv(view);
    if (first_data_line) {
      double probe;
      if (!parse_double(cells[0], probe)) continue;  // header line
    }

    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c]))
        throw DataError("unparsable cell at row " +
                        std::to_string(line_number) + ", column " +
                        std::to_string(c + 1) + ": '" +
                        std::string(trim(cells[c])) + "'");
    }

    std::optional<std::size_t> label_index;
    if (label_column) {
      const int raw = *label_column;
      const long resolved =
          raw >= 0 ? raw : static_cast<long>(row.size()) + raw;
      if (resolved < 0 || resolved >= static_cast<long>(row.size()))
        throw DataError("label column " + std::to_string(raw) +
                        " out of range at row " + std::to_string(line_number));
      label_index = static_cast<std::size_t>(resolved);
    }

    std::vector<double> features;
    features.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (label_index && c == *label_index) continue;
      features.push_back(row[c]);
    }

    if (first_data_line) {
      data.cols = features.size();
      if (label_column) data.labels.emplace();
      first_data_line = false;
    } else if (features.size() != data.cols) {
      throw DataError("ragged row " + std::to_string(line_number) +
                      ": expected " + std::to_string(data.cols) +
                      " feature columns, found " +
                      std::to_string(features.size()));
    }

    bool all_zero = true;
    for (double v : features)
      if (v != 0.0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      zero_rows.push_back(line_number);
      continue;
    }

    if (label_index) {
      const double lv = row[*label_index];
      if (lv != 0.0 && lv != 1.0)
        throw DataError("label at row " + std::to_string(line_number) +
                        " is not 0 or 1");
      data.labels->push_back(lv != 0.0 ? 1 : 0);
    }
    data.values.insert(data.values.end(), features.begin(), features.end());
    ++data.rows;
  }

  if (!zero_rows.empty()) {
    std::string rows;
    for (std::size_t i = 0; i < zero_rows.size(); ++i)
      rows += (i ? "," : "") + std::to_string(zero_rows[i]);
    throw DataError("all-zero feature rows rejected (cosine undefined): " +
                    rows);
  }
  if (data.rows == 0) throw DataError("empty dataset file: " + path);
  return data;
}

void save_sketch(const AceSketch& sketch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open sketch file for write: " + path);

  const auto& cfg = sketch.family().config();
  out.write(kMagic, 4);
  put_le(out, static_cast<std::uint32_t>(cfg.dim));
  put_le(out, cfg.k_bits);
  put_le(out, cfg.num_tables);
  put_le(out, static_cast<std::uint32_t>(sketch.counter_width()));
  put_le(out, cfg.seed);
  put_le_double(out, cfg.noise_scale);
  put_le(out, sketch.size());
  put_le_double(out, sketch.mean());
  put_le(out, static_cast<std::uint8_t>(sketch.saturated() ? 1 : 0));

  const auto counters = sketch.counters_flat();
  if (sketch.counter_width() == CounterWidth::k16) {
    for (auto c : counters) put_le(out, static_cast<std::uint16_t>(c));
  } else {
    for (auto c : counters) put_le(out, static_cast<std::uint32_t>(c));
  }
  if (!out) throw DataError("write failed: " + path);
}

AceSketch load_sketch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open sketch file: " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("bad magic in sketch file: " + path);

  SrpConfig cfg;
  cfg.dim = get_le<std::uint32_t>(in);
  cfg.k_bits = get_le<std::uint32_t>(in);
  cfg.num_tables = get_le<std::uint32_t>(in);
  const std::uint32_t width_bits = get_le<std::uint32_t>(in);
  cfg.seed = get_le<std::uint64_t>(in);
  cfg.noise_scale = get_le_double(in);
  const std::uint64_t n = get_le<std::uint64_t>(in);
  const double mean = get_le_double(in);
  const bool saturated = get_le<std::uint8_t>(in) != 0;

  if (width_bits != 16 && width_bits != 32)
    throw DataError("sketch file counter width must be 16 or 32, got " +
                    std::to_string(width_bits));
  const CounterWidth width =
      width_bits == 16 ? CounterWidth::k16 : CounterWidth::k32;

  const SrpFamily family{cfg};
  const std::size_t total =
      static_cast<std::size_t>(cfg.num_tables) << cfg.k_bits;
  std::vector<std::uint64_t> counters(total);
  for (auto& c : counters)
    c = width == CounterWidth::k16 ? get_le<std::uint16_t>(in)
                                   : get_le<std::uint32_t>(in);
  return AceSketch::restore(family, width, std::move(counters), n, mean,
                            saturated);
}

void write_scores_csv(const std::vector<double>& scores,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << "score\n";
  for (double s : scores) out << format_double(s) << "\n";
}

std::string report_to_json(const DetectionReport& report,
                           double build_seconds) {
  nlohmann::json j;
  j["reported"] = report.reported;
  if (report.has_labels) {
    j["correctly_reported"] = report.correctly_reported;
    j["missed"] = report.missed;
    j["total_labeled_anomalies"] = report.total_labeled_anomalies;
  } else {
    j["correctly_reported"] = nullptr;
    j["missed"] = nullptr;
    j["total_labeled_anomalies"] = nullptr;
  }
  j["threshold"] = report.threshold;
  j["score_mean"] = report.score_mean;
  j["score_stddev"] = report.score_stddev;
  j["elapsed_seconds"] = report.elapsed_seconds;
  if (build_seconds >= 0.0) j["build_seconds"] = build_seconds;
  return j.dump(2);
}

void write_report_json(const DetectionReport& report, const std::string& path,
                       double build_seconds) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << report_to_json(report, build_seconds) << "\n";
}

void write_comparison_csv(const EstimatorComparison& comparison,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << "l,ace_mse,rse_mse\n";
  for (std::size_t i = 0; i < comparison.l_values.size(); ++i)
    out << comparison.l_values[i] << "," << format_double(comparison.ace_mse[i])
        << "," << format_double(comparison.rse_mse[i]) << "\n";
}

void write_profile_csv(const synth::ScoreProfile& profile,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << "k,inner,border,outlier\n";
  for (std::size_t i = 0; i < profile.k_values.size(); ++i)
    out << profile.k_values[i] << "," << format_double(profile.inner[i]) << ","
        << format_double(profile.border[i]) << ","
        << format_double(profile.outlier[i]) << "\n";
}

}  // namespace ace::io
