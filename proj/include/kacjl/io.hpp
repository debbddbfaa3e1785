#pragma once

// Point files and TransformSpec JSON.
//
// Binary point file (little-endian regardless of host):
//   bytes 0..7    magic "KACVEC01"
//   bytes 8..15   n, uint64
//   bytes 16..23  d, uint64
//   then n*d IEEE-754 binary64 values, row-major
//
// CSV point file: one vector per line, comma-separated decimals, no header.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kacjl/error.hpp"
#include "kacjl/fjlt.hpp"
#include "kacjl/points.hpp"

namespace kacjl {

enum class PointFormat { Binary, Csv };

inline constexpr char kVectorMagic[8] = {'K', 'A', 'C', 'V', 'E', 'C', '0', '1'};

inline PointFormat point_format_from_path(const std::filesystem::path& p) {
  return p.extension() == ".csv" ? PointFormat::Csv : PointFormat::Binary;
}

namespace detail {

inline void put_u64_le(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes,
                       bool overwrite) {
  if (!overwrite && std::filesystem::exists(path))
    throw Error(ErrorCode::Io, "'" + path.string() + "' exists; pass overwrite to replace it");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace detail

inline std::string encode_points_binary(const PointSet& p) {
  std::string out(kVectorMagic, 8);
  out.reserve(24 + 8 * p.data.size());
  detail::put_u64_le(out, p.n);
  detail::put_u64_le(out, p.d);
  for (double v : p.data) detail::put_u64_le(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

inline PointSet decode_points_binary(std::string_view bytes) {
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kVectorMagic, 8) != 0)
    throw Error(ErrorCode::MagicMismatch, "not a KACVEC01 file");
  const auto* u = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t n = detail::get_u64_le(u + 8);
  const std::uint64_t d = detail::get_u64_le(u + 16);
  if (d != 0 && n > (bytes.size() / 8) / d)
    throw Error(ErrorCode::PayloadShort, "header claims " + std::to_string(n) + "x" +
                                             std::to_string(d) + " values");
  const std::uint64_t expected = 8 * n * d;
  if (bytes.size() - 24 < expected) throw Error(ErrorCode::PayloadShort, "payload short");
  if (bytes.size() - 24 > expected) throw Error(ErrorCode::Format, "trailing bytes after payload");
  std::vector<double> values(n * d);
  for (std::size_t k = 0; k < values.size(); ++k)
    values[k] = std::bit_cast<double>(detail::get_u64_le(u + 24 + 8 * k));
  return PointSet(n, d, std::move(values));
}

inline std::string encode_points_csv(const PointSet& p) {
  if (p.n == 0) throw Error(ErrorCode::Format, "CSV cannot represent an empty point set");
  std::string out;
  for (std::size_t r = 0; r < p.n; ++r) {
    for (std::size_t c = 0; c < p.d; ++c) {
      if (c) out.push_back(',');
      out += detail::format_double(p.data[r * p.d + c]);
    }
    out.push_back('\n');
  }
  return out;
}

inline PointSet decode_points_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      std::string_view field = line.substr(0, comma);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      if (!field.empty() && field.front() == '+') field.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw Error(ErrorCode::NonNumeric, "line " + std::to_string(line_no) + ": '" +
                                               std::string(field) + "'");
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) cols = fields;
    else if (fields != cols)
      throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(fields) + " fields, expected " +
                                             std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::Format, "CSV contains no vectors");
  return PointSet(rows, cols, std::move(values));
}

inline PointSet read_points(const std::filesystem::path& path, PointFormat format) {
  const std::string bytes = detail::read_file(path);
  try {
    return format == PointFormat::Binary ? decode_points_binary(bytes) : decode_points_csv(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline void write_points(const PointSet& points, const std::filesystem::path& path,
                         PointFormat format, bool overwrite = false) {
  const std::string bytes =
      format == PointFormat::Binary ? encode_points_binary(points) : encode_points_csv(points);
  detail::write_file(path, bytes, overwrite);
}

// ---- TransformSpec JSON. Seeds travel as decimal strings. ----

using json = nlohmann::ordered_json;

namespace detail {

inline std::string u64_str(std::uint64_t v) { return std::to_string(v); }

inline std::uint64_t u64_from(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_string()) throw Error(ErrorCode::Format, "expected decimal string for 64-bit value");
  const auto s = j.get<std::string>();
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Format, "bad 64-bit decimal '" + s + "'");
  return v;
}

inline json selection_to_json(const CoordinateSelection& s) {
  return json{{"mode", std::string(to_string(s.mode))},
              {"d_in", s.d_in},
              {"count", s.count},
              {"q", s.q},
              {"seed", u64_str(s.seed)}};
}

inline CoordinateSelection selection_from_json(const json& j) {
  CoordinateSelection s;
  s.mode = selection_mode_from_string(j.at("mode").get<std::string>());
  s.d_in = j.at("d_in").get<std::size_t>();
  s.count = j.at("count").get<std::size_t>();
  s.q = j.at("q").get<double>();
  s.seed = u64_from(j.at("seed"));
  return s;
}

}  // namespace detail

inline json constants_to_json(const ConstantsConfig& c) {
  return json{{"c_k1", c.c_k1},           {"c_k2", c.c_k2},         {"c_t1_kac", c.c_t1_kac},
              {"c_t2_kac", c.c_t2_kac},   {"c_moment", c.c_moment}, {"c_maxcoord", c.c_maxcoord},
              {"c_t2_ora", c.c_t2_ora}};
}

inline ConstantsConfig constants_from_json(const json& j) {
  ConstantsConfig c;
  c.c_k1 = j.value("c_k1", c.c_k1);
  c.c_k2 = j.value("c_k2", c.c_k2);
  c.c_t1_kac = j.value("c_t1_kac", c.c_t1_kac);
  c.c_t2_kac = j.value("c_t2_kac", c.c_t2_kac);
  c.c_moment = j.value("c_moment", c.c_moment);
  c.c_maxcoord = j.value("c_maxcoord", c.c_maxcoord);
  c.c_t2_ora = j.value("c_t2_ora", c.c_t2_ora);
  c.validate();
  return c;
}

inline json to_json(const TransformSpec& s) {
  json j;
  j["algorithm"] = std::string(to_string(s.algorithm));
  j["d"] = s.d;
  j["n"] = s.n == 0 ? json(nullptr) : json(detail::u64_str(s.n));
  j["log_n"] = s.log_n;
  j["epsilon"] = s.epsilon;
  j["master_seed"] = detail::u64_str(s.master_seed);
  j["T1"] = s.T1;
  j["T2"] = s.T2;
  j["K1"] = s.K1;
  j["K2"] = s.K2;
  j["k_out"] = s.k_out;
  j["stage1_selection"] = detail::selection_to_json(s.stage1_selection);
  j["stage2_selection"] = detail::selection_to_json(s.stage2_selection);
  j["sign_seeds"] = s.sign_seeds ? json::array({detail::u64_str(s.sign_seeds->first),
                                                detail::u64_str(s.sign_seeds->second)})
                                 : json(nullptr);
  j["walk_seeds"] =
      json::array({detail::u64_str(s.walk_seeds.first), detail::u64_str(s.walk_seeds.second)});
  j["constants"] = constants_to_json(s.constants);
  return j;
}

inline TransformSpec transform_spec_from_json(const json& j) {
  try {
    TransformSpec s;
    s.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    s.d = j.at("d").get<std::size_t>();
    s.n = j.at("n").is_null() ? 0 : detail::u64_from(j.at("n"));
    s.log_n = j.at("log_n").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    s.master_seed = detail::u64_from(j.at("master_seed"));
    s.T1 = j.at("T1").get<std::uint64_t>();
    s.T2 = j.at("T2").get<std::uint64_t>();
    s.K1 = j.at("K1").get<std::size_t>();
    s.K2 = j.at("K2").get<std::size_t>();
    s.k_out = j.at("k_out").get<std::size_t>();
    s.stage1_selection = detail::selection_from_json(j.at("stage1_selection"));
    s.stage2_selection = detail::selection_from_json(j.at("stage2_selection"));
    if (!j.at("sign_seeds").is_null())
      s.sign_seeds = std::pair{detail::u64_from(j["sign_seeds"].at(0)),
                               detail::u64_from(j["sign_seeds"].at(1))};
    s.walk_seeds = {detail::u64_from(j.at("walk_seeds").at(0)),
                    detail::u64_from(j.at("walk_seeds").at(1))};
    s.constants = constants_from_json(j.at("constants"));
    if (s.stage1_selection.d_in != s.d || s.stage2_selection.d_in != s.stage1_selection.count ||
        s.k_out != s.stage2_selection.count)
      throw Error(ErrorCode::Format, "selection sizes are inconsistent");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("transform spec: ") + e.what());
  }
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

inline TransformSpec read_transform_spec(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, path.string() + ": " + e.what());
  }
  return transform_spec_from_json(j);
}

}  // namespace kacjl
