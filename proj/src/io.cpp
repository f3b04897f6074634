#include "ssd/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssd/scenario.hpp"

namespace ssd::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool parse_double(std::string_view token, double& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

bool parse_long(std::string_view token, long long& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  bool next(std::string_view& token) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return false;
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    token = text_.substr(start, pos_ - start);
    return true;
  }

  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LandGrid read_grid(std::string_view text) {
  Tokens tokens(text);
  long long ncols = -1, nrows = -1, nodata = -1;
  double cellsize = -1.0;
  bool have_cellsize = false;

  std::string_view tok;
  for (;;) {
    const auto mark = tokens.position();
    if (!tokens.next(tok)) break;
    const auto key = lower(tok);
    const bool known = key == "ncols" || key == "nrows" || key == "cellsize" || key == "nodata_value" ||
                       key == "xllcorner" || key == "yllcorner" || key == "xllcenter" || key == "yllcenter";
    if (!known) {
      tokens.rewind(mark);
      break;
    }
    std::string_view value;
    if (!tokens.next(value)) throw FormatError("header key '" + std::string(tok) + "' has no value");
    double number = 0.0;
    if (!parse_double(value, number)) throw FormatError("malformed header value for '" + std::string(tok) + "'");
    if (key == "ncols" || key == "nrows" || key == "nodata_value") {
      long long n = 0;
      if (!parse_long(value, n)) throw FormatError("'" + std::string(tok) + "' must be an integer");
      (key == "ncols" ? ncols : key == "nrows" ? nrows : nodata) = n;
    } else if (key == "cellsize") {
      cellsize = number;
      have_cellsize = true;
    }
  }
  if (ncols <= 0 || nrows <= 0) throw FormatError("header needs positive ncols and nrows");
  if (!have_cellsize) throw FormatError("header needs cellsize");
  if (!(cellsize > 0.0)) throw FormatError("cellsize must be positive");

  LandGrid grid(static_cast<int>(nrows), static_cast<int>(ncols), cellsize);
  const auto expected = grid.cell_count();
  std::size_t read = 0;
  while (tokens.next(tok)) {
    long long v = 0;
    if (!parse_long(tok, v)) throw FormatError("malformed cell value '" + std::string(tok) + "'");
    if (read >= expected) throw FormatError("body has more than nrows*ncols = " + std::to_string(expected) + " values");
    if (v == nodata) throw FormatError("NODATA cells are not supported (cell " + std::to_string(read) + ")");
    const auto code = land_code_from_int(static_cast<int>(v));
    if (!code || v != static_cast<int>(v)) throw FormatError("unknown land code " + std::to_string(v));
    grid.set(read, *code, 0);
    ++read;
  }
  if (read < expected)
    throw FormatError("body has " + std::to_string(read) + " values, expected " + std::to_string(expected) +
                      " (short by " + std::to_string(expected - read) + ")");
  return grid;
}

std::string write_grid(const LandGrid& grid) {
  std::string cellsize = format_double(grid.cell_size_m());
  if (cellsize.find_first_of(".en") == std::string::npos) cellsize += ".0";
  std::string out;
  out.reserve(grid.cell_count() * 2 + 64);
  out += "ncols " + std::to_string(grid.ncols()) + "\n";
  out += "nrows " + std::to_string(grid.nrows()) + "\n";
  out += "cellsize " + cellsize + "\n";
  out += "NODATA_value -1\n";
  for (int r = 0; r < grid.nrows(); ++r) {
    for (int c = 0; c < grid.ncols(); ++c) {
      if (c) out += ' ';
      out += static_cast<char>('0' + static_cast<int>(grid.code(r, c)));
    }
    out += '\n';
  }
  return out;
}

LandGrid load_grid(const std::filesystem::path& path) {
  try {
    return read_grid(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_grid(const LandGrid& grid, const std::filesystem::path& path) { write_file(path, write_grid(grid)); }

void write_records(const std::vector<SimulationRecord>& records, std::ostream& out) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.time) << ',' << format_double(r.luminosity) << ',' << format_double(r.temperature_c) << ','
        << format_double(r.area_black_ha) << ',' << format_double(r.area_white_ha) << ','
        << format_double(r.area_fertile_ha) << ',' << format_double(r.area_barren_ha) << ','
        << format_double(r.albedo) << ',' << format_double(r.d_black) << ',' << format_double(r.d_white) << ','
        << r.grown_black << ',' << r.grown_white << ',' << r.decayed_black << ',' << r.decayed_white << '\n';
  }
}

void write_records(const std::vector<SimulationRecord>& records, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_records(records, buf);
  write_file(path, buf.str());
}

Table read_table(std::string_view text) {
  Table t;
  std::size_t pos = 0;
  int line_no = 0;
  auto split = [](std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  };
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (t.columns.empty()) {
      for (auto f : fields) t.columns.emplace_back(f);
      continue;
    }
    if (fields.size() != t.columns.size())
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                        " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double v = 0.0;
      if (!parse_double(f, v))
        throw FormatError("line " + std::to_string(line_no) + ": malformed number '" + std::string(f) + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw FormatError("empty CSV");
  return t;
}

Table load_table(const std::filesystem::path& path) {
  try {
    return read_table(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<SimulationRecord> read_records(std::string_view text) {
  const auto t = read_table(text);
  std::string header;
  for (std::size_t i = 0; i < t.columns.size(); ++i) header += (i ? "," : "") + t.columns[i];
  if (header != kRecordsHeader) throw FormatError("unexpected records header: " + header);
  std::vector<SimulationRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    SimulationRecord r;
    r.time = row[0];
    r.luminosity = row[1];
    r.temperature_c = row[2];
    r.area_black_ha = row[3];
    r.area_white_ha = row[4];
    r.area_fertile_ha = row[5];
    r.area_barren_ha = row[6];
    r.albedo = row[7];
    r.d_black = row[8];
    r.d_white = row[9];
    r.grown_black = static_cast<std::int64_t>(row[10]);
    r.grown_white = static_cast<std::int64_t>(row[11]);
    r.decayed_black = static_cast<std::int64_t>(row[12]);
    r.decayed_white = static_cast<std::int64_t>(row[13]);
    out.push_back(r);
  }
  return out;
}

std::string write_snapshot(const LandGrid& grid) {
  std::string out = "P3\n" + std::to_string(grid.ncols()) + " " + std::to_string(grid.nrows()) + "\n255\n";
  for (int r = 0; r < grid.nrows(); ++r) {
    for (int c = 0; c < grid.ncols(); ++c) {
      const auto& rgb = kPalette[static_cast<int>(grid.code(r, c))];
      if (c) out += ' ';
      out += std::to_string(rgb[0]) + ' ' + std::to_string(rgb[1]) + ' ' + std::to_string(rgb[2]);
    }
    out += '\n';
  }
  return out;
}

void save_snapshot(const LandGrid& grid, const std::filesystem::path& path) { write_file(path, write_snapshot(grid)); }

std::filesystem::path snapshot_path(const std::filesystem::path& dir, int step) {
  char name[32];
  std::snprintf(name, sizeof name, "map_%05d.ppm", step);
  return dir / name;
}

}  // namespace ssd::io
