#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

namespace topograd::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const fs::path& path, std::size_t line, const std::string& what) {
  std::string msg = path.string();
  if (line > 0) msg += ":" + std::to_string(line);
  throw InputError(msg + ": " + what);
}

double parse_cell(const fs::path& path, std::size_t line, const std::string& cell) {
  try {
    return parse_double(cell);
  } catch (const std::invalid_argument&) {
    fail(path, line, "not a number: '" + cell + "'");
  }
}

Index parse_index(const fs::path& path, std::size_t line, const std::string& cell) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) fail(path, line, "not an index: '" + cell + "'");
  return v;
}

// Lines that carry data, with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> data_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(no, std::string(t));
  }
  return out;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

ScalarField read_pgm(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream words(line);
    for (std::string w; words >> w;) tokens.push_back(w);
  }
  if (tokens.empty()) fail(path, 0, "empty file");
  if (tokens[0] != "P2") fail(path, 0, "expected a plain PGM (P2) header");
  if (tokens.size() < 4) fail(path, 0, "truncated PGM header");
  auto number = [&](std::size_t i) {
    long v = 0;
    const auto& t = tokens[i];
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v < 0) fail(path, 0, "bad PGM token '" + t + "'");
    return v;
  };
  const long cols = number(1), rows = number(2), maxval = number(3);
  if (cols < 1 || rows < 1 || maxval < 1) fail(path, 0, "PGM size and maximum must be positive");
  const std::size_t count = static_cast<std::size_t>(rows * cols);
  if (tokens.size() != 4 + count) {
    fail(path, 0, "expected " + std::to_string(count) + " pixels, found " + std::to_string(tokens.size() - 4));
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const long v = number(4 + i);
    if (v > maxval) fail(path, 0, "pixel value above the PGM maximum");
    values[i] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  return ScalarField(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [no, line] : data_lines(path)) rows.push_back(split(line));
  return rows;
}

PointCloud read_points(const fs::path& path) {
  const auto lines = data_lines(path);
  if (lines.empty()) fail(path, 0, "no points");
  const std::size_t dim = split(lines.front().second).size();
  if (dim != 2 && dim != 3) fail(path, lines.front().first, "points need 2 or 3 columns");
  std::vector<double> coords;
  for (const auto& [no, line] : lines) {
    const auto cells = split(line);
    if (cells.size() != dim) fail(path, no, "expected " + std::to_string(dim) + " columns");
    for (const auto& c : cells) {
      const double v = parse_cell(path, no, c);
      if (!std::isfinite(v)) fail(path, no, "coordinates must be finite");
      coords.push_back(v);
    }
  }
  return PointCloud(static_cast<int>(dim), std::move(coords));
}

std::string points_csv(const PointCloud& cloud) {
  std::string out;
  for (Index i = 0; i < cloud.size(); ++i) {
    for (int k = 0; k < cloud.dim(); ++k) {
      if (k) out += ',';
      out += format_double(cloud(i, k));
    }
    out += '\n';
  }
  return out;
}

ScalarField read_image(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return read_pgm(path);

  const auto lines = data_lines(path);
  if (lines.empty()) fail(path, 0, "no pixels");
  const std::size_t cols = split(lines.front().second).size();
  std::vector<double> values;
  for (const auto& [no, line] : lines) {
    const auto cells = split(line);
    if (cells.size() != cols) fail(path, no, "expected " + std::to_string(cols) + " columns");
    for (const auto& c : cells) {
      const double v = parse_cell(path, no, c);
      if (!std::isfinite(v)) fail(path, no, "pixels must be finite");
      values.push_back(v);
    }
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo < 0.0 || *hi > 1.0) {
    const double a = *lo, span = *hi - *lo;
    for (auto& v : values) v = span > 0.0 ? (v - a) / span : 0.0;
  }
  return ScalarField(static_cast<int>(lines.size()), static_cast<int>(cols), std::move(values));
}

std::string image_csv(const ScalarField& image) {
  std::string out;
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      if (c) out += ',';
      out += format_double(image(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string diagram_csv(std::span<const PersistencePair> pairs) {
  std::string out = "dim,birth,death,creator,destroyer\n";
  for (const auto& p : pairs) {
    out += std::to_string(p.dim) + ',' + format_double(p.birth) + ',' + format_double(p.death) + ',' +
           std::to_string(p.creator) + ',' + std::to_string(p.destroyer) + '\n';
  }
  return out;
}

std::string diagram_json(std::span<const PersistencePair> pairs) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_double(v);
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"dim", p.dim},
                   {"birth", number(p.birth)},
                   {"death", number(p.death)},
                   {"creator", p.creator},
                   {"destroyer", p.destroyer}});
  }
  return nlohmann::json{{"pairs", arr}}.dump(1) + "\n";
}

std::vector<PersistencePair> read_diagram_csv(const fs::path& path) {
  const auto lines = data_lines(path);
  if (lines.empty() || lines.front().second != "dim,birth,death,creator,destroyer") {
    fail(path, lines.empty() ? 0 : lines.front().first, "missing diagram header");
  }
  std::vector<PersistencePair> pairs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, line] = lines[i];
    const auto cells = split(line);
    if (cells.size() != 5) fail(path, no, "expected 5 columns");
    PersistencePair p;
    p.dim = parse_index(path, no, cells[0]);
    p.birth = parse_cell(path, no, cells[1]);
    p.death = parse_cell(path, no, cells[2]);
    p.creator = parse_index(path, no, cells[3]);
    p.destroyer = parse_index(path, no, cells[4]);
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace topograd::cli
