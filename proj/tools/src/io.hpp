#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "topograd/filtration.hpp"
#include "topograd/persistence.hpp"

namespace topograd::cli {

namespace fs = std::filesystem;

/// Input could not be read or parsed; the message names the file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double; integral values keep a
/// trailing ".0" and infinities are written as inf / -inf.
std::string format_double(double v);

/// Inverse of format_double (also accepts any plain decimal or exponent
/// form). Throws std::invalid_argument on trailing garbage.
double parse_double(std::string_view text);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const fs::path& path, std::string_view content);

std::string read_file(const fs::path& path);

/// Non-blank, non-comment lines split on commas with surrounding blanks trimmed.
std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path);

/// Headerless CSV, one point per row, 2 or 3 columns.
PointCloud read_points(const fs::path& path);
std::string points_csv(const PointCloud& cloud);

/// Plain PGM (P2), scaled by the maximum gray value, or a CSV grid. CSV
/// values already inside [0, 1] are kept as they are; otherwise the grid is
/// mapped affinely onto [0, 1] (a constant grid becomes zeros).
ScalarField read_image(const fs::path& path);
std::string image_csv(const ScalarField& image);

/// Diagram records `dim,birth,death,creator,destroyer`; destroyer -1 marks an
/// essential class. Simplex ids index the filtration's complex.
std::string diagram_csv(std::span<const PersistencePair> pairs);
std::string diagram_json(std::span<const PersistencePair> pairs);
std::vector<PersistencePair> read_diagram_csv(const fs::path& path);

}  // namespace topograd::cli
