#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcomb {

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// "# qcomb <version> config=<hash>"
std::string provenance_line(std::string_view config_hash);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Column-oriented CSV body: header line, then one row per index.
std::string csv_columns(const std::vector<std::string>& header,
                        const std::vector<std::span<const double>>& columns);

struct CountsData {
  std::vector<double> delays;  // s
  std::vector<double> counts;
};

/// Reads a `tau_s,counts` file. Lines starting with '#' are skipped; the first
/// other line is the header. Throws IoError if the file cannot be read and
/// ValidationError naming the line for malformed content.
CountsData read_counts_csv(const std::filesystem::path& path);
CountsData parse_counts_csv(std::string_view text);

}  // namespace qcomb
