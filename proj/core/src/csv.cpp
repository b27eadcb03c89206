#include "qcomb/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qcomb/errors.hpp"

namespace qcomb {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::string provenance_line(std::string_view config_hash) {
  return std::string("# qcomb ") + QCOMB_VERSION + " config=" + std::string(config_hash);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

std::string csv_columns(const std::vector<std::string>& header,
                        const std::vector<std::span<const double>>& columns) {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    out += (j ? "," : "") + header[j];
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_number(columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

CountsData parse_counts_csv(std::string_view text) {
  CountsData data;
  int tau_col = -1;
  int counts_col = -1;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto fields = split(line, ',');
    const std::string where = "data line " + std::to_string(line_no) + ": ";
    if (tau_col < 0) {
      for (std::size_t j = 0; j < fields.size(); ++j) {
        const auto name = trim(fields[j]);
        if (name == "tau_s") tau_col = static_cast<int>(j);
        if (name == "counts") counts_col = static_cast<int>(j);
      }
      if (tau_col < 0 || counts_col < 0) {
        throw ValidationError(where + "header must name columns tau_s and counts");
      }
      columns = fields.size();
    } else {
      if (fields.size() != columns) {
        throw ValidationError(where + "expected " + std::to_string(columns) + " fields, found " +
                              std::to_string(fields.size()));
      }
      double values[2];
      const int cols[2] = {tau_col, counts_col};
      for (int k = 0; k < 2; ++k) {
        const auto field = trim(fields[static_cast<std::size_t>(cols[k])]);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), values[k]);
        if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(values[k])) {
          throw ValidationError(where + "malformed number '" + std::string(field) + "'");
        }
      }
      if (values[1] < 0.0) {
        throw ValidationError(where + "negative count");
      }
      data.delays.push_back(values[0]);
      data.counts.push_back(values[1]);
    }
    if (end == text.size()) break;
  }
  if (tau_col < 0) {
    throw ValidationError("data file has no header line");
  }
  for (std::size_t i = 1; i < data.delays.size(); ++i) {
    if (!(data.delays[i] > data.delays[i - 1])) {
      throw ValidationError("data delays must be strictly increasing (row " + std::to_string(i + 1) + ")");
    }
  }
  return data;
}

CountsData read_counts_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open data file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_counts_csv(buffer.str());
}

}  // namespace qcomb
