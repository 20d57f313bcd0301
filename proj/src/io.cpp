#include <nlqk/io.hpp>

#include <nlqk/errors.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace nlqk::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const std::string field =
        trim(std::string_view(line).substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start));
    double v = 0.0;
    const auto* begin = field.data();
    const auto* end = begin + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (field.empty() || res.ec != std::errc{} || res.ptr != end) return false;
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!parse_row(line, row)) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                            ": not a numeric row");
    }
    if (row.size() != columns) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(columns) + " columns");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InvalidArgument("write failed for '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string xy_csv(std::span<const double> x, std::span<const double> values,
                   const std::string& value_header) {
  if (x.size() != values.size()) throw InvalidArgument("xy_csv: length mismatch");
  std::string out = "x," + value_header + "\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += format_double(x[i]);
    out += ',';
    out += format_double(values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace nlqk::io
