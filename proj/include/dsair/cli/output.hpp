#ifndef DSAIR_CLI_OUTPUT_HPP
#define DSAIR_CLI_OUTPUT_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dsair::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, so parsing the text gives back the same double.
std::string format_number(double x);

// RFC 4180: fields containing a comma, quote or line break are quoted.
std::string csv_field(std::string_view field);

// Builds a CSV document with CRLF-free "\n" line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const noexcept { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

std::string meta_path(const std::string& out);

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

// Stable pretty-printed JSON followed by a newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace dsair::cli

#endif  // DSAIR_CLI_OUTPUT_HPP
