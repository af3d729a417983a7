#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace euclidqm {

/// %.16e, '.' decimal regardless of locale.
std::string format_number(double v);

/// Quote a field if it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

/// Row-at-a-time CSV writer; throws IoError on failure.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  void close();

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace euclidqm
