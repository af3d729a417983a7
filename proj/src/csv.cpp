#include "euclidqm/csv.hpp"

#include <cstdio>

#include "euclidqm/errors.hpp"

namespace euclidqm {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  // snprintf honours LC_NUMERIC; the CLI never changes it, but be strict.
  for (char* c = buf; *c; ++c)
    if (*c == ',') *c = '.';
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw InternalError("csv row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
  if (!out_) throw IoError("write to '" + path_ + "' failed");
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("closing '" + path_ + "' failed");
}

}  // namespace euclidqm
