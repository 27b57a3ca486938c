#include "qsdecay/csv.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsdecay {

std::string format_si12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> provenance_block(
    const std::vector<std::pair<std::string, std::string>>& config_echo) {
  std::vector<std::string> lines;
  lines.push_back("qsdecay 0.1.0  (atomic units throughout)");
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char ts[64];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  lines.push_back(std::string("generated: ") + ts);
  lines.push_back("config:");
  for (const auto& [k, v] : config_echo) lines.push_back("  " + k + " = " + v);
  return lines;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> provenance,
                     std::vector<std::string> columns)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp") {
  for (const auto& line : provenance) buffer_ += "# " + line + "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_si12(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::raw_row(const std::string& line) {
  buffer_ += line;
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("csv: cannot write '" + tmp_path_ + "'");
  out << buffer_;
  out.close();
  if (!out) throw std::runtime_error("csv: write failed for '" + tmp_path_ + "'");
  if (std::rename(tmp_path_.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("csv: cannot move '" + tmp_path_ + "' into place");
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

}  // namespace qsdecay
