#ifndef QSDECAY_CSV_HPP
#define QSDECAY_CSV_HPP

#include <string>
#include <vector>

namespace qsdecay {

// CSV writer with a '#'-prefixed provenance header; numbers carry 12
// significant digits. Files are written atomically (temp file + rename).
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> provenance,
            std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);
  // flush and atomically move into place
  void close();
  ~CsvWriter();

 private:
  std::string path_, tmp_path_;
  std::string buffer_;
  bool closed_ = false;
};

std::string format_si12(double v);

// Provenance block: config echo + version + timestamp, one string per line.
std::vector<std::string> provenance_block(
    const std::vector<std::pair<std::string, std::string>>& config_echo);

}  // namespace qsdecay

#endif
