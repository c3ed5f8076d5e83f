#ifndef COSSERAT_CSV_HPP
#define COSSERAT_CSV_HPP

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosserat {

inline constexpr const char* kSchemaVersion = "1";

/// Deterministic CSV writer: fixed column set, 17 significant digits,
/// schema version embedded in a leading comment row.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              const std::vector<std::string>& comments = {})
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file " + path);
        out_ << "# schema_version=" << kSchemaVersion << "\n";
        for (const auto& c : comments) out_ << "# " << c << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
        out_.precision(17);
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << values[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

} // namespace cosserat

#endif
