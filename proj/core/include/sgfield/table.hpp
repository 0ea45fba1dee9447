#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace sgfield {

inline constexpr const char* kArtifactName = "sgfield";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Numeric result table with an embedded config echo, so every output file is
/// self-describing and byte-reproducible. Doubles are printed in shortest
/// round-trip form; config keys are emitted sorted.
class OutputTable {
  public:
    OutputTable(std::string subcommand, std::vector<std::string> columns);

    void set_config(const std::string& key, const std::string& value);
    void set_config(const std::string& key, double value);
    void set_config(const std::string& key, long long value);
    /// Free-form summary lines, emitted after the config block.
    void add_note(std::string line);
    void add_row(std::span<const double> values);

    std::string to_csv() const;
    std::string to_json() const;
    /// format: "csv" or "json".
    void write_file(const std::string& path, const std::string& format) const;

    static std::string format_double(double v);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t row_count() const { return rows_.size(); }

  private:
    std::string subcommand_;
    std::vector<std::string> columns_;
    std::map<std::string, std::string> config_;
    std::vector<std::string> notes_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace sgfield
