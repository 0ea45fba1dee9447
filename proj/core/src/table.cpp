#include "sgfield/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sgfield {

OutputTable::OutputTable(std::string subcommand, std::vector<std::string> columns)
    : subcommand_(std::move(subcommand)), columns_(std::move(columns)) {}

void OutputTable::set_config(const std::string& key, const std::string& value) {
    config_[key] = value;
}

void OutputTable::set_config(const std::string& key, double value) {
    config_[key] = format_double(value);
}

void OutputTable::set_config(const std::string& key, long long value) {
    config_[key] = std::to_string(value);
}

void OutputTable::add_note(std::string line) { notes_.push_back(std::move(line)); }

void OutputTable::add_row(std::span<const double> values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("OutputTable: row width does not match columns");
    rows_.emplace_back(values.begin(), values.end());
}

std::string OutputTable::format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string OutputTable::to_csv() const {
    std::ostringstream os;
    os << "# " << kArtifactName << " " << kArtifactVersion << "\n";
    os << "# subcommand=" << subcommand_ << "\n";
    for (const auto& [k, v] : config_) os << "# " << k << "=" << v << "\n";
    for (const auto& note : notes_) os << "# " << note << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << columns_[i] << (i + 1 < columns_.size() ? "," : "");
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        os << "\n";
    }
    return os.str();
}

std::string OutputTable::to_json() const {
    nlohmann::ordered_json j;
    j["artifact"] = kArtifactName;
    j["version"] = kArtifactVersion;
    j["subcommand"] = subcommand_;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_) cfg[k] = v;
    j["config"] = cfg;
    j["notes"] = notes_;
    j["columns"] = columns_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) rows.push_back(row);
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

void OutputTable::write_file(const std::string& path, const std::string& format) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output path: " + path);
    if (format == "csv")
        out << to_csv();
    else if (format == "json")
        out << to_json();
    else
        throw std::invalid_argument("unknown output format: " + format);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace sgfield
