#pragma once

#include <string>
#include <vector>

namespace cqnls {

/// In-memory CSV table with a fixed header; every row must match its width.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    void add_row(std::vector<std::string> row);

    std::string str() const;
    /// Throws IoError on failure.
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trippable decimal form.
std::string fmt(double v);
std::string fmt(long v);
inline std::string fmt(int v) { return fmt(long(v)); }

}  // namespace cqnls
