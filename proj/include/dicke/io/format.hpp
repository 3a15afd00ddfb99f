// format.hpp: locale-independent number formatting and CSV output

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dicke::io {

// Shortest round-trip form is not required; 17 significant digits always round-trips.
inline std::string full_precision(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    // "-0.00" and "0.00" must not differ between runs that round differently to zero
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        row_ = std::move(header);
        flush_row();
    }

    CsvWriter& cell(double v) { return cell(full_precision(v)); }
    CsvWriter& cell(long v) { return cell(std::to_string(v)); }
    CsvWriter& cell(int v) { return cell(std::to_string(v)); }
    CsvWriter& cell(std::size_t v) { return cell(std::to_string(v)); }
    CsvWriter& cell(bool v) { return cell(std::string(v ? "1" : "0")); }
    CsvWriter& cell(const char* v) { return cell(std::string(v)); }
    CsvWriter& cell(std::string_view v) { return cell(std::string(v)); }
    CsvWriter& cell(std::string v) {
        row_.push_back(std::move(v));
        return *this;
    }

    void end_row() {
        if (row_.size() != columns_)
            throw std::logic_error("CsvWriter: row has " + std::to_string(row_.size()) + " cells, header has " +
                                   std::to_string(columns_));
        flush_row();
    }

    const std::string& str() const noexcept { return text_; }

private:
    void flush_row() {
        for (std::size_t i = 0; i < row_.size(); ++i) {
            if (i) text_ += ',';
            text_ += row_[i];
        }
        text_ += '\n';
        row_.clear();
    }

    std::size_t columns_;
    std::vector<std::string> row_;
    std::string text_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

} // namespace dicke::io
