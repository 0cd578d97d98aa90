#pragma once

// RFC-4180 CSV output with locale-independent shortest-round-trip number
// formatting, so repeated runs produce byte-identical files.

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomacell {

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary), n_cols_(columns.size()) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        write_cells(columns);
    }

    void row(const std::vector<double>& values) {
        if (values.size() != n_cols_) throw std::logic_error("csv row width mismatch");
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_double(v));
        write_cells(cells);
        ++rows_;
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != n_cols_) throw std::logic_error("csv row width mismatch");
        write_cells(cells);
        ++rows_;
    }

    std::size_t rows() const { return rows_; }

  private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(cells[i]);
        }
        out_ << "\r\n";
    }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    }

    std::ofstream out_;
    std::size_t n_cols_;
    std::size_t rows_ = 0;
};

}  // namespace nomacell
