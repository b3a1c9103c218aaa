#pragma once
// CSV emitter with a fixed "%.12g" numeric format so reruns are byte-identical.
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace dbar2 {

inline std::string fmt_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path), ncols_(columns.size()) {
        if (!out_) throw std::runtime_error("csv: cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt_g12(values[i]);
        out_ << "\n";
    }

    std::size_t columns() const { return ncols_; }

  private:
    std::ofstream out_;
    std::size_t ncols_;
};

} // namespace dbar2
