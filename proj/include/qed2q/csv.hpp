/******************************************************************************
 * csv.hpp
 *
 * Minimal CSV output: header row + numeric rows, 17 significant digits,
 * LF line endings.
 ******************************************************************************/
#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qed2q {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw std::runtime_error("CsvWriter: cannot open " + path);
    }

    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << '\n';
    }

    void row(std::span<const double> vals) {
        char buf[32];
        for (size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ << ',';
            std::snprintf(buf, sizeof buf, "%.16e", vals[i]);
            out_ << buf;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace qed2q
