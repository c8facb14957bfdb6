#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nspr/errors.hpp"

namespace nspr {

/// CSV with a single header row and a fixed column order. Floats carry 17
/// significant digits so rereading is lossless; files are written to a
/// temporary name and renamed, so failures leave no partial output.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    void add_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size())
            throw ConfigError("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(columns_.size()));
        rows_.push_back(cells);
    }

    std::string str() const {
        std::string out = join(columns_);
        for (const auto& r : rows_) {
            out += '\n';
            out += join(r);
        }
        out += '\n';
        return out;
    }

    void write(const std::filesystem::path& path) const { write_atomic(path, str()); }

    static void write_atomic(const std::filesystem::path& path, const std::string& content) {
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
            f << content;
            if (!f.good()) throw ConfigError("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

  private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        return out;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace nspr
