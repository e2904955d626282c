#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace sinrcap {

// Row-oriented CSV writer. Doubles are printed with %.17g so every value
// round-trips exactly; lines end with a bare LF on every platform.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out_ << ',';
            out_ << names[i];
        }
        out_ << '\n';
    }

    template <typename... Ts>
    void row(Ts... values) {
        bool first = true;
        (write_field(values, first), ...);
        out_ << '\n';
    }

    // Incremental variant for rows whose column count is only known at
    // runtime: any number of field() calls followed by end_row().
    template <typename T>
    void field(T value) {
        write_field(value, row_open_first_);
    }

    void end_row() {
        out_ << '\n';
        row_open_first_ = true;
    }

    void close() {
        out_.close();
        if (!out_) throw std::runtime_error("CsvWriter: close failed");
    }

  private:
    template <typename T>
    void write_field(T value, bool& first) {
        if (!first) out_ << ',';
        first = false;
        if constexpr (std::is_floating_point_v<T>) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(value));
            out_ << buf;
        } else {
            out_ << value;
        }
    }

    std::ofstream out_;
    bool row_open_first_ = true;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001B3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) break;
    }
    return hash;
}

} // namespace sinrcap
