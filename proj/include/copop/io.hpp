// Deterministic artifact output: shortest round-trip float formatting, CSV
// writing, and a config digest.
#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace copop {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

/// FNV-1a 64-bit digest, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Line-buffered CSV writer with a fixed header; LF endings, comma separated.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace copop
