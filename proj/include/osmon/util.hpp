#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osmon {

// Fatal problem with the pipeline configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fatal problem with input data, e.g. an unreadable file (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One skipped input line; rejects are always counted, never silently dropped.
struct LineReject {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

// Calls fn(line_number, line) for every line (1-based, no trailing '\n').
// Returns the number of lines seen. Throws DataError if the file cannot be
// opened.
std::size_t for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::size_t, std::string_view)>& fn);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames into place, so readers never
// observe a truncated artifact.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// RFC 4180-style CSV: quoted fields, embedded commas/quotes/newlines.
// Blank lines and lines starting with '#' are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);
std::string text_checksum(std::string_view data);                   // "fnv1a64:<16 hex>"
std::string file_checksum(const std::filesystem::path& path);

// Count pair for every reported rate; a zero denominator marks the rate
// undefined rather than zero.
struct Ratio {
    std::int64_t numerator = 0;
    std::int64_t denominator = 0;

    bool defined() const { return denominator > 0; }
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

// Fixed-point rendering shared by every report surface: 4 decimal places,
// ties to even, computed in exact integer arithmetic. nullopt when undefined.
std::optional<std::string> format_ratio(const Ratio& ratio);

// Monetary amounts: 2 decimal places.
std::string format_amount(double amount);

int current_utc_year();

// Runs fn(i) for i in [0, n). Parallel over at most OSMON_WORKERS threads
// (default: hardware concurrency); fn must only write to its own slot so the
// result is identical to sequential execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
std::size_t worker_count();

}  // namespace osmon
