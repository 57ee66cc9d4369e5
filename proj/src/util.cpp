#include "osmon/util.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

namespace osmon {

std::size_t for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::size_t, std::string_view)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw DataError("cannot open file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        fn(line_no, line);
    }
    return line_no;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw DataError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.is_open())
            throw DataError("cannot open file for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good())
            throw DataError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        const bool comment = row.size() == 1 && !row[0].empty() && row[0][0] == '#';
        const bool blank = row.size() == 1 && row[0].empty();
        if (!comment && !blank)
            rows.push_back(row);
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_started = true;
            break;
        case ',':
            end_field();
            row_started = true;
            break;
        case '\r':
            break;
        case '\n':
            end_row();
            break;
        default:
            field.push_back(c);
            row_started = true;
            break;
        }
    }
    if (row_started || !field.empty() || !row.empty())
        end_row();
    return rows;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    return parse_csv(read_text_file(path));
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string text_checksum(std::string_view data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

std::string file_checksum(const std::filesystem::path& path) {
    return text_checksum(read_text_file(path));
}

std::optional<std::string> format_ratio(const Ratio& ratio) {
    if (!ratio.defined())
        return std::nullopt;
    const std::int64_t scaled = ratio.numerator * 10000;
    std::int64_t q = scaled / ratio.denominator;
    const std::int64_t r = scaled % ratio.denominator;
    // round half to even on the exact rational remainder
    if (2 * r > ratio.denominator)
        ++q;
    else if (2 * r == ratio.denominator && (q % 2) != 0)
        ++q;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%lld.%04lld", static_cast<long long>(q / 10000),
                  static_cast<long long>(q % 10000));
    return std::string(buf);
}

std::string format_amount(double amount) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", amount);
    return buf;
}

int current_utc_year() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    return tm.tm_year + 1900;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("OSMON_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1)
            return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), n == 0 ? std::size_t{1} : n);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                fn(i);
        });
    }
    for (auto& t : threads)
        t.join();
}

}  // namespace osmon
