#include "osmon/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace osmon {
namespace {

// Fixed Latin fold table (Latin-1 Supplement + Latin Extended-A). Folds are
// lowercase ASCII; anything absent from the table is treated as a separator.
const std::unordered_map<char32_t, const char*>& fold_table() {
    static const std::unordered_map<char32_t, const char*> table = {
        { 0x00C0, "a" },  { 0x00C1, "a" },  { 0x00C2, "a" },  { 0x00C3, "a" },  { 0x00C4, "a" },
        { 0x00C5, "a" },  { 0x00C6, "ae" }, { 0x00C7, "c" },  { 0x00C8, "e" },  { 0x00C9, "e" },
        { 0x00CA, "e" },  { 0x00CB, "e" },  { 0x00CC, "i" },  { 0x00CD, "i" },  { 0x00CE, "i" },
        { 0x00CF, "i" },  { 0x00D0, "d" },  { 0x00D1, "n" },  { 0x00D2, "o" },  { 0x00D3, "o" },
        { 0x00D4, "o" },  { 0x00D5, "o" },  { 0x00D6, "o" },  { 0x00D8, "o" },  { 0x00D9, "u" },
        { 0x00DA, "u" },  { 0x00DB, "u" },  { 0x00DC, "u" },  { 0x00DD, "y" },  { 0x00DE, "th" },
        { 0x00DF, "ss" },
        { 0x00E0, "a" },  { 0x00E1, "a" },  { 0x00E2, "a" },  { 0x00E3, "a" },  { 0x00E4, "a" },
        { 0x00E5, "a" },  { 0x00E6, "ae" }, { 0x00E7, "c" },  { 0x00E8, "e" },  { 0x00E9, "e" },
        { 0x00EA, "e" },  { 0x00EB, "e" },  { 0x00EC, "i" },  { 0x00ED, "i" },  { 0x00EE, "i" },
        { 0x00EF, "i" },  { 0x00F0, "d" },  { 0x00F1, "n" },  { 0x00F2, "o" },  { 0x00F3, "o" },
        { 0x00F4, "o" },  { 0x00F5, "o" },  { 0x00F6, "o" },  { 0x00F8, "o" },  { 0x00F9, "u" },
        { 0x00FA, "u" },  { 0x00FB, "u" },  { 0x00FC, "u" },  { 0x00FD, "y" },  { 0x00FE, "th" },
        { 0x00FF, "y" },
        { 0x0100, "a" },  { 0x0101, "a" },  { 0x0102, "a" },  { 0x0103, "a" },  { 0x0104, "a" },
        { 0x0105, "a" },  { 0x0106, "c" },  { 0x0107, "c" },  { 0x0108, "c" },  { 0x0109, "c" },
        { 0x010A, "c" },  { 0x010B, "c" },  { 0x010C, "c" },  { 0x010D, "c" },  { 0x010E, "d" },
        { 0x010F, "d" },  { 0x0110, "d" },  { 0x0111, "d" },  { 0x0112, "e" },  { 0x0113, "e" },
        { 0x0114, "e" },  { 0x0115, "e" },  { 0x0116, "e" },  { 0x0117, "e" },  { 0x0118, "e" },
        { 0x0119, "e" },  { 0x011A, "e" },  { 0x011B, "e" },  { 0x011C, "g" },  { 0x011D, "g" },
        { 0x011E, "g" },  { 0x011F, "g" },  { 0x0120, "g" },  { 0x0121, "g" },  { 0x0122, "g" },
        { 0x0123, "g" },  { 0x0124, "h" },  { 0x0125, "h" },  { 0x0126, "h" },  { 0x0127, "h" },
        { 0x0128, "i" },  { 0x0129, "i" },  { 0x012A, "i" },  { 0x012B, "i" },  { 0x012C, "i" },
        { 0x012D, "i" },  { 0x012E, "i" },  { 0x012F, "i" },  { 0x0130, "i" },  { 0x0131, "i" },
        { 0x0134, "j" },  { 0x0135, "j" },  { 0x0136, "k" },  { 0x0137, "k" },  { 0x0139, "l" },
        { 0x013A, "l" },  { 0x013B, "l" },  { 0x013C, "l" },  { 0x013D, "l" },  { 0x013E, "l" },
        { 0x013F, "l" },  { 0x0140, "l" },  { 0x0141, "l" },  { 0x0142, "l" },  { 0x0143, "n" },
        { 0x0144, "n" },  { 0x0145, "n" },  { 0x0146, "n" },  { 0x0147, "n" },  { 0x0148, "n" },
        { 0x014C, "o" },  { 0x014D, "o" },  { 0x014E, "o" },  { 0x014F, "o" },  { 0x0150, "o" },
        { 0x0151, "o" },  { 0x0152, "oe" }, { 0x0153, "oe" }, { 0x0154, "r" },  { 0x0155, "r" },
        { 0x0156, "r" },  { 0x0157, "r" },  { 0x0158, "r" },  { 0x0159, "r" },  { 0x015A, "s" },
        { 0x015B, "s" },  { 0x015C, "s" },  { 0x015D, "s" },  { 0x015E, "s" },  { 0x015F, "s" },
        { 0x0160, "s" },  { 0x0161, "s" },  { 0x0162, "t" },  { 0x0163, "t" },  { 0x0164, "t" },
        { 0x0165, "t" },  { 0x0166, "t" },  { 0x0167, "t" },  { 0x0168, "u" },  { 0x0169, "u" },
        { 0x016A, "u" },  { 0x016B, "u" },  { 0x016C, "u" },  { 0x016D, "u" },  { 0x016E, "u" },
        { 0x016F, "u" },  { 0x0170, "u" },  { 0x0171, "u" },  { 0x0172, "u" },  { 0x0173, "u" },
        { 0x0174, "w" },  { 0x0175, "w" },  { 0x0176, "y" },  { 0x0177, "y" },  { 0x0178, "y" },
        { 0x0179, "z" },  { 0x017A, "z" },  { 0x017B, "z" },  { 0x017C, "z" },  { 0x017D, "z" },
        { 0x017E, "z" },  { 0x017F, "s" },  { 0x1E9E, "ss" },
    };
    return table;
}

// Decodes one UTF-8 codepoint at i; advances i. Invalid bytes yield U+FFFD.
char32_t next_codepoint(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const unsigned char b = byte(i + static_cast<std::size_t>(k));
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

bool is_ascii_alnum(char32_t cp) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool strip_prefix_ci(std::string& s, std::string_view prefix) {
    if (s.size() < prefix.size())
        return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i])
            return false;
    }
    s.erase(0, prefix.size());
    return true;
}

}  // namespace

NormalizedKey normalize_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool separator_pending = false;
    std::size_t i = 0;
    while (i < raw.size()) {
        const char32_t cp = next_codepoint(raw, i);
        std::string_view piece;
        char ascii = 0;
        if (is_ascii_alnum(cp)) {
            ascii = static_cast<char>(std::tolower(static_cast<int>(cp)));
            piece = std::string_view(&ascii, 1);
        } else {
            const auto& table = fold_table();
            if (const auto it = table.find(cp); it != table.end())
                piece = it->second;
        }
        if (piece.empty()) {
            separator_pending = true;
            continue;
        }
        if (separator_pending && !out.empty())
            out.push_back(' ');
        separator_pending = false;
        out.append(piece);
    }
    return NormalizedKey{std::move(out)};
}

std::vector<std::string> tokenize(const NormalizedKey& key) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    const std::string& v = key.value;
    while (start < v.size()) {
        std::size_t end = v.find(' ', start);
        if (end == std::string::npos)
            end = v.size();
        if (end > start)
            tokens.push_back(v.substr(start, end - start));
        start = end + 1;
    }
    return tokens;
}

std::optional<std::string> normalize_doi(std::string_view raw) {
    std::string s(trim(raw));
    static constexpr std::string_view prefixes[] = {
        "https://doi.org/", "http://doi.org/",  "https://dx.doi.org/",
        "http://dx.doi.org/", "dx.doi.org/",    "doi.org/",
        "doi:",
    };
    bool stripped = true;
    while (stripped) {
        stripped = false;
        for (const auto prefix : prefixes) {
            if (strip_prefix_ci(s, prefix)) {
                stripped = true;
                break;
            }
        }
    }
    s = ascii_lower(s);
    if (s.size() < 7 || s.compare(0, 3, "10.") != 0)
        return std::nullopt;
    const std::size_t slash = s.find('/');
    if (slash == std::string::npos || slash <= 3 || slash + 1 >= s.size())
        return std::nullopt;
    if (s.find_first_of(" \t\r\n") != std::string::npos)
        return std::nullopt;
    return s;
}

std::optional<std::string> normalize_issn(std::string_view raw) {
    std::string digits;
    for (char c : raw) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            digits.push_back(c);
        else if (c == 'x' || c == 'X')
            digits.push_back('X');
        else if (c != '-' && !std::isspace(static_cast<unsigned char>(c)))
            return std::nullopt;
    }
    if (digits.size() != 8)
        return std::nullopt;
    for (std::size_t i = 0; i + 1 < digits.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])))
            return std::nullopt;
    }
    return digits;
}

bool is_valid_orcid(std::string_view raw) {
    std::string digits;
    for (char c : trim(raw)) {
        if (c == '-')
            continue;
        digits.push_back(c);
    }
    if (digits.size() != 16)
        return false;
    int total = 0;
    for (std::size_t i = 0; i < 15; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])))
            return false;
        total = (total + (digits[i] - '0')) * 2;
    }
    const int remainder = total % 11;
    const int check = (12 - remainder) % 11;
    const char last = digits[15];
    if (check == 10)
        return last == 'X' || last == 'x';
    return last == static_cast<char>('0' + check);
}

}  // namespace osmon
