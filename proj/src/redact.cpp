#include "rsim/corpus.hpp"

#include <cctype>
#include <string>

namespace rsim {

namespace {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_sep(char c) { return c == ' ' || c == '-'; }

bool luhn_valid(const std::string& digits) {
    int sum = 0;
    bool dbl = false;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        int d = *it - '0';
        if (dbl) {
            d *= 2;
            if (d > 9) d -= 9;
        }
        sum += d;
        dbl = !dbl;
    }
    return sum % 10 == 0;
}

// Parses digits optionally joined by single space/dash separators starting
// at `pos`. Returns the end position and the collected digits and group
// sizes. The scan is maximal: it stops before a separator not followed by a
// digit.
std::size_t scan_digit_groups(std::string_view s, std::size_t pos, std::string& digits,
                              std::vector<std::size_t>& groups) {
    std::size_t i = pos;
    while (i < s.size()) {
        std::size_t g = 0;
        while (i < s.size() && is_digit(s[i])) {
            digits.push_back(s[i]);
            ++g;
            ++i;
        }
        if (g == 0) break;
        groups.push_back(g);
        if (i < s.size() && is_sep(s[i]) && i + 1 < s.size() && is_digit(s[i + 1]))
            ++i;
        else
            break;
    }
    return i;
}

std::string redact_credit_cards(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const bool at_digit = is_digit(s[i]) && (i == 0 || !is_digit(s[i - 1]));
        if (!at_digit) {
            out.push_back(s[i]);
            ++i;
            continue;
        }
        std::string digits;
        std::vector<std::size_t> groups;
        const std::size_t end = scan_digit_groups(s, i, digits, groups);
        if (digits.size() >= 13 && digits.size() <= 19 && luhn_valid(digits)) {
            out += "<CC>";
            i = end;
        } else {
            // emit the whole scanned sequence untouched so later digits of
            // it are not rescanned as a shorter candidate
            out.append(s.substr(i, end - i));
            i = end;
        }
    }
    return out;
}

std::string redact_ipv4(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    auto octet_ok = [](std::string_view o) {
        if (o.empty() || o.size() > 3) return false;
        int v = 0;
        for (char c : o) v = v * 10 + (c - '0');
        return v <= 255;
    };
    while (i < s.size()) {
        const bool boundary = i == 0 || (!is_digit(s[i - 1]) && s[i - 1] != '.');
        if (!is_digit(s[i]) || !boundary) {
            out.push_back(s[i]);
            ++i;
            continue;
        }
        std::size_t j = i;
        bool ok = true;
        for (int part = 0; part < 4 && ok; ++part) {
            std::size_t g = j;
            while (j < s.size() && is_digit(s[j])) ++j;
            ok = octet_ok(s.substr(g, j - g));
            if (part < 3) {
                if (j < s.size() && s[j] == '.')
                    ++j;
                else
                    ok = false;
            }
        }
        if (ok && (j >= s.size() || (!is_digit(s[j]) && s[j] != '.'))) {
            out += "<IP>";
            i = j;
        } else {
            // copy the digit run and move on
            while (i < s.size() && is_digit(s[i])) out.push_back(s[i++]);
        }
    }
    return out;
}

std::string redact_phones(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        const bool starts_plus = c == '+' && i + 1 < s.size() && is_digit(s[i + 1]);
        const bool starts_paren = c == '(' && i + 1 < s.size() && is_digit(s[i + 1]);
        const bool starts_digit = is_digit(c) && (i == 0 || (!is_digit(s[i - 1]) &&
                                                             s[i - 1] != '+' && s[i - 1] != '.'));
        if (!starts_plus && !starts_paren && !starts_digit) {
            out.push_back(c);
            ++i;
            continue;
        }

        std::size_t j = i;
        bool has_plus = false, has_paren = false;
        std::string digits;
        std::vector<std::size_t> groups;
        if (s[j] == '+') {
            has_plus = true;
            ++j;
        }
        bool valid = true;
        bool expect_group = true;
        while (expect_group && j < s.size()) {
            if (s[j] == '(') {
                std::size_t k = j + 1, g = 0;
                while (k < s.size() && is_digit(s[k])) {
                    digits.push_back(s[k]);
                    ++g;
                    ++k;
                }
                if (g == 0 || k >= s.size() || s[k] != ')' || groups.size() > 1) {
                    valid = false;
                    break;
                }
                has_paren = true;
                groups.push_back(g);
                j = k + 1;
            } else if (is_digit(s[j])) {
                std::size_t g = 0;
                while (j < s.size() && is_digit(s[j])) {
                    digits.push_back(s[j]);
                    ++g;
                    ++j;
                }
                groups.push_back(g);
            } else {
                valid = false;
                break;
            }
            // a single separator continues the number
            if (j < s.size() && is_sep(s[j]) && j + 1 < s.size() &&
                (is_digit(s[j + 1]) || s[j + 1] == '(')) {
                ++j;
            } else {
                expect_group = false;
            }
        }

        bool match = valid && digits.size() >= 7 && digits.size() <= 15;
        if (match) {
            const bool separated = groups.size() > 1 || has_plus || has_paren;
            if (!separated) match = digits.size() == 10 || digits.size() == 11;
            // 4-2-2 / 2-2-4 groupings without +/parens look like dates
            if (match && !has_plus && !has_paren && groups.size() == 3) {
                if ((groups[0] == 4 && groups[1] == 2 && groups[2] == 2) ||
                    (groups[0] == 2 && groups[1] == 2 && groups[2] == 4))
                    match = false;
            }
            // trailing context must not extend the number
            if (match && j < s.size() && is_digit(s[j])) match = false;
        }

        if (match) {
            out += "<PHONE>";
            i = j;
        } else if (j > i) {
            // swallow the whole failed candidate so its digit groups are
            // not re-matched as a shorter number
            out.append(s.substr(i, j - i));
            i = j;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

} // namespace

std::string redact(std::string_view text) {
    // Credit cards first (Luhn-gated, longest digit grammar), then IPv4
    // (dotted, disjoint from the others), then phones over what remains.
    // Placeholders contain no digits, so the transformation is idempotent.
    return redact_phones(redact_ipv4(redact_credit_cards(text)));
}

} // namespace rsim
