#include "logguard/log_entry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace logguard {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool icontains(std::string_view haystack, std::string_view needle) {
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return ascii_lower(a) == ascii_lower(b); });
    return it != haystack.end();
}

void append_escaped(std::string& out, std::string_view field) {
    if (field.empty()) {
        out += '-';
        return;
    }
    for (char c : field) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
}

bool valid_dotted_quad(std::string_view ip) {
    int parts = 0;
    std::size_t pos = 0;
    while (pos <= ip.size()) {
        std::size_t dot = ip.find('.', pos);
        if (dot == std::string_view::npos) dot = ip.size();
        std::string_view part = ip.substr(pos, dot - pos);
        if (part.empty() || part.size() > 3) return false;
        int value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || value > 255) return false;
        ++parts;
        pos = dot + 1;
        if (dot == ip.size()) break;
    }
    return parts == 4;
}

// Cursor over one line; every failure reports the byte offset it stopped at.
class LineReader {
public:
    explicit LineReader(std::string_view line) : line_(line) {}

    [[noreturn]] void fail(std::string reason) const { throw ParseError(pos_, std::move(reason)); }

    bool at_end() const { return pos_ >= line_.size(); }

    void expect(char c, const char* what) {
        if (at_end() || line_[pos_] != c) fail(std::string("expected ") + what);
        ++pos_;
    }

    std::string_view token(const char* what) {
        std::size_t start = pos_;
        while (!at_end() && line_[pos_] != ' ') ++pos_;
        if (pos_ == start) fail(std::string("empty ") + what);
        return line_.substr(start, pos_ - start);
    }

    std::string_view until(char delim, const char* what) {
        std::size_t start = pos_;
        std::size_t end = line_.find(delim, pos_);
        if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
        pos_ = end;
        return line_.substr(start, end - start);
    }

    std::string quoted(const char* what) {
        expect('"', what);
        std::string out;
        while (true) {
            if (at_end()) fail(std::string("unterminated ") + what);
            char c = line_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail(std::string("dangling escape in ") + what);
                c = line_[pos_++];
            }
            out += c;
        }
        return out;
    }

    std::size_t position() const { return pos_; }

private:
    std::string_view line_;
    std::size_t pos_ = 0;
};

template <typename T>
T parse_number(LineReader& reader, std::string_view text, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        reader.fail(std::string("invalid ") + what);
    }
    return value;
}

std::int64_t parse_timestamp(LineReader& reader, std::string_view text) {
    // dd/Mon/yyyy:HH:MM:SS +zzzz
    if (text.size() != 26 || text[2] != '/' || text[6] != '/' || text[11] != ':' ||
        text[14] != ':' || text[17] != ':' || text[20] != ' ') {
        reader.fail("malformed timestamp");
    }
    auto num = [&](std::size_t off, std::size_t len) {
        return parse_number<int>(reader, text.substr(off, len), "timestamp field");
    };
    int day = num(0, 2);
    auto month_it = std::find(kMonths.begin(), kMonths.end(), text.substr(3, 3));
    if (month_it == kMonths.end()) reader.fail("unknown month");
    unsigned month = static_cast<unsigned>(month_it - kMonths.begin()) + 1;
    int year = num(7, 4);
    int hour = num(12, 2);
    int minute = num(15, 2);
    int second = num(18, 2);
    char sign = text[21];
    if (sign != '+' && sign != '-') reader.fail("malformed UTC offset");
    int off_h = num(22, 2);
    int off_m = num(24, 2);
    if (hour > 23 || minute > 59 || second > 60 || off_m > 59) reader.fail("time out of range");

    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) reader.fail("invalid calendar date");
    std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    std::int64_t offset = (off_h * 3600 + off_m * 60) * (sign == '+' ? 1 : -1);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::string reason)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + reason),
      offset_(offset),
      reason_(std::move(reason)) {}

bool LogEntry::same_record(const LogEntry& other) const {
    return ip == other.ip && timestamp == other.timestamp && method == other.method &&
           uri == other.uri && status == other.status && bytes == other.bytes &&
           referrer == other.referrer && user_agent == other.user_agent;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    using namespace std::chrono;
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t secs = epoch_seconds % 86400;
    if (secs < 0) {
        secs += 86400;
        --days;
    }
    year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02u/%s/%04d:%02d:%02d:%02d +0000",
                  static_cast<unsigned>(ymd.day()),
                  kMonths[static_cast<unsigned>(ymd.month()) - 1].data(),
                  static_cast<int>(ymd.year()), static_cast<int>(secs / 3600),
                  static_cast<int>((secs / 60) % 60), static_cast<int>(secs % 60));
    return buf;
}

LogEntry parse_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);

    LineReader in(line);
    LogEntry entry;

    std::string_view ip = in.token("client address");
    if (!valid_dotted_quad(ip)) in.fail("client address is not a dotted quad");
    entry.ip = std::string(ip);
    in.expect(' ', "space after address");
    in.token("ident");
    in.expect(' ', "space after ident");
    in.token("authuser");
    in.expect(' ', "space after authuser");

    in.expect('[', "'[' opening timestamp");
    std::size_t ts_start = in.position();
    std::string_view ts = in.until(']', "timestamp");
    {
        LineReader ts_reader(ts);
        try {
            entry.timestamp = parse_timestamp(ts_reader, ts);
        } catch (const ParseError& e) {
            throw ParseError(ts_start + e.offset(), e.reason());
        }
    }
    in.expect(']', "']' closing timestamp");
    in.expect(' ', "space after timestamp");

    std::size_t request_start = in.position();
    std::string request = in.quoted("request");
    std::size_t first_space = request.find(' ');
    std::size_t last_space = request.rfind(' ');
    if (first_space == std::string::npos || first_space == last_space) {
        throw ParseError(request_start, "request is not 'METHOD URI PROTOCOL'");
    }
    entry.method = request.substr(0, first_space);
    entry.uri = request.substr(first_space + 1, last_space - first_space - 1);
    std::string_view protocol = std::string_view(request).substr(last_space + 1);
    if (entry.method.empty() || entry.uri.empty() || !protocol.starts_with("HTTP/")) {
        throw ParseError(request_start, "request is not 'METHOD URI PROTOCOL'");
    }
    in.expect(' ', "space after request");

    std::string_view status = in.token("status");
    if (status.size() != 3) in.fail("status must be three digits");
    entry.status = parse_number<int>(in, status, "status");
    in.expect(' ', "space after status");

    std::string_view bytes = in.token("bytes");
    entry.bytes = bytes == "-" ? 0 : parse_number<std::uint64_t>(in, bytes, "bytes");
    in.expect(' ', "space after bytes");

    std::string referrer = in.quoted("referrer");
    entry.referrer = referrer == "-" ? std::string{} : std::move(referrer);
    in.expect(' ', "space after referrer");
    std::string agent = in.quoted("user agent");
    entry.user_agent = agent == "-" ? std::string{} : std::move(agent);

    while (!in.at_end()) {
        in.expect(' ', "end of line");
    }
    return entry;
}

std::string format_line(const LogEntry& entry) {
    std::string out;
    out.reserve(160 + entry.uri.size() + entry.user_agent.size());
    out += entry.ip;
    out += " - - [";
    out += format_timestamp(entry.timestamp);
    out += "] \"";
    append_escaped(out, entry.method + " " + entry.uri + " HTTP/1.1");
    out += "\" ";
    out += std::to_string(entry.status);
    out += ' ';
    out += std::to_string(entry.bytes);
    out += " \"";
    append_escaped(out, entry.referrer);
    out += "\" \"";
    append_escaped(out, entry.user_agent);
    out += '"';
    return out;
}

bool is_suspicious_ua(std::string_view user_agent) {
    return icontains(user_agent, "curl") || icontains(user_agent, "bot");
}

bool matches_injection_pattern(std::string_view uri) {
    if (icontains(uri, "' or 1=1") || icontains(uri, "<script") || uri.find("../") != uri.npos) {
        return true;
    }
    std::size_t query = uri.find('?');
    return query != uri.npos && uri.find("--", query) != uri.npos;
}

bool label_entry(const LogEntry& entry) {
    return matches_injection_pattern(entry.uri) || entry.status == 401 || entry.status == 403;
}

bool label_entry(const LogEntry& entry, std::span<const std::string> attack_uris) {
    return label_entry(entry) ||
           std::find(attack_uris.begin(), attack_uris.end(), entry.uri) != attack_uris.end();
}

std::filesystem::path labels_path_for(const std::filesystem::path& log_path) {
    auto p = log_path;
    p += ".labels.csv";
    return p;
}

void write_log(const std::filesystem::path& path, std::span<const LogEntry> entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& e : entries) {
        out << format_line(e) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_labels(const std::filesystem::path& path, std::span<const LogEntry> entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::size_t line = 1;
    for (const auto& e : entries) {
        if (!e.label) throw std::invalid_argument("entry " + std::to_string(line) + " has no label");
        out << line++ << ',' << (*e.label ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<LogEntry> read_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open log " + path.string());
    std::vector<LogEntry> entries;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            entries.push_back(parse_line(line));
        } catch (const ParseError& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return entries;
}

void read_labels(const std::filesystem::path& path, std::vector<LogEntry>& entries) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open labels " + path.string());
    std::string line;
    std::size_t expected = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line.starts_with("line_number")) continue;
        std::size_t comma = line.find(',');
        std::size_t number = 0;
        int label = -1;
        if (comma != std::string::npos) {
            std::from_chars(line.data(), line.data() + comma, number);
            std::from_chars(line.data() + comma + 1, line.data() + line.size(), label);
        }
        if (number != expected || (label != 0 && label != 1)) {
            throw std::runtime_error(path.string() + ": bad label row '" + line + "'");
        }
        if (number > entries.size()) {
            throw std::runtime_error(path.string() + ": more labels than log lines");
        }
        entries[number - 1].label = label == 1;
        ++expected;
    }
    if (expected - 1 != entries.size()) {
        throw std::runtime_error(path.string() + ": " + std::to_string(expected - 1) +
                                 " labels for " + std::to_string(entries.size()) + " log lines");
    }
}

}  // namespace logguard
