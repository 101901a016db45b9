#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logguard {

/// One access-log record. The label is ground truth and never appears in the
/// log line itself; it travels in the labels sidecar.
struct LogEntry {
    std::string ip;
    std::int64_t timestamp = 0;  // epoch seconds, UTC
    std::string method = "GET";
    std::string uri;
    int status = 200;
    std::uint64_t bytes = 0;
    std::string referrer;    // empty renders as "-"
    std::string user_agent;  // empty renders as "-"
    std::optional<bool> label;

    // Field-wise equality ignoring the label.
    bool same_record(const LogEntry& other) const;

    friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string reason);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t offset_;
    std::string reason_;
};

// Combined Log Format:
//   IP - - [dd/Mon/yyyy:HH:MM:SS +0000] "METHOD URI HTTP/1.1" STATUS BYTES "REFERRER" "UA"
// Quoted fields escape '"' and '\' with a backslash. Any numeric UTC offset is
// accepted on input and normalized to +0000.
LogEntry parse_line(std::string_view line);
std::string format_line(const LogEntry& entry);

/// Case-insensitive match of `curl|bot` anywhere in the user agent.
bool is_suspicious_ua(std::string_view user_agent);

/// SQL injection / XSS / traversal signatures: "' OR 1=1", "<script", "../",
/// and "--" inside the query string. Case-insensitive.
bool matches_injection_pattern(std::string_view uri);

/// Ground-truth rule: injection pattern in the URI, or status 401/403.
bool label_entry(const LogEntry& entry);

/// Same rule, additionally flagging exact matches against a profile's attack URIs.
bool label_entry(const LogEntry& entry, std::span<const std::string> attack_uris);

std::string format_timestamp(std::int64_t epoch_seconds);

// Dataset files. The sidecar holds `line_number,label` rows, 1-based,
// one per log line.
std::filesystem::path labels_path_for(const std::filesystem::path& log_path);
void write_log(const std::filesystem::path& path, std::span<const LogEntry> entries);
void write_labels(const std::filesystem::path& path, std::span<const LogEntry> entries);
std::vector<LogEntry> read_log(const std::filesystem::path& path);
void read_labels(const std::filesystem::path& path, std::vector<LogEntry>& entries);

}  // namespace logguard
