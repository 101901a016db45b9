#include <doctest.h>

#include <filesystem>
#include <random>

#include "logguard/log_entry.hpp"
#include "logguard/loggen.hpp"

using namespace logguard;

TEST_CASE("parse_line maps combined log fields") {
    auto e = parse_line(R"(203.0.113.7 - - [01/Jan/2024:00:00:01 +0000] "GET /index.html HTTP/1.1" 200 1024 "-" "Mozilla/5.0")");
    CHECK(e.ip == "203.0.113.7");
    CHECK(e.timestamp == 1704067201);
    CHECK(e.method == "GET");
    CHECK(e.uri == "/index.html");
    CHECK(e.status == 200);
    CHECK(e.bytes == 1024);
    CHECK(e.referrer.empty());
    CHECK(e.user_agent == "Mozilla/5.0");
    CHECK_FALSE(e.label.has_value());
}

TEST_CASE("injection URI parses and labels anomalous") {
    auto e = parse_line(R"(10.0.0.1 - - [01/Jan/2024:00:00:01 +0000] "GET /admin?' OR 1=1 -- HTTP/1.1" 200 10 "-" "-")");
    CHECK(e.uri == "/admin?' OR 1=1 --");
    CHECK(label_entry(e));
}

TEST_CASE("malformed lines raise ParseError with an offset") {
    CHECK_THROWS_AS(parse_line("garbage"), ParseError);
    CHECK_THROWS_AS(parse_line(""), ParseError);
    CHECK_THROWS_AS(parse_line(R"(10.0.0.1 - - [01/Jan/2024:00:00:01 +0000] "GET / HTTP/1.1" 20 1 "-" "-")"), ParseError);
    CHECK_THROWS_AS(parse_line(R"(999.0.0.1 - - [01/Jan/2024:00:00:01 +0000] "GET / HTTP/1.1" 200 1 "-" "-")"), ParseError);
    try {
        parse_line(R"(10.0.0.1 - - [01/Foo/2024:00:00:01 +0000] "GET / HTTP/1.1" 200 1 "-" "-")");
        FAIL("expected a parse error");
    } catch (const ParseError& err) {
        CHECK(err.offset() > 0);
        CHECK_FALSE(err.reason().empty());
    }
}

TEST_CASE("non-UTC offsets normalize to UTC") {
    auto e = parse_line(R"(10.0.0.1 - - [01/Jan/2024:02:00:00 +0200] "GET / HTTP/1.1" 200 1 "-" "-")");
    CHECK(e.timestamp == 1704067200);
}

TEST_CASE("format_line escapes quotes and round-trips") {
    LogEntry e;
    e.ip = "192.168.1.2";
    e.timestamp = 1704067200 + 3599;
    e.uri = "/search?q=\"x\"";
    e.status = 403;
    e.bytes = 0;
    e.referrer = "http://example.com/\"quoted\"";
    e.user_agent = "Agent \"with\" quotes \\ and backslash";
    auto line = format_line(e);
    CHECK(parse_line(line).same_record(e));
    CHECK(format_line(parse_line(line)) == line);
}

TEST_CASE("minimal entry renders dashes") {
    LogEntry e;
    e.ip = "10.0.0.1";
    e.timestamp = 1704067200;
    e.uri = "/";
    e.bytes = 5;
    CHECK(format_line(e) == R"(10.0.0.1 - - [01/Jan/2024:00:00:00 +0000] "GET / HTTP/1.1" 200 5 "-" "-")");
}

TEST_CASE("fuzzed entries round-trip") {
    std::mt19937_64 rng(5);
    const std::string alphabet = "abcXYZ019 \"\\'<>/?=&-_.;:()";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 30);
    for (int i = 0; i < 2000; ++i) {
        LogEntry e;
        e.ip = std::to_string(rng() % 256) + "." + std::to_string(rng() % 256) + "." + std::to_string(rng() % 256) +
               "." + std::to_string(rng() % 256);
        e.timestamp = 946684800 + static_cast<std::int64_t>(rng() % 2'000'000'000ULL);
        e.uri = "/";
        for (std::size_t k = len(rng); k > 0; --k) {
            char c = alphabet[pick(rng)];
            if (c != ' ' && c != '"' && c != '\\') e.uri += c;
        }
        e.status = 100 + static_cast<int>(rng() % 500);
        e.bytes = rng() % 1'000'000;
        for (std::size_t k = len(rng); k > 0; --k) e.referrer += alphabet[pick(rng)];
        for (std::size_t k = len(rng); k > 0; --k) e.user_agent += alphabet[pick(rng)];
        if (e.referrer == "-") e.referrer.clear();
        if (e.user_agent == "-") e.user_agent.clear();
        auto back = parse_line(format_line(e));
        REQUIRE(back.same_record(e));
    }
}

TEST_CASE("suspicious user agents") {
    CHECK(is_suspicious_ua("curl/7.68.0"));
    CHECK_FALSE(is_suspicious_ua("Mozilla/5.0 (Windows NT 10.0)"));
    CHECK(is_suspicious_ua("Googlebot/2.1"));
    CHECK(is_suspicious_ua("CURL"));
    CHECK_FALSE(is_suspicious_ua(""));
}

TEST_CASE("label rule") {
    LogEntry e;
    e.uri = "/admin?' OR 1=1 --";
    CHECK(label_entry(e));
    e.uri = "/index.html";
    CHECK_FALSE(label_entry(e));
    e.status = 401;
    CHECK(label_entry(e));
    e.status = 403;
    CHECK(label_entry(e));
    e.status = 500;
    CHECK_FALSE(label_entry(e));
    e.user_agent = "sqlmap-bot";  // UA alone never labels
    CHECK_FALSE(label_entry(e));
    e.uri = "/page?<script>alert(1)</script>";
    CHECK(label_entry(e));
    e.uri = "/static/../../etc/passwd";
    CHECK(label_entry(e));
    e.uri = "/a--b";  // "--" outside the query string
    CHECK_FALSE(label_entry(e));
}

TEST_CASE("label_entry depends only on uri and status") {
    LogEntry a, b;
    a.uri = b.uri = "/x?id=1 --";
    a.status = b.status = 200;
    b.ip = "1.2.3.4";
    b.bytes = 99999;
    b.user_agent = "curl";
    CHECK(label_entry(a) == label_entry(b));
}

TEST_CASE("log and labels files round-trip") {
    GenConfig g;
    g.total_entries = 500;
    g.chunk_size = 100;
    g.seed = 3;
    auto entries = generate_dataset(g, EntryProfile::defaults());
    auto dir = std::filesystem::temp_directory_path() / "logguard_test_io";
    std::filesystem::create_directories(dir);
    auto log = dir / "a.log";
    write_log(log, entries);
    write_labels(labels_path_for(log), entries);
    auto back = read_log(log);
    read_labels(labels_path_for(log), back);
    REQUIRE(back.size() == entries.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == entries[i]);
    std::filesystem::remove_all(dir);
}
