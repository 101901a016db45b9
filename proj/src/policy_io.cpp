#include "logguard/policy_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "logguard/metrics.hpp"

namespace logguard {

namespace {

constexpr std::string_view kMagic = "logguard-policy 1";

std::string expect_field(std::istream& in, std::string_view name) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("policy file truncated before '" + std::string(name) + "'");
    const std::string prefix = std::string(name) + " ";
    if (line.rfind(prefix, 0) != 0) {
        throw std::runtime_error("policy file: expected '" + std::string(name) + "', got '" + line + "'");
    }
    return line.substr(prefix.size());
}

}  // namespace

void write_policy(std::ostream& out, const PolicyRecord& record) {
    out << kMagic << '\n';
    out << "kind " << record.kind << '\n';
    out << "tag " << record.tag << '\n';
    out << "config " << record.config.dump() << '\n';
    out << "params " << record.params.size() << '\n';
    for (double p : record.params) out << format_double(p) << '\n';
}

PolicyRecord read_policy(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw std::runtime_error("not a policy file");
    PolicyRecord record;
    record.kind = expect_field(in, "kind");
    record.tag = expect_field(in, "tag");
    try {
        record.config = nlohmann::json::parse(expect_field(in, "config"));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("policy file: bad config JSON: ") + e.what());
    }
    const auto count_text = expect_field(in, "params");
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || ptr != count_text.data() + count_text.size()) {
        throw std::runtime_error("policy file: bad parameter count");
    }
    record.params.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("policy file: missing parameters");
        double v = 0.0;
        auto [p, e] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (e != std::errc{} || p != line.data() + line.size()) {
            throw std::runtime_error("policy file: bad parameter '" + line + "'");
        }
        record.params.push_back(v);
    }
    return record;
}

PolicyRecord read_policy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_policy(in);
}

}  // namespace logguard
