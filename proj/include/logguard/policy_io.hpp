#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace logguard {

/// Serialized learner state. Text layout, one item per line:
///   logguard-policy 1
///   kind <agent kind>
///   tag <variant tag>
///   config <single-line JSON>
///   params <count>
///   <one parameter per line, shortest round-trip form>
struct PolicyRecord {
    std::string kind;
    std::string tag;
    nlohmann::json config;
    std::vector<double> params;
};

void write_policy(std::ostream& out, const PolicyRecord& record);
PolicyRecord read_policy(std::istream& in);
PolicyRecord read_policy(const std::filesystem::path& path);

}  // namespace logguard
