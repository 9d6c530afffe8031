#include "weave/util/yaml_json.hpp"

#include <charconv>
#include <regex>
#include <string>

namespace weave {
namespace {

const std::regex& int_pattern() {
    static const std::regex re(R"([-+]?[0-9]+)");
    return re;
}

const std::regex& float_pattern() {
    static const std::regex re(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
    return re;
}

nlohmann::json typed_scalar(const std::string& s) {
    if (s == "null" || s == "Null" || s == "NULL" || s == "~" || s.empty()) return nullptr;
    if (s == "true" || s == "True" || s == "TRUE") return true;
    if (s == "false" || s == "False" || s == "FALSE") return false;
    if (std::regex_match(s, int_pattern())) {
        long long v = 0;
        auto first = s.data() + (s[0] == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size()) return v;
    }
    if (std::regex_match(s, float_pattern())) {
        return std::stod(s);
    }
    return s;
}

}  // namespace

bool is_quoted_scalar(const YAML::Node& node) {
    // yaml-cpp tags quoted and block scalars with the non-specific tag "!".
    return node.IsScalar() && node.Tag() == "!";
}

nlohmann::json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            if (is_quoted_scalar(node)) return node.Scalar();
            return typed_scalar(node.Scalar());
        case YAML::NodeType::Sequence: {
            auto out = nlohmann::json::array();
            for (const auto& item : node) out.push_back(yaml_to_json(item));
            return out;
        }
        case YAML::NodeType::Map: {
            auto out = nlohmann::json::object();
            for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return out;
        }
    }
    return nullptr;
}

}  // namespace weave
