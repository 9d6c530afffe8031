#include "weave/workflow/yaml_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>

#include "weave/util/hash.hpp"
#include "weave/util/yaml_json.hpp"

namespace weave::workflow {
namespace {

using Kind = WorkflowParseError::Kind;

[[noreturn]] void schema_error(const std::string& path, const std::string& message, const YAML::Node& at) {
    auto mark = at.Mark();
    throw WorkflowParseError(Kind::schema, path, message, mark.line + 1, mark.column + 1);
}

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& kv : node) {
        auto key = kv.first.as<std::string>();
        bool known = false;
        for (auto a : allowed) known = known || a == key;
        if (!known) {
            schema_error(path + "/" + key, "unknown key `" + key + "`", kv.first);
        }
    }
}

YAML::Node require_map(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap()) schema_error(path, "expected a mapping", node);
    return node;
}

YAML::Node require_key(const YAML::Node& map, std::string_view key, const std::string& path) {
    YAML::Node value = map[std::string(key)];
    if (!value) {
        auto mark = map.Mark();
        throw WorkflowParseError(Kind::schema, path + "/" + std::string(key),
                                 "missing required field `" + std::string(key) + "`", mark.line + 1, mark.column + 1);
    }
    return value;
}

std::string as_text(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) schema_error(path, "expected a string", node);
    if (!is_quoted_scalar(node) && node.IsNull()) schema_error(path, "expected a string, got null", node);
    return node.Scalar();
}

std::string optional_text(const YAML::Node& map, std::string_view key, const std::string& path) {
    YAML::Node v = map[std::string(key)];
    if (!v) return {};
    return as_text(v, path + "/" + std::string(key));
}

double as_number(const YAML::Node& node, const std::string& path) {
    auto j = yaml_to_json(node);
    if (!j.is_number()) schema_error(path, "expected a number", node);
    return j.get<double>();
}

long long as_integer(const YAML::Node& node, const std::string& path) {
    auto j = yaml_to_json(node);
    if (!j.is_number_integer()) schema_error(path, "expected an integer", node);
    return j.get<long long>();
}

std::vector<std::string> as_id_list(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) schema_error(path, "expected a list", node);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(as_text(node[i], path + "/" + std::to_string(i)));
    }
    return out;
}

YAML::Node optional_list(const YAML::Node& map, std::string_view key, const std::string& path) {
    YAML::Node v = map[std::string(key)];
    if (!v) return YAML::Node(YAML::NodeType::Sequence);
    if (!v.IsSequence()) schema_error(path + "/" + std::string(key), "expected a list", v);
    return v;
}

FieldSpec parse_field(const YAML::Node& node, const std::string& path) {
    require_map(node, path);
    check_keys(node, path, {"name", "description", "kind"});
    FieldSpec f;
    f.name = as_text(require_key(node, "name", path), path + "/name");
    f.description = optional_text(node, "description", path);
    auto kind_node = require_key(node, "kind", path);
    auto kind = field_kind_from_string(as_text(kind_node, path + "/kind"));
    if (!kind) schema_error(path + "/kind", "kind must be one of text, number, boolean, list", kind_node);
    f.kind = *kind;
    return f;
}

std::vector<FieldSpec> parse_fields(const YAML::Node& list, const std::string& path) {
    if (!list.IsSequence()) schema_error(path, "expected a list", list);
    std::vector<FieldSpec> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(parse_field(list[i], path + "/" + std::to_string(i)));
    }
    return out;
}

llm::LlmProfile parse_profile_node(const YAML::Node& node, const std::string& path) {
    require_map(node, path);
    check_keys(node, path, {"provider", "model_id", "temperature", "top_p", "base_url", "max_retries", "timeout_s"});
    llm::LlmProfile p;
    auto provider_node = require_key(node, "provider", path);
    auto provider = llm::provider_from_string(as_text(provider_node, path + "/provider"));
    if (!provider) schema_error(path + "/provider", "provider must be openai_compatible or scripted", provider_node);
    p.provider = *provider;
    p.model_id = optional_text(node, "model_id", path);
    if (auto v = node["temperature"]) p.temperature = as_number(v, path + "/temperature");
    if (auto v = node["top_p"]) p.top_p = as_number(v, path + "/top_p");
    if (auto v = node["base_url"]; v && !(v.IsNull() && !is_quoted_scalar(v))) {
        p.base_url = as_text(v, path + "/base_url");
    }
    if (auto v = node["max_retries"]) p.max_retries = static_cast<int>(as_integer(v, path + "/max_retries"));
    if (auto v = node["timeout_s"]) p.timeout = std::chrono::seconds(as_integer(v, path + "/timeout_s"));
    return p;
}

YAML::Node load_document(std::string_view yaml) {
    try {
        return YAML::Load(std::string(yaml));
    } catch (const YAML::ParserException& e) {
        throw WorkflowParseError(Kind::syntax, "", e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

// ---- canonical emitter ----

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (u < 0x20 || u == 0x7f) {
                    static constexpr char kHex[] = "0123456789ABCDEF";
                    out += "\\x";
                    out.push_back(kHex[u >> 4]);
                    out.push_back(kHex[u & 0x0f]);
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
    return out;
}

std::string number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string id_list(const std::vector<std::string>& ids) {
    if (ids.empty()) return "[]";
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += quote(ids[i]);
    }
    return out + "]";
}

void emit_fields(std::ostringstream& out, const std::string& indent, std::string_view key,
                 const std::vector<FieldSpec>& fields) {
    out << indent << key << ":";
    if (fields.empty()) {
        out << " []\n";
        return;
    }
    out << "\n";
    for (const auto& f : fields) {
        out << indent << "  - name: " << quote(f.name) << "\n";
        out << indent << "    description: " << quote(f.description) << "\n";
        out << indent << "    kind: " << to_string(f.kind) << "\n";
    }
}

void emit_profile(std::ostringstream& out, const std::string& indent, const llm::LlmProfile& p) {
    out << indent << "provider: " << llm::to_string(p.provider) << "\n";
    out << indent << "model_id: " << quote(p.model_id) << "\n";
    out << indent << "temperature: " << number(p.temperature) << "\n";
    out << indent << "top_p: " << number(p.top_p) << "\n";
    out << indent << "base_url: " << (p.base_url ? quote(*p.base_url) : std::string("null")) << "\n";
    out << indent << "max_retries: " << p.max_retries << "\n";
    out << indent << "timeout_s: " << p.timeout.count() << "\n";
}

}  // namespace

WorkflowParseError::WorkflowParseError(Kind kind, std::string path, std::string message, int line, int column)
    : std::runtime_error([&] {
          std::string where;
          if (line > 0) where = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
          if (!path.empty()) where += path + ": ";
          return where + message;
      }()),
      kind_(kind),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

std::string_view WorkflowParseError::code() const noexcept {
    switch (kind_) {
        case Kind::syntax: return "SYNTAX";
        case Kind::schema: return "SCHEMA";
        case Kind::duplicate_id: return "DUPLICATE_ID";
    }
    return "SCHEMA";
}

WorkflowSpec parse_workflow(std::string_view yaml) {
    YAML::Node root = load_document(yaml);
    if (!root.IsMap()) {
        throw WorkflowParseError(Kind::schema, "", "workflow document must be a mapping");
    }
    check_keys(root, "", {"name", "description", "llm_profile", "root_supervisor", "supervisors", "agents", "tools"});

    WorkflowSpec spec;
    spec.name = as_text(require_key(root, "name", ""), "/name");
    spec.description = optional_text(root, "description", "");
    spec.llm_profile = parse_profile_node(require_key(root, "llm_profile", ""), "/llm_profile");
    spec.root_supervisor = as_text(require_key(root, "root_supervisor", ""), "/root_supervisor");

    auto sups = require_key(root, "supervisors", "");
    if (!sups.IsSequence()) schema_error("/supervisors", "expected a list", sups);
    for (std::size_t i = 0; i < sups.size(); ++i) {
        std::string path = "/supervisors/" + std::to_string(i);
        const auto node = require_map(sups[i], path);
        check_keys(node, path, {"id", "system_message", "children"});
        SupervisorSpec s;
        s.id = as_text(require_key(node, "id", path), path + "/id");
        s.system_message = as_text(require_key(node, "system_message", path), path + "/system_message");
        s.children = as_id_list(require_key(node, "children", path), path + "/children");
        spec.supervisors.push_back(std::move(s));
    }

    auto agents = require_key(root, "agents", "");
    if (!agents.IsSequence()) schema_error("/agents", "expected a list", agents);
    for (std::size_t i = 0; i < agents.size(); ++i) {
        std::string path = "/agents/" + std::to_string(i);
        const auto node = require_map(agents[i], path);
        check_keys(node, path, {"id", "role", "system_message", "inputs", "outputs", "tool_ids"});
        AgentSpec a;
        a.id = as_text(require_key(node, "id", path), path + "/id");
        a.role = optional_text(node, "role", path);
        a.system_message = as_text(require_key(node, "system_message", path), path + "/system_message");
        a.inputs = parse_fields(optional_list(node, "inputs", path), path + "/inputs");
        a.outputs = parse_fields(require_key(node, "outputs", path), path + "/outputs");
        a.tool_ids = as_id_list(optional_list(node, "tool_ids", path), path + "/tool_ids");
        spec.agents.push_back(std::move(a));
    }

    auto tools = optional_list(root, "tools", "");
    for (std::size_t i = 0; i < tools.size(); ++i) {
        std::string path = "/tools/" + std::to_string(i);
        const auto node = require_map(tools[i], path);
        check_keys(node, path, {"id", "description", "parameters", "handler"});
        ToolSpec t;
        t.id = as_text(require_key(node, "id", path), path + "/id");
        t.description = optional_text(node, "description", path);
        t.parameters = parse_fields(optional_list(node, "parameters", path), path + "/parameters");
        t.handler = as_text(require_key(node, "handler", path), path + "/handler");
        spec.tools.push_back(std::move(t));
    }

    std::set<std::string> seen;
    auto claim = [&](const std::string& id, const std::string& path, const YAML::Node& at) {
        if (!seen.insert(id).second) {
            auto mark = at.Mark();
            throw WorkflowParseError(Kind::duplicate_id, path, "duplicate id `" + id + "`", mark.line + 1,
                                     mark.column + 1);
        }
    };
    for (std::size_t i = 0; i < spec.supervisors.size(); ++i) {
        claim(spec.supervisors[i].id, "/supervisors/" + std::to_string(i), sups[i]);
    }
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
        claim(spec.agents[i].id, "/agents/" + std::to_string(i), agents[i]);
    }
    for (std::size_t i = 0; i < spec.tools.size(); ++i) {
        claim(spec.tools[i].id, "/tools/" + std::to_string(i), tools[i]);
    }
    return spec;
}

std::string serialize_workflow(const WorkflowSpec& spec) {
    std::ostringstream out;
    out << "name: " << quote(spec.name) << "\n";
    out << "description: " << quote(spec.description) << "\n";
    out << "llm_profile:\n";
    emit_profile(out, "  ", spec.llm_profile);
    out << "root_supervisor: " << quote(spec.root_supervisor) << "\n";

    out << "supervisors:";
    if (spec.supervisors.empty()) out << " []";
    out << "\n";
    for (const auto& s : spec.supervisors) {
        out << "  - id: " << quote(s.id) << "\n";
        out << "    system_message: " << quote(s.system_message) << "\n";
        out << "    children: " << id_list(s.children) << "\n";
    }

    out << "agents:";
    if (spec.agents.empty()) out << " []";
    out << "\n";
    for (const auto& a : spec.agents) {
        out << "  - id: " << quote(a.id) << "\n";
        out << "    role: " << quote(a.role) << "\n";
        out << "    system_message: " << quote(a.system_message) << "\n";
        emit_fields(out, "    ", "inputs", a.inputs);
        emit_fields(out, "    ", "outputs", a.outputs);
        out << "    tool_ids: " << id_list(a.tool_ids) << "\n";
    }

    out << "tools:";
    if (spec.tools.empty()) out << " []";
    out << "\n";
    for (const auto& t : spec.tools) {
        out << "  - id: " << quote(t.id) << "\n";
        out << "    description: " << quote(t.description) << "\n";
        emit_fields(out, "    ", "parameters", t.parameters);
        out << "    handler: " << quote(t.handler) << "\n";
    }
    return out.str();
}

std::string spec_hash(const WorkflowSpec& spec) {
    return "sha256:" + sha256_hex(serialize_workflow(spec));
}

llm::LlmProfile parse_profile(std::string_view yaml) {
    return parse_profile_node(load_document(yaml), "");
}

std::string serialize_profile(const llm::LlmProfile& profile) {
    std::ostringstream out;
    emit_profile(out, "", profile);
    return out.str();
}

}  // namespace weave::workflow
