#include "weave/orchestrator/directive.hpp"

#include <yaml-cpp/yaml.h>

#include "weave/util/text.hpp"
#include "weave/util/yaml_json.hpp"

namespace weave::orchestrator {
namespace {

using Reason = DirectiveError::Reason;

std::string scalar_text(const YAML::Node& node, const char* key) {
    if (!node.IsScalar()) {
        throw DirectiveError(Reason::malformed, std::string("directive field `") + key + "` must be text");
    }
    return node.Scalar();
}

// YAML double-quoted form, which parses back to exactly `s`.
std::string yaml_quoted(std::string_view s) {
    YAML::Emitter out;
    out << YAML::DoubleQuoted << std::string(s);
    return out.c_str();
}

}  // namespace

std::string_view to_string(DirectiveKind kind) {
    switch (kind) {
        case DirectiveKind::delegate: return "delegate";
        case DirectiveKind::tool_call: return "tool_call";
        case DirectiveKind::final: return "final";
    }
    return "final";
}

Directive parse_directive(std::string_view text) {
    std::vector<text::FencedBlock> blocks;
    for (auto& b : text::fenced_blocks(text)) {
        if (b.info == "directive") blocks.push_back(std::move(b));
    }
    if (blocks.empty()) {
        throw DirectiveError(Reason::no_block, "no ```directive block found");
    }
    if (blocks.size() > 1) {
        throw DirectiveError(Reason::multiple_blocks,
                             "expected one ```directive block, found " + std::to_string(blocks.size()));
    }

    YAML::Node node;
    try {
        node = YAML::Load(blocks.front().body);
    } catch (const YAML::Exception& e) {
        throw DirectiveError(Reason::malformed, "directive block is not valid YAML: " + e.msg);
    }
    if (!node.IsMap()) {
        throw DirectiveError(Reason::malformed, "directive block must be a mapping");
    }

    Directive d;
    bool has_kind = false;
    for (const auto& kv : node) {
        auto key = kv.first.as<std::string>();
        const auto& value = kv.second;
        if (value.IsNull()) continue;
        if (key == "kind") {
            auto kind = scalar_text(value, "kind");
            if (kind == "delegate") {
                d.kind = DirectiveKind::delegate;
            } else if (kind == "tool_call") {
                d.kind = DirectiveKind::tool_call;
            } else if (kind == "final") {
                d.kind = DirectiveKind::final;
            } else {
                throw DirectiveError(Reason::invalid, "unknown directive kind `" + kind + "`");
            }
            has_kind = true;
        } else if (key == "target") {
            d.target = std::string(text::trim(scalar_text(value, "target")));
        } else if (key == "task") {
            d.task = scalar_text(value, "task");
        } else if (key == "answer") {
            d.answer = std::string(text::trim(scalar_text(value, "answer")));
        } else if (key == "arguments") {
            if (!value.IsMap()) {
                throw DirectiveError(Reason::malformed, "directive `arguments` must be a mapping");
            }
            d.arguments = yaml_to_json(value);
        } else {
            throw DirectiveError(Reason::malformed, "unknown directive key `" + key + "`");
        }
    }

    if (!has_kind) {
        throw DirectiveError(Reason::invalid, "directive has no `kind`");
    }
    switch (d.kind) {
        case DirectiveKind::delegate:
            if (!d.target || d.target->empty() || !d.task || text::trim(*d.task).empty()) {
                throw DirectiveError(Reason::invalid, "delegate directive needs `target` and `task`");
            }
            break;
        case DirectiveKind::tool_call:
            if (!d.target || d.target->empty() || !d.arguments) {
                throw DirectiveError(Reason::invalid, "tool_call directive needs `target` and `arguments`");
            }
            break;
        case DirectiveKind::final:
            if (!d.answer || d.answer->empty()) {
                throw DirectiveError(Reason::invalid, "final directive needs a non-empty `answer`");
            }
            break;
    }
    return d;
}

std::string format_directive(const Directive& d) {
    std::string out = "```directive\nkind: " + std::string(to_string(d.kind)) + "\n";
    if (d.target) out += "target: " + yaml_quoted(*d.target) + "\n";
    if (d.task) out += "task: " + yaml_quoted(*d.task) + "\n";
    if (d.arguments) out += "arguments: " + d.arguments->dump() + "\n";
    if (d.answer) out += "answer: " + yaml_quoted(*d.answer) + "\n";
    out += "```\n";
    return out;
}

}  // namespace weave::orchestrator
