#include "weave/workflow/validate.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "weave/util/text.hpp"

namespace weave::workflow {
namespace {

class Checker {
public:
    explicit Checker(const WorkflowSpec& spec) : spec_(spec) {}

    ValidationReport run() {
        check_profile();
        check_ids();
        check_supervisors();
        check_agents();
        check_tools();
        check_tree();
        return std::move(report_);
    }

private:
    void add(IssueCode code, std::string path, std::string message) {
        report_.issues.push_back(Issue{code, std::move(path), std::move(message)});
    }

    void check_profile() {
        for (const auto& [field, message] : llm::profile_problems(spec_.llm_profile)) {
            add(IssueCode::BAD_PROFILE, "/llm_profile/" + field, message);
        }
    }

    void check_ids() {
        std::map<std::string, std::string> first_seen;
        auto visit = [&](const std::string& id, const std::string& path) {
            if (!is_valid_identifier(id)) {
                add(IssueCode::BAD_IDENTIFIER, path + "/id", "invalid or reserved identifier `" + id + "`");
            }
            auto [it, inserted] = first_seen.emplace(id, path);
            if (!inserted) {
                add(IssueCode::DUPLICATE_ID, path, "id `" + id + "` already used at " + it->second);
            }
        };
        for (std::size_t i = 0; i < spec_.supervisors.size(); ++i) {
            visit(spec_.supervisors[i].id, "/supervisors/" + std::to_string(i));
        }
        for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
            visit(spec_.agents[i].id, "/agents/" + std::to_string(i));
        }
        for (std::size_t i = 0; i < spec_.tools.size(); ++i) {
            visit(spec_.tools[i].id, "/tools/" + std::to_string(i));
        }
    }

    void check_fields(const std::vector<FieldSpec>& fields, const std::string& path,
                      std::map<std::string, std::string>& names) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto item = path + "/" + std::to_string(i);
            if (!is_valid_field_name(fields[i].name)) {
                add(IssueCode::BAD_FIELD_NAME, item + "/name",
                    "field name `" + fields[i].name + "` must match [a-z][a-z0-9_]*");
            }
            auto [it, inserted] = names.emplace(fields[i].name, item);
            if (!inserted) {
                add(IssueCode::DUPLICATE_FIELD, item, "field `" + fields[i].name + "` already declared at " + it->second);
            }
        }
    }

    void check_supervisors() {
        for (std::size_t i = 0; i < spec_.supervisors.size(); ++i) {
            const auto& s = spec_.supervisors[i];
            const auto path = "/supervisors/" + std::to_string(i);
            if (text::trim(s.system_message).empty()) {
                add(IssueCode::EMPTY_SYSTEM_MESSAGE, path + "/system_message", "system_message is blank");
            }
            if (s.children.empty()) {
                add(IssueCode::EMPTY_CHILDREN, path + "/children", "supervisor `" + s.id + "` has no children");
            }
            for (std::size_t j = 0; j < s.children.size(); ++j) {
                const auto& child = s.children[j];
                if (!spec_.find_supervisor(child) && !spec_.find_agent(child)) {
                    add(IssueCode::DANGLING_REF, path + "/children/" + std::to_string(j),
                        "child `" + child + "` is neither a supervisor nor an agent");
                }
            }
        }
    }

    void check_agents() {
        for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
            const auto& a = spec_.agents[i];
            const auto path = "/agents/" + std::to_string(i);
            if (text::trim(a.system_message).empty()) {
                add(IssueCode::EMPTY_SYSTEM_MESSAGE, path + "/system_message", "system_message is blank");
            }
            if (a.outputs.empty()) {
                add(IssueCode::EMPTY_OUTPUTS, path + "/outputs", "agent `" + a.id + "` declares no outputs");
            }
            std::map<std::string, std::string> names;
            check_fields(a.inputs, path + "/inputs", names);
            check_fields(a.outputs, path + "/outputs", names);
            for (std::size_t j = 0; j < a.tool_ids.size(); ++j) {
                if (!spec_.find_tool(a.tool_ids[j])) {
                    add(IssueCode::DANGLING_REF, path + "/tool_ids/" + std::to_string(j),
                        "unknown tool `" + a.tool_ids[j] + "`");
                }
            }
        }
    }

    void check_tools() {
        for (std::size_t i = 0; i < spec_.tools.size(); ++i) {
            const auto& t = spec_.tools[i];
            const auto path = "/tools/" + std::to_string(i);
            if (t.handler.empty()) {
                add(IssueCode::EMPTY_HANDLER, path + "/handler", "tool `" + t.id + "` has no handler");
            }
            std::map<std::string, std::string> names;
            check_fields(t.parameters, path + "/parameters", names);
        }
    }

    // Parent-count scan plus reachability from the root. Dangling references are
    // reported elsewhere and ignored here.
    void check_tree() {
        const auto* root = spec_.find_supervisor(spec_.root_supervisor);
        if (!root) {
            add(IssueCode::BAD_ROOT, "/root_supervisor",
                "root_supervisor `" + spec_.root_supervisor + "` is not a declared supervisor");
            return;
        }
        auto exists = [&](const std::string& id) { return spec_.find_supervisor(id) || spec_.find_agent(id); };

        std::map<std::string, std::string> parent_of;
        for (std::size_t i = 0; i < spec_.supervisors.size(); ++i) {
            const auto& s = spec_.supervisors[i];
            for (std::size_t j = 0; j < s.children.size(); ++j) {
                const auto& child = s.children[j];
                if (!exists(child)) continue;
                const auto path = "/supervisors/" + std::to_string(i) + "/children/" + std::to_string(j);
                if (child == root->id) {
                    add(IssueCode::NOT_A_TREE, path, "root `" + child + "` is listed as a child of `" + s.id + "`");
                    continue;
                }
                auto [it, inserted] = parent_of.emplace(child, s.id);
                if (!inserted) {
                    add(IssueCode::NOT_A_TREE, path,
                        "`" + child + "` has two parents: `" + it->second + "` and `" + s.id + "`");
                }
            }
        }

        std::set<std::string> reached;
        std::vector<std::string> stack{root->id};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (!reached.insert(id).second) continue;
            if (const auto* s = spec_.find_supervisor(id)) {
                for (const auto& child : s->children) {
                    if (exists(child)) stack.push_back(child);
                }
            }
        }
        for (std::size_t i = 0; i < spec_.supervisors.size(); ++i) {
            if (!reached.count(spec_.supervisors[i].id)) {
                add(IssueCode::NOT_A_TREE, "/supervisors/" + std::to_string(i),
                    "supervisor `" + spec_.supervisors[i].id + "` is not reachable from the root");
            }
        }
        for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
            if (!reached.count(spec_.agents[i].id)) {
                add(IssueCode::NOT_A_TREE, "/agents/" + std::to_string(i),
                    "agent `" + spec_.agents[i].id + "` is not reachable from the root");
            }
        }
    }

    const WorkflowSpec& spec_;
    ValidationReport report_;
};

}  // namespace

std::string_view to_string(IssueCode code) {
    switch (code) {
        case IssueCode::DUPLICATE_ID: return "DUPLICATE_ID";
        case IssueCode::DANGLING_REF: return "DANGLING_REF";
        case IssueCode::NOT_A_TREE: return "NOT_A_TREE";
        case IssueCode::EMPTY_CHILDREN: return "EMPTY_CHILDREN";
        case IssueCode::BAD_ROOT: return "BAD_ROOT";
        case IssueCode::BAD_FIELD_NAME: return "BAD_FIELD_NAME";
        case IssueCode::DUPLICATE_FIELD: return "DUPLICATE_FIELD";
        case IssueCode::EMPTY_OUTPUTS: return "EMPTY_OUTPUTS";
        case IssueCode::EMPTY_SYSTEM_MESSAGE: return "EMPTY_SYSTEM_MESSAGE";
        case IssueCode::EMPTY_HANDLER: return "EMPTY_HANDLER";
        case IssueCode::BAD_PROFILE: return "BAD_PROFILE";
        case IssueCode::BAD_IDENTIFIER: return "BAD_IDENTIFIER";
    }
    return "UNKNOWN";
}

std::set<IssueCode> ValidationReport::codes() const {
    std::set<IssueCode> out;
    for (const auto& i : issues) out.insert(i.code);
    return out;
}

std::string ValidationReport::render() const {
    if (issues.empty()) return "ok\n";
    std::string out;
    for (const auto& i : issues) {
        out += std::string(to_string(i.code)) + " at " + i.path + ": " + i.message + "\n";
    }
    return out;
}

bool is_valid_identifier(std::string_view id) {
    static const std::regex re(R"([A-Za-z][A-Za-z0-9_\-]*)");
    if (!std::regex_match(id.begin(), id.end(), re)) return false;
    return std::find(std::begin(kReservedIds), std::end(kReservedIds), id) == std::end(kReservedIds);
}

bool is_valid_field_name(std::string_view name) {
    static const std::regex re(R"([a-z][a-z0-9_]*)");
    return std::regex_match(name.begin(), name.end(), re);
}

ValidationReport validate_workflow(const WorkflowSpec& spec) {
    return Checker(spec).run();
}

}  // namespace weave::workflow
