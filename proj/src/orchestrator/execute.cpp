#include "weave/orchestrator/execute.hpp"

#include <algorithm>
#include <set>

#include "weave/util/text.hpp"
#include "weave/workflow/validate.hpp"

namespace weave::orchestrator {
namespace {

using llm::ChatMessage;
using llm::Role;
using workflow::AgentSpec;
using workflow::SupervisorSpec;
using workflow::WorkflowSpec;

constexpr std::string_view kMemoryRead = "memory_read";
constexpr std::string_view kMemoryWrite = "memory_write";

std::string field_lines(const std::vector<workflow::FieldSpec>& fields) {
    std::string out;
    for (const auto& f : fields) {
        out += "- " + f.name + " (" + std::string(workflow::to_string(f.kind)) + ")";
        if (!f.description.empty()) out += ": " + f.description;
        out += "\n";
    }
    return out;
}

std::string repair_prompt(const DirectiveError& e) {
    return std::string(kRepairMarker) + ": " + e.what() +
           ". Reply again with exactly one ```directive block as described in your instructions.";
}

std::set<std::string> parse_readers(const nlohmann::json& v) {
    std::set<std::string> out;
    if (v.is_array()) {
        for (const auto& item : v) {
            if (item.is_string()) out.insert(item.get<std::string>());
        }
    } else if (v.is_string()) {
        std::string s = v.get<std::string>();
        std::size_t start = 0;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            auto part = text::trim(std::string_view(s).substr(start, comma == std::string::npos ? s.npos : comma - start));
            if (!part.empty()) out.emplace(part);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

std::string arg_text(const nlohmann::json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end() || it->is_null()) return {};
    return it->is_string() ? it->get<std::string>() : it->dump();
}

class Run {
public:
    Run(const WorkflowSpec& spec, llm::Gateway& gateway, const ExecuteOptions& options)
        : spec_(spec),
          gateway_(gateway),
          options_(options),
          router_(gateway.clock()),
          memory_([&] {
              auto ids = spec.component_ids();
              return std::set<std::string>(ids.begin(), ids.end());
          }()) {}

    RunResult run(std::string_view query) {
        const auto started = gateway_.clock().now();
        try {
            tools_ = ToolRegistry::from_spec(spec_, options_.handlers ? *options_.handlers : builtin_catalog());
        } catch (const ToolError& e) {
            throw InvalidWorkflow(e.what(), trace_);
        }
        const auto* root = spec_.find_supervisor(spec_.root_supervisor);
        auto inbound = router_.open("user", root->id, std::string(query), options_.metadata);
        RunResult result;
        result.final_answer = run_supervisor(*root, inbound, true);
        result.trace = std::move(trace_);
        result.envelopes = router_.envelopes();
        result.memory = std::move(memory_);
        result.prompt_tokens = prompt_tokens_;
        result.completion_tokens = completion_tokens_;
        result.wall_time = elapsed(gateway_.clock(), started);
        return result;
    }

private:
    static const HandlerCatalog& builtin_catalog() {
        static const HandlerCatalog catalog = HandlerCatalog::builtins();
        return catalog;
    }

    std::size_t record(const std::string& actor, StepKind kind, const std::string& envelope_id, std::string detail) {
        if (trace_.steps.size() >= options_.max_steps) {
            throw StepBudgetExceeded("step budget of " + std::to_string(options_.max_steps) + " exhausted", trace_);
        }
        trace_.steps.push_back(TraceStep{actor, kind, envelope_id, std::move(detail)});
        return trace_.steps.size() - 1;
    }

    std::string call(const std::string& actor, const std::string& envelope_id, const std::vector<ChatMessage>& messages) {
        auto index = record(actor, StepKind::llm_call, envelope_id, "");
        try {
            auto response = gateway_.complete(spec_.llm_profile, messages);
            prompt_tokens_ += response.prompt_tokens;
            completion_tokens_ += response.completion_tokens;
            trace_.steps[index].detail = response.content;
            return response.content;
        } catch (const llm::LlmError& e) {
            trace_.steps[index].detail = std::string("error: ") + e.what();
            throw GatewayFailure(std::string("gateway call by `") + actor + "` failed: " + e.what(), trace_,
                                 std::current_exception());
        }
    }

    // Calls the model until its reply parses as a directive, allowing one repair
    // retry. Replies without any directive block are handed back as plain text
    // when `plain_ok` is set (worker agents).
    std::optional<Directive> next_directive(const std::string& actor, const std::string& envelope_id,
                                            std::vector<ChatMessage>& messages, bool plain_ok, std::string& reply) {
        for (int attempt = 0;; ++attempt) {
            reply = call(actor, envelope_id, messages);
            messages.push_back(ChatMessage{Role::assistant, reply});
            try {
                return parse_directive(reply);
            } catch (const DirectiveError& e) {
                if (plain_ok && e.reason() == DirectiveError::Reason::no_block) return std::nullopt;
                if (attempt >= 1) {
                    throw DirectiveFailure("`" + actor + "` produced no usable directive after repair: " + e.what(),
                                           trace_);
                }
                messages.push_back(ChatMessage{Role::user, repair_prompt(e)});
            }
        }
    }

    std::string run_supervisor(const SupervisorSpec& sup, const Envelope& inbound, bool is_root) {
        std::vector<ChatMessage> messages{
            {Role::system, sup.system_message + "\n\n" + supervisor_protocol(spec_, sup)},
            {Role::user, inbound.content},
        };
        for (;;) {
            std::string reply;
            auto directive = *next_directive(sup.id, inbound.id, messages, false, reply);
            switch (directive.kind) {
                case DirectiveKind::delegate: {
                    const auto& target = *directive.target;
                    if (std::find(sup.children.begin(), sup.children.end(), target) == sup.children.end()) {
                        throw UnknownTarget("`" + sup.id + "` cannot delegate to `" + target + "`: not a child", trace_);
                    }
                    auto child = router_.route(inbound.id, sup.id, target, *directive.task);
                    record(sup.id, StepKind::delegate, child.id, target + ": " + *directive.task);
                    std::string result = dispatch(target, child);
                    router_.route(child.id, target, sup.id, result);
                    messages.push_back(ChatMessage{Role::user, "Result from `" + target + "`:\n" + result});
                    break;
                }
                case DirectiveKind::tool_call:
                    messages.push_back(use_tool(sup.id, {}, directive, inbound));
                    break;
                case DirectiveKind::final:
                    if (is_root) record(sup.id, StepKind::final, inbound.id, *directive.answer);
                    return *directive.answer;
            }
        }
    }

    std::string run_agent(const AgentSpec& agent, const Envelope& inbound) {
        std::vector<ChatMessage> messages{
            {Role::system, agent.system_message + "\n\n" + agent_protocol(spec_, agent)},
            {Role::user, inbound.content},
        };
        for (;;) {
            std::string reply;
            auto directive = next_directive(agent.id, inbound.id, messages, true, reply);
            if (!directive) return reply;
            switch (directive->kind) {
                case DirectiveKind::final:
                    return *directive->answer;
                case DirectiveKind::tool_call:
                    messages.push_back(use_tool(agent.id, agent.tool_ids, *directive, inbound));
                    break;
                case DirectiveKind::delegate:
                    throw UnknownTarget("worker `" + agent.id + "` cannot delegate", trace_);
            }
        }
    }

    std::string dispatch(const std::string& target, const Envelope& envelope) {
        if (const auto* sup = spec_.find_supervisor(target)) return run_supervisor(*sup, envelope, false);
        return run_agent(*spec_.find_agent(target), envelope);
    }

    ChatMessage use_tool(const std::string& actor, const std::vector<std::string>& allowed, const Directive& d,
                         const Envelope& inbound) {
        const auto& target = *d.target;
        const auto& args = *d.arguments;
        auto request = router_.route(inbound.id, actor, target, args.dump());
        std::string output;
        if (target == kMemoryRead) {
            auto key = arg_text(args, "key");
            auto index = record(actor, StepKind::memory_read, request.id, key);
            try {
                output = memory_.read(actor, key);
                trace_.steps[index].detail = key + " (allowed)";
            } catch (const MemoryError& e) {
                output = std::string("ERROR: ") + e.what();
                trace_.steps[index].detail = key + " (denied)";
            }
        } else if (target == kMemoryWrite) {
            auto key = arg_text(args, "key");
            auto index = record(actor, StepKind::memory_write, request.id, key);
            try {
                memory_.write(actor, key, arg_text(args, "value"),
                              parse_readers(args.contains("readable_by") ? args["readable_by"] : nlohmann::json()));
                output = "stored `" + key + "`";
                trace_.steps[index].detail = key + " (allowed)";
            } catch (const MemoryError& e) {
                output = std::string("ERROR: ") + e.what();
                trace_.steps[index].detail = key + " (denied)";
            }
        } else {
            if (std::find(allowed.begin(), allowed.end(), target) == allowed.end()) {
                throw UnknownTarget("`" + actor + "` has no tool `" + target + "`", trace_);
            }
            auto index = record(actor, StepKind::tool_call, request.id, target + " " + args.dump());
            try {
                output = tools_.invoke(target, args);
            } catch (const ToolError& e) {
                output = std::string("ERROR: ") + e.what();
            }
            trace_.steps[index].detail += " -> " + output;
        }
        router_.route(request.id, target, actor, output);
        return ChatMessage{Role::tool, "Tool `" + target + "` returned:\n" + output};
    }

    const WorkflowSpec& spec_;
    llm::Gateway& gateway_;
    const ExecuteOptions& options_;
    MessageRouter router_;
    MemoryStore memory_;
    ToolRegistry tools_;
    ExecutionTrace trace_;
    std::size_t prompt_tokens_ = 0;
    std::size_t completion_tokens_ = 0;
};

}  // namespace

bool GatewayFailure::transcript_exhausted() const {
    if (!cause_) return false;
    try {
        std::rethrow_exception(cause_);
    } catch (const llm::TranscriptError&) {
        return true;
    } catch (...) {
        return false;
    }
}

std::string supervisor_protocol(const WorkflowSpec& spec, const SupervisorSpec& supervisor) {
    std::string out = "## Team\nYou coordinate these members. Delegate work to them by id, one at a time:\n";
    for (const auto& child : supervisor.children) {
        if (const auto* agent = spec.find_agent(child)) {
            out += "- `" + child + "` (agent)";
            if (!agent->role.empty()) out += ": " + agent->role;
            out += "\n";
        } else {
            out += "- `" + child + "` (supervisor)\n";
        }
    }
    out +=
        "\n## Response format\n"
        "End every reply with exactly one fenced block tagged `directive`. To hand a subtask to a member:\n"
        "```directive\nkind: delegate\ntarget: <member id>\ntask: <self-contained instructions>\n```\n"
        "When you can answer the request you received:\n"
        "```directive\nkind: final\nanswer: <the answer>\n```\n"
        "Shared memory is available through `kind: tool_call` with target `memory_write` "
        "(arguments: key, value, readable_by) or `memory_read` (arguments: key).\n";
    return out;
}

std::string agent_protocol(const WorkflowSpec& spec, const AgentSpec& agent) {
    std::string out;
    if (!agent.inputs.empty()) out += "## Inputs\n" + field_lines(agent.inputs) + "\n";
    out += "## Outputs\n" + field_lines(agent.outputs);
    if (!agent.tool_ids.empty()) {
        out += "\n## Tools\n";
        for (const auto& id : agent.tool_ids) {
            const auto* tool = spec.find_tool(id);
            out += "- `" + id + "`";
            if (tool && !tool->description.empty()) out += ": " + tool->description;
            out += "\n";
            if (tool) {
                for (const auto& p : tool->parameters) {
                    out += "  - " + p.name + " (" + std::string(workflow::to_string(p.kind)) + ")\n";
                }
            }
        }
        out +=
            "To call a tool, reply with exactly one block:\n"
            "```directive\nkind: tool_call\ntarget: <tool id>\narguments: {<name>: <value>}\n```\n";
    }
    out += "\nWhen you are done, reply with your result as plain text.\n";
    return out;
}

RunResult execute(const WorkflowSpec& spec, std::string_view query, llm::Gateway& gateway,
                  const ExecuteOptions& options) {
    auto report = workflow::validate_workflow(spec);
    if (!report.ok()) {
        throw InvalidWorkflow("workflow failed validation:\n" + report.render(), {});
    }
    if (text::trim(query).empty()) {
        throw std::invalid_argument("execute: query is empty");
    }
    return Run(spec, gateway, options).run(query);
}

}  // namespace weave::orchestrator
