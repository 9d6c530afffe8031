#include "weave/architect/stages.hpp"

#include <set>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "weave/util/text.hpp"
#include "weave/util/yaml_json.hpp"

namespace weave::architect {
namespace {

using nlohmann::json;

[[noreturn]] void fail(Stage stage, const std::string& what) { throw StageParseError(stage, what); }

json load_document(Stage stage, std::string_view reply) {
    const auto doc = stage_document(reply);
    YAML::Node node;
    try {
        node = YAML::Load(doc);
    } catch (const YAML::Exception& e) {
        fail(stage, "reply is not valid YAML: " + std::string(e.what()));
    }
    auto j = yaml_to_json(node);
    if (!j.is_object()) fail(stage, "reply must be a YAML mapping");
    return j;
}

void check_keys(Stage stage, const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(stage, where + " must be a mapping");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || a == key;
        if (!known) fail(stage, where + ": unknown key `" + key + "`");
    }
}

std::string scalar(Stage stage, const json& obj, const std::string& where, const char* key, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) fail(stage, where + ": missing `" + key + "`");
        return {};
    }
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number() || it->is_boolean()) return it->dump();
    fail(stage, where + ": `" + key + "` must be a scalar");
}

std::vector<std::string> string_list(Stage stage, const json& obj, const std::string& where, const char* key) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) fail(stage, where + ": `" + key + "` must be a list");
    for (const auto& v : *it) {
        if (v.is_string()) out.push_back(v.get<std::string>());
        else if (v.is_number()) out.push_back(v.dump());
        else fail(stage, where + ": `" + key + "` entries must be strings");
    }
    return out;
}

const json& list(Stage stage, const json& obj, const char* key, bool required) {
    static const json empty = json::array();
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) fail(stage, "missing `" + std::string(key) + "`");
        return empty;
    }
    if (!it->is_array()) fail(stage, "`" + std::string(key) + "` must be a list");
    return *it;
}

std::vector<workflow::FieldSpec> fields(const json& obj, const std::string& where, const char* key) {
    std::vector<workflow::FieldSpec> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) fail(Stage::design, where + ": `" + key + "` must be a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& f = (*it)[i];
        const auto here = where + "/" + key + "/" + std::to_string(i);
        workflow::FieldSpec spec;
        if (f.is_string()) {
            spec.name = f.get<std::string>();
        } else {
            check_keys(Stage::design, f, here, {"name", "description", "kind"});
            spec.name = scalar(Stage::design, f, here, "name");
            spec.description = scalar(Stage::design, f, here, "description", false);
            if (auto kind = scalar(Stage::design, f, here, "kind", false); !kind.empty()) {
                auto k = workflow::field_kind_from_string(kind);
                if (!k) fail(Stage::design, here + ": unknown field kind `" + kind + "`");
                spec.kind = *k;
            }
        }
        out.push_back(std::move(spec));
    }
    return out;
}

void emit_fields(YAML::Emitter& out, const char* key, const std::vector<workflow::FieldSpec>& fs) {
    out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& f : fs) {
        out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << f.name;
        out << YAML::Key << "kind" << YAML::Value << std::string(workflow::to_string(f.kind));
        if (!f.description.empty()) {
            out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << f.description;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
}

void emit_strings(YAML::Emitter& out, const char* key, const std::vector<std::string>& xs) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& x : xs) out << YAML::DoubleQuoted << x;
    out << YAML::EndSeq;
}

template <typename Parse>
auto call_stage(Stage stage, const std::string& prompt, const StageContext& ctx, Parse parse) {
    std::vector<llm::ChatMessage> messages{
        {llm::Role::system, ctx.prompts.get("system")},
        {llm::Role::user, prompt},
    };
    for (int attempt = 0;; ++attempt) {
        llm::ChatResponse response;
        try {
            response = ctx.gateway.complete(ctx.profile(stage), messages);
        } catch (const llm::LlmError& e) {
            throw StageError(stage, std::string("gateway: ") + e.what());
        }
        try {
            return parse(response.content);
        } catch (const StageError& e) {
            if (attempt >= ctx.repair_retries) throw;
            messages.push_back({llm::Role::assistant, response.content});
            messages.push_back({llm::Role::user, ctx.prompts.render("repair", {{"error", text::truncate(e.what(), 600)}})});
        }
    }
}

std::string render_examples(const eval::Dataset& examples) {
    std::string out;
    for (std::size_t i = 0; i < examples.size() && i < kMaxPromptExamples; ++i) {
        out += "Example " + std::to_string(i + 1) + "\nQuestion: " + examples[i].question +
               "\nExpected answer: " + examples[i].answer + "\n\n";
    }
    return out;
}

std::string render_fields(const std::vector<workflow::FieldSpec>& fs) {
    if (fs.empty()) return "(none)";
    std::vector<std::string> parts;
    for (const auto& f : fs) {
        parts.push_back(f.name + " (" + std::string(workflow::to_string(f.kind)) + ")" +
                        (f.description.empty() ? "" : ": " + f.description));
    }
    return text::join(parts, "; ");
}

std::string seed_message(Stage stage, std::string_view reply) {
    std::string body(reply);
    if (auto blocks = text::fenced_blocks(reply); !blocks.empty()) body = blocks.front().body;
    auto trimmed = std::string(text::trim(body));
    if (trimmed.empty()) fail(stage, "reply contains no system message");
    return trimmed;
}

workflow::WorkflowSpec skeleton(const WorkflowBlueprint& bp, const orchestrator::HandlerCatalog* catalog) {
    workflow::WorkflowSpec spec;
    spec.name = bp.name.empty() ? "synthesized_workflow" : bp.name;
    spec.llm_profile = llm::gpt41_profile();
    spec.root_supervisor = bp.root();
    for (const auto& s : bp.supervisors) spec.supervisors.push_back({s.id, "(pending)", s.children});
    for (const auto& a : bp.agents) {
        spec.agents.push_back({a.id, a.purpose, "(pending)", a.inputs, a.outputs, a.tool_needs});
    }
    for (const auto& t : bp.tools) {
        workflow::ToolSpec tool{t.id, t.purpose, {}, t.handler.empty() ? t.id : t.handler};
        if (catalog) {
            if (const auto* def = catalog->find(tool.handler)) tool.parameters = def->parameters;
        }
        spec.tools.push_back(std::move(tool));
    }
    return spec;
}

}  // namespace

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::decompose: return "decompose";
        case Stage::design: return "design";
        case Stage::build: return "build";
        case Stage::validate: return "validate";
        case Stage::evaluate: return "evaluate";
        case Stage::ipr: return "ipr";
        case Stage::emit: return "emit";
    }
    return "unknown";
}

std::optional<Stage> stage_from_string(std::string_view s) {
    for (auto st : {Stage::decompose, Stage::design, Stage::build, Stage::validate, Stage::evaluate, Stage::ipr,
                    Stage::emit}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

std::string WorkflowBlueprint::root() const {
    std::set<std::string> children;
    for (const auto& s : supervisors) children.insert(s.children.begin(), s.children.end());
    std::string root;
    for (const auto& s : supervisors) {
        if (children.count(s.id)) continue;
        if (!root.empty()) return {};
        root = s.id;
    }
    return root;
}

const llm::LlmProfile& StageContext::profile(Stage stage) const {
    static const llm::LlmProfile fallback = llm::gpt41_profile();
    auto it = profiles.find(stage);
    return it == profiles.end() ? fallback : it->second;
}

std::string stage_document(std::string_view reply) {
    for (const auto& b : text::fenced_blocks(reply)) {
        if (b.info == "yaml" || b.info == "yml") return b.body;
    }
    return std::string(reply);
}

TaskPlan parse_task_plan(std::string_view reply) {
    constexpr auto st = Stage::decompose;
    auto doc = load_document(st, reply);
    check_keys(st, doc, "plan", {"tasks"});
    TaskPlan plan;
    std::set<std::string> ids;
    const auto& tasks = list(st, doc, "tasks", true);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto where = "tasks/" + std::to_string(i);
        check_keys(st, tasks[i], where, {"id", "description", "requirements"});
        PlannedTask t{scalar(st, tasks[i], where, "id"), scalar(st, tasks[i], where, "description"),
                      string_list(st, tasks[i], where, "requirements")};
        if (!ids.insert(t.id).second) fail(st, where + ": duplicate task id `" + t.id + "`");
        plan.tasks.push_back(std::move(t));
    }
    if (plan.tasks.empty()) fail(st, "plan has no tasks");
    return plan;
}

WorkflowBlueprint parse_blueprint(std::string_view reply) {
    constexpr auto st = Stage::design;
    auto doc = load_document(st, reply);
    check_keys(st, doc, "blueprint", {"name", "supervisors", "agents", "tools"});
    WorkflowBlueprint bp;
    bp.name = scalar(st, doc, "blueprint", "name", false);
    const auto& sups = list(st, doc, "supervisors", true);
    for (std::size_t i = 0; i < sups.size(); ++i) {
        const auto where = "supervisors/" + std::to_string(i);
        check_keys(st, sups[i], where, {"id", "purpose", "children"});
        bp.supervisors.push_back({scalar(st, sups[i], where, "id"), scalar(st, sups[i], where, "purpose"),
                                  string_list(st, sups[i], where, "children")});
    }
    const auto& agents = list(st, doc, "agents", true);
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto where = "agents/" + std::to_string(i);
        check_keys(st, agents[i], where, {"id", "purpose", "inputs", "outputs", "tool_needs"});
        bp.agents.push_back({scalar(st, agents[i], where, "id"), scalar(st, agents[i], where, "purpose"),
                             fields(agents[i], where, "inputs"), fields(agents[i], where, "outputs"),
                             string_list(st, agents[i], where, "tool_needs")});
    }
    const auto& tools = list(st, doc, "tools", false);
    for (std::size_t i = 0; i < tools.size(); ++i) {
        const auto where = "tools/" + std::to_string(i);
        check_keys(st, tools[i], where, {"id", "purpose", "handler"});
        BlueprintTool t{scalar(st, tools[i], where, "id"), scalar(st, tools[i], where, "purpose"),
                        scalar(st, tools[i], where, "handler", false)};
        if (t.handler.empty()) t.handler = t.id;
        bp.tools.push_back(std::move(t));
    }
    if (bp.supervisors.empty()) fail(st, "blueprint has no supervisors");
    return bp;
}

std::string serialize_task_plan(const TaskPlan& plan) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "tasks" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : plan.tasks) {
        out << YAML::BeginMap;
        out << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << t.id;
        out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << t.description;
        out << YAML::Key << "requirements" << YAML::Value << YAML::BeginSeq;
        for (const auto& r : t.requirements) out << YAML::DoubleQuoted << r;
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string serialize_blueprint(const WorkflowBlueprint& bp) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    if (!bp.name.empty()) out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << bp.name;
    out << YAML::Key << "supervisors" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : bp.supervisors) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << s.id;
        out << YAML::Key << "purpose" << YAML::Value << YAML::DoubleQuoted << s.purpose;
        emit_strings(out, "children", s.children);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : bp.agents) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << a.id;
        out << YAML::Key << "purpose" << YAML::Value << YAML::DoubleQuoted << a.purpose;
        emit_fields(out, "inputs", a.inputs);
        emit_fields(out, "outputs", a.outputs);
        emit_strings(out, "tool_needs", a.tool_needs);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::Key << "tools" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : bp.tools) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << t.id;
        out << YAML::Key << "purpose" << YAML::Value << YAML::DoubleQuoted << t.purpose;
        out << YAML::Key << "handler" << YAML::Value << YAML::DoubleQuoted << t.handler;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void check_blueprint(const WorkflowBlueprint& blueprint, const CapabilitiesDoc& doc) {
    auto report = workflow::validate_workflow(skeleton(blueprint, nullptr));
    for (const auto& t : blueprint.tools) {
        const auto handler = t.handler.empty() ? t.id : t.handler;
        if (!doc.offers_handler(handler)) {
            throw BlueprintError("tool `" + t.id + "` requests unknown tool handler `" + handler + "`", report);
        }
    }
    if (!report.ok()) throw BlueprintError("blueprint breaks workflow invariants:\n" + report.render(), report);
}

TaskPlan decompose(std::string_view user_prompt, const eval::Dataset& examples, const StageContext& ctx) {
    if (text::trim(user_prompt).empty()) throw StageError(Stage::decompose, "user prompt is empty");
    if (examples.empty()) throw StageError(Stage::decompose, "at least one example is required");
    auto prompt = ctx.prompts.render("decompose", {{"capabilities", ctx.doc.text},
                                                   {"user_prompt", std::string(text::trim(user_prompt))},
                                                   {"examples", render_examples(examples)}});
    return call_stage(Stage::decompose, prompt, ctx, parse_task_plan);
}

WorkflowBlueprint design(const TaskPlan& plan, const StageContext& ctx) {
    auto prompt = ctx.prompts.render("design", {{"capabilities", ctx.doc.text},
                                                {"task_plan", serialize_task_plan(plan)},
                                                {"handlers", text::join(ctx.doc.tool_handlers, ", ")}});
    return call_stage(Stage::design, prompt, ctx, [&](std::string_view reply) {
        auto bp = parse_blueprint(reply);
        check_blueprint(bp, ctx.doc);
        return bp;
    });
}

workflow::WorkflowSpec build(const WorkflowBlueprint& blueprint, const StageContext& ctx) {
    const auto builtins = orchestrator::HandlerCatalog::builtins();
    const auto& catalog = ctx.handlers ? *ctx.handlers : builtins;
    for (const auto& t : blueprint.tools) {
        if (!catalog.find(t.handler.empty() ? t.id : t.handler)) {
            throw StageError(Stage::build, "no handler implementation for tool `" + t.id + "`");
        }
    }
    auto spec = skeleton(blueprint, &catalog);
    spec.llm_profile = ctx.workflow_profile;
    const auto bp_text = serialize_blueprint(blueprint);
    auto seed = [&](const std::string& prompt) {
        return call_stage(Stage::build, prompt, ctx, [](std::string_view r) { return seed_message(Stage::build, r); });
    };
    for (std::size_t i = 0; i < blueprint.supervisors.size(); ++i) {
        const auto& s = blueprint.supervisors[i];
        spec.supervisors[i].system_message =
            seed(ctx.prompts.render("build_supervisor", {{"capabilities", ctx.doc.text},
                                                         {"blueprint", bp_text},
                                                         {"id", s.id},
                                                         {"purpose", s.purpose},
                                                         {"children", text::join(s.children, ", ")}}));
    }
    for (std::size_t i = 0; i < blueprint.agents.size(); ++i) {
        const auto& a = blueprint.agents[i];
        spec.agents[i].system_message =
            seed(ctx.prompts.render("build_agent", {{"capabilities", ctx.doc.text},
                                                    {"blueprint", bp_text},
                                                    {"id", a.id},
                                                    {"purpose", a.purpose},
                                                    {"inputs", render_fields(a.inputs)},
                                                    {"outputs", render_fields(a.outputs)},
                                                    {"tools", a.tool_needs.empty() ? "(none)" : text::join(a.tool_needs, ", ")}}));
    }
    if (auto report = workflow::validate_workflow(spec); !report.ok()) {
        throw BuildValidationError(std::move(spec), std::move(report));
    }
    return spec;
}

}  // namespace weave::architect
