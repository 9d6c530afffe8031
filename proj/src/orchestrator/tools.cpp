#include "weave/orchestrator/tools.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

namespace weave::orchestrator {
namespace {

using workflow::FieldKind;
using workflow::FieldSpec;

class ArithmeticParser {
public:
    explicit ArithmeticParser(std::string_view s) : s_(s) {}

    double parse() {
        double v = expression();
        skip_space();
        if (pos_ != s_.size()) fail("unexpected `" + std::string(1, s_[pos_]) + "`");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ToolError(ToolError::Reason::handler_failed,
                        "calculator: " + why + " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expression() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                double d = factor();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        if (accept('(')) {
            double v = expression();
            if (!accept(')')) fail("expected `)`");
            return v;
        }
        skip_space();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (start == pos_) fail("expected a number");
        try {
            std::size_t used = 0;
            std::string token(s_.substr(start, pos_ - start));
            double v = std::stod(token, &used);
            if (used != token.size()) fail("malformed number `" + token + "`");
            return v;
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

bool matches_kind(const nlohmann::json& v, FieldKind kind) {
    switch (kind) {
        case FieldKind::text: return v.is_primitive() && !v.is_null();
        case FieldKind::number: return v.is_number();
        case FieldKind::boolean: return v.is_boolean();
        case FieldKind::list: return v.is_array();
    }
    return false;
}

std::string as_text(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

void check_arguments(const workflow::ToolSpec& spec, const nlohmann::json& arguments) {
    auto bad = [&](const std::string& why) {
        throw ToolError(ToolError::Reason::bad_arguments, "tool `" + spec.id + "`: " + why);
    };
    if (!arguments.is_object()) bad("arguments must be a mapping");
    std::set<std::string> declared;
    for (const auto& p : spec.parameters) {
        declared.insert(p.name);
        auto it = arguments.find(p.name);
        if (it == arguments.end()) bad("missing argument `" + p.name + "`");
        if (!matches_kind(*it, p.kind)) {
            bad("argument `" + p.name + "` must be " + std::string(workflow::to_string(p.kind)));
        }
    }
    for (const auto& [key, _] : arguments.items()) {
        if (!declared.count(key)) bad("unexpected argument `" + key + "`");
    }
}

double evaluate_arithmetic(std::string_view expression) {
    return ArithmeticParser(expression).parse();
}

std::string format_number(double value) {
    if (std::isfinite(value) && value == std::nearbyint(value) && std::fabs(value) < 1e15) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

HandlerCatalog HandlerCatalog::builtins() {
    HandlerCatalog catalog;
    catalog.add(HandlerDef{
        "echo",
        "Returns its `text` argument unchanged.",
        {FieldSpec{"text", "text to echo back", FieldKind::text}},
        [](const nlohmann::json& args) { return as_text(args.at("text")); },
    });
    catalog.add(HandlerDef{
        "calculator",
        "Evaluates an arithmetic expression with + - * / and parentheses.",
        {FieldSpec{"expr", "arithmetic expression, e.g. 30*10/60", FieldKind::text}},
        [](const nlohmann::json& args) { return format_number(evaluate_arithmetic(as_text(args.at("expr")))); },
    });
    return catalog;
}

void HandlerCatalog::add(HandlerDef def) {
    auto name = def.name;
    handlers_.insert_or_assign(std::move(name), std::move(def));
}

const HandlerDef* HandlerCatalog::find(std::string_view name) const {
    auto it = handlers_.find(name);
    return it == handlers_.end() ? nullptr : &it->second;
}

std::vector<std::string> HandlerCatalog::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : handlers_) out.push_back(name);
    return out;
}

ToolRegistry ToolRegistry::from_spec(const workflow::WorkflowSpec& spec, const HandlerCatalog& catalog) {
    ToolRegistry registry;
    for (const auto& tool : spec.tools) {
        const auto* def = catalog.find(tool.handler);
        if (!def) {
            throw ToolError(ToolError::Reason::unknown_handler,
                            "tool `" + tool.id + "` uses unknown handler `" + tool.handler + "`");
        }
        registry.add(tool, def->handler);
    }
    return registry;
}

void ToolRegistry::add(workflow::ToolSpec spec, ToolHandler handler) {
    auto id = spec.id;
    tools_.insert_or_assign(std::move(id), Bound{std::move(spec), std::move(handler)});
}

const workflow::ToolSpec* ToolRegistry::find(std::string_view tool_id) const {
    auto it = tools_.find(tool_id);
    return it == tools_.end() ? nullptr : &it->second.spec;
}

std::string ToolRegistry::invoke(std::string_view tool_id, const nlohmann::json& arguments) const {
    auto it = tools_.find(tool_id);
    if (it == tools_.end()) {
        throw ToolError(ToolError::Reason::unknown_tool, "unknown tool `" + std::string(tool_id) + "`");
    }
    check_arguments(it->second.spec, arguments);
    try {
        return it->second.handler(arguments);
    } catch (const ToolError&) {
        throw;
    } catch (const std::exception& e) {
        throw ToolError(ToolError::Reason::handler_failed, "tool `" + it->first + "` failed: " + e.what());
    }
}

}  // namespace weave::orchestrator
