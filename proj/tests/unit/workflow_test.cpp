#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "test_support.hpp"
#include "weave/workflow/validate.hpp"
#include "weave/workflow/yaml_io.hpp"

using namespace weave;
using namespace weave::workflow;
using weave::testing::fixture;
using weave::testing::read_fixture;

namespace {

WorkflowSpec minimal() { return parse_workflow(read_fixture("workflows/minimal.workflow.yaml")); }

std::vector<std::filesystem::path> files_in(std::string_view dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(fixture(dir))) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(WorkflowParse, MinimalDefaults) {
    auto spec = minimal();
    EXPECT_EQ(spec.name, "minimal");
    EXPECT_EQ(spec.root_supervisor, "solver");
    EXPECT_EQ(spec.llm_profile, llm::gpt41_profile());
    ASSERT_EQ(spec.agents.size(), 1u);
    EXPECT_EQ(spec.agents[0].outputs[0].kind, FieldKind::text);
    EXPECT_TRUE(spec.tools.empty());
}

TEST(WorkflowParse, CalculatorFixtureHasTwoLevels) {
    auto spec = parse_workflow(read_fixture("workflows/calculator.workflow.yaml"));
    EXPECT_EQ(spec.supervisors.size(), 2u);
    EXPECT_EQ(spec.agents.size(), 3u);
    ASSERT_EQ(spec.tools.size(), 1u);
    EXPECT_EQ(spec.tools[0].handler, "calculator");
    EXPECT_EQ(spec.llm_profile.base_url, "http://localhost:8080/v1");
    EXPECT_DOUBLE_EQ(spec.llm_profile.temperature, 0.2);
    EXPECT_EQ(spec.llm_profile.timeout.count(), 30);
    EXPECT_TRUE(validate_workflow(spec).ok());
}

TEST(WorkflowParse, EveryValidFixtureValidates) {
    for (const auto& path : files_in("workflows")) {
        auto spec = parse_workflow(read_file(path));
        EXPECT_TRUE(validate_workflow(spec).ok()) << path << "\n" << validate_workflow(spec).render();
    }
}

TEST(WorkflowParse, SyntaxErrorHasPosition) {
    try {
        parse_workflow(read_fixture("malformed/syntax.workflow.yaml"));
        FAIL();
    } catch (const WorkflowParseError& e) {
        EXPECT_EQ(e.kind(), WorkflowParseError::Kind::syntax);
        EXPECT_EQ(e.code(), "SYNTAX");
        EXPECT_EQ(e.line(), 8);
    }
}

TEST(WorkflowParse, UnknownKeyIsSchemaErrorWithPath) {
    try {
        parse_workflow(read_fixture("malformed/schema.workflow.yaml"));
        FAIL();
    } catch (const WorkflowParseError& e) {
        EXPECT_EQ(e.code(), "SCHEMA");
        EXPECT_EQ(e.path(), "/supervisors/0/temperature");
    }
}

TEST(WorkflowParse, WrongTypesAreSchemaErrors) {
    auto text = read_fixture("workflows/minimal.workflow.yaml");
    auto swap = [&](std::string from, std::string to) {
        auto copy = text;
        copy.replace(copy.find(from), from.size(), to);
        return copy;
    };
    EXPECT_THROW(parse_workflow(swap("children: [worker]", "children: worker")), WorkflowParseError);
    EXPECT_THROW(parse_workflow(swap("kind: text", "kind: blob")), WorkflowParseError);
    EXPECT_THROW(parse_workflow(swap("provider: openai_compatible", "provider: telepathy")), WorkflowParseError);
    EXPECT_THROW(parse_workflow("- just\n- a list\n"), WorkflowParseError);
}

TEST(WorkflowSerialize, CanonicalFormRoundTrips) {
    for (const auto& path : files_in("workflows")) {
        auto spec = parse_workflow(read_file(path));
        auto once = serialize_workflow(spec);
        EXPECT_EQ(parse_workflow(once), spec) << path;
        EXPECT_EQ(serialize_workflow(parse_workflow(once)), once) << path;
    }
}

TEST(WorkflowSerialize, QuotesStringsThatLookLikeOtherTypes) {
    auto spec = minimal();
    spec.agents[0].system_message = "null";
    spec.agents[0].role = "true";
    spec.supervisors[0].system_message = "line one\nline two: \"quoted\" \\ back";
    auto back = parse_workflow(serialize_workflow(spec));
    EXPECT_EQ(back, spec);
}

TEST(WorkflowSerialize, HashIsStable) {
    auto spec = minimal();
    EXPECT_EQ(spec_hash(spec), spec_hash(minimal()));
    EXPECT_TRUE(spec_hash(spec).starts_with("sha256:"));
    spec.agents[0].system_message += "!";
    EXPECT_NE(spec_hash(spec), spec_hash(minimal()));
}

TEST(Profile, StandaloneDocumentRoundTrips) {
    auto p = parse_profile("provider: openai_compatible\nmodel_id: m\ntemperature: 0.5\n");
    EXPECT_EQ(p.model_id, "m");
    EXPECT_DOUBLE_EQ(p.temperature, 0.5);
    EXPECT_EQ(parse_profile(serialize_profile(p)), p);
}

TEST(Validate, MalformedCorpusRejectedWithDesignatedCode) {
    auto files = files_in("malformed");
    ASSERT_GE(files.size(), 12u);
    for (const auto& path : files) {
        auto stem = path.filename().string();
        stem = stem.substr(0, stem.find('.'));
        std::transform(stem.begin(), stem.end(), stem.begin(), [](unsigned char c) { return std::toupper(c); });
        std::string got;
        try {
            auto spec = parse_workflow(read_file(path));
            auto report = validate_workflow(spec);
            for (auto code : report.codes()) got += std::string(to_string(code)) + " ";
            EXPECT_FALSE(report.ok()) << path;
            EXPECT_TRUE(report.codes().size() == 1) << path << ": " << got;
        } catch (const WorkflowParseError& e) {
            got = std::string(e.code()) + " ";
        }
        EXPECT_EQ(got, stem + " ") << path;
    }
}

TEST(Validate, DuplicateIdInConstructedSpec) {
    auto spec = minimal();
    spec.agents.push_back(spec.agents[0]);
    auto report = validate_workflow(spec);
    ASSERT_FALSE(report.ok());
    EXPECT_TRUE(report.codes().count(IssueCode::DUPLICATE_ID));
    EXPECT_EQ(report.issues[0].path, "/agents/1");
}

TEST(Validate, CycleThroughRootIsNotATree) {
    auto spec = minimal();
    spec.supervisors.push_back({"loop", "Loop.", {"solver"}});
    spec.supervisors[0].children.push_back("loop");
    EXPECT_TRUE(validate_workflow(spec).codes().count(IssueCode::NOT_A_TREE));
}

TEST(Validate, UnreachableAgentIsNotATree) {
    auto spec = minimal();
    auto stray = spec.agents[0];
    stray.id = "stray";
    spec.agents.push_back(stray);
    EXPECT_EQ(validate_workflow(spec).codes(), std::set{IssueCode::NOT_A_TREE});
}

TEST(Validate, ToolReferenceMustResolve) {
    auto spec = minimal();
    spec.agents[0].tool_ids = {"nope"};
    EXPECT_EQ(validate_workflow(spec).codes(), std::set{IssueCode::DANGLING_REF});
}

TEST(Validate, RenderListsCodePathAndMessage) {
    auto spec = minimal();
    spec.root_supervisor = "ghost";
    auto text = validate_workflow(spec).render();
    EXPECT_NE(text.find("BAD_ROOT at /root_supervisor"), std::string::npos);
}

TEST(Identifiers, Rules) {
    EXPECT_TRUE(is_valid_identifier("a"));
    EXPECT_TRUE(is_valid_identifier("Agent_1-b"));
    EXPECT_FALSE(is_valid_identifier("1a"));
    EXPECT_FALSE(is_valid_identifier(""));
    EXPECT_FALSE(is_valid_identifier("a b"));
    EXPECT_FALSE(is_valid_identifier("user"));
    EXPECT_TRUE(is_valid_field_name("answer_2"));
    EXPECT_FALSE(is_valid_field_name("Answer"));
}
