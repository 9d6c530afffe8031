#include <gtest/gtest.h>

#include <yaml-cpp/yaml.h>

#include "test_support.hpp"
#include "weave/util/clock.hpp"
#include "weave/util/hash.hpp"
#include "weave/util/text.hpp"
#include "weave/util/yaml_json.hpp"

using namespace weave;

TEST(Hash, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, TrimAndCollapse) {
    EXPECT_EQ(text::trim("  a b \n"), "a b");
    EXPECT_EQ(text::collapse_whitespace("  a \t\n b  c "), "a b c");
    EXPECT_EQ(text::to_lower_ascii("MiXeD 123"), "mixed 123");
}

TEST(Text, SplitLinesHandlesCrLf) {
    auto lines = text::split_lines("a\r\nb\nc");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "a");
    EXPECT_EQ(lines[2], "c");
}

TEST(Text, TruncateKeepsUtf8Intact) {
    const std::string s = "aº";  // 'º' is two bytes
    EXPECT_EQ(text::truncate(s, 10), s);
    EXPECT_EQ(text::truncate(s, 2), "a...");
}

TEST(Text, FencedBlocks) {
    auto blocks = text::fenced_blocks("prose\n```yaml\na: 1\n```\nmore\n```directive\nkind: final\n```\n");
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks[0].info, "yaml");
    EXPECT_EQ(blocks[0].body, "a: 1\n");
    EXPECT_EQ(blocks[1].info, "directive");
    EXPECT_EQ(blocks[1].line, 6u);
}

TEST(YamlJson, TypesPlainScalarsOnly) {
    auto j = yaml_to_json(YAML::Load("a: 1\nb: \"1\"\nc: true\nd: null\ne: 1.5\nf: [x, 'y']"));
    EXPECT_TRUE(j["a"].is_number_integer());
    EXPECT_TRUE(j["b"].is_string());
    EXPECT_TRUE(j["c"].is_boolean());
    EXPECT_TRUE(j["d"].is_null());
    EXPECT_DOUBLE_EQ(j["e"].get<double>(), 1.5);
    EXPECT_EQ(j["f"][1], "y");
}

TEST(File, WriteCreatesParentsAndRoundTrips) {
    weave::testing::TempDir dir;
    const auto path = dir / "a/b/c.txt";
    write_file(path, "hello");
    EXPECT_EQ(read_file(path), "hello");
    EXPECT_THROW(read_file(dir / "missing.txt"), FileError);
}

TEST(Clock, FrozenClockNeverAdvances) {
    const auto t = frozen_clock().now();
    EXPECT_EQ(elapsed(frozen_clock(), t).count(), 0);
}
