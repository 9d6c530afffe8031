#include "weave/eval/dataset.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "weave/util/file.hpp"
#include "weave/util/text.hpp"

namespace weave::eval {
namespace {

std::string field(const nlohmann::json& obj, const char* name, std::size_t line) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) {
        throw DatasetError(line, std::string("missing field `") + name + "`");
    }
    std::string value;
    if (it->is_string()) {
        value = it->get<std::string>();
    } else if (it->is_number_integer() && std::string_view(name) == "id") {
        value = it->dump();
    } else {
        throw DatasetError(line, std::string("field `") + name + "` must be a string");
    }
    if (text::trim(value).empty()) {
        throw DatasetError(line, std::string("field `") + name + "` is empty");
    }
    return value;
}

}  // namespace

Dataset parse_dataset(std::string_view jsonl) {
    Dataset out;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (auto line : text::split_lines(jsonl)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded()) throw DatasetError(line_no, "not valid JSON");
        if (!obj.is_object()) throw DatasetError(line_no, "expected a JSON object");
        QaPair pair{field(obj, "id", line_no), field(obj, "question", line_no), field(obj, "answer", line_no)};
        if (!ids.insert(pair.id).second) {
            throw DatasetError(line_no, "duplicate id `" + pair.id + "`");
        }
        out.push_back(std::move(pair));
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
    auto contents = read_file(path);
    try {
        return parse_dataset(contents);
    } catch (const DatasetError& e) {
        throw DatasetError(e.line(), e.detail(), path.string());
    }
}

std::string dump_dataset(const Dataset& dataset) {
    std::string out;
    for (const auto& p : dataset) {
        nlohmann::ordered_json j = {{"id", p.id}, {"question", p.question}, {"answer", p.answer}};
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace weave::eval
