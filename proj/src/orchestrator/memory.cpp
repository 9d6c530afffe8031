#include "weave/orchestrator/memory.hpp"

#include <nlohmann/json.hpp>

#include "weave/util/hash.hpp"

namespace weave::orchestrator {

void MemoryStore::check_actor(const std::string& actor) const {
    if (!actors_.empty() && !actors_.count(actor)) {
        throw MemoryError("actor `" + actor + "` is not declared in the workflow");
    }
}

bool MemoryStore::may_read(const MemoryEntry& entry, const std::string& actor) {
    return entry.writer == actor || entry.readable_by.count(actor) > 0;
}

bool MemoryStore::may_write(const MemoryEntry* existing, const std::string& actor) {
    return existing == nullptr || existing->writer == actor;
}

std::string MemoryStore::read(const std::string& actor, const std::string& key) {
    check_actor(actor);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        log_.push_back({actor, key, AccessMode::read, false});
        throw MissingKey("no memory entry `" + key + "`");
    }
    if (!may_read(it->second, actor)) {
        log_.push_back({actor, key, AccessMode::read, false});
        throw AccessDenied("`" + actor + "` may not read `" + key + "`");
    }
    log_.push_back({actor, key, AccessMode::read, true});
    return it->second.value;
}

void MemoryStore::write(const std::string& actor, const std::string& key, std::string value,
                        std::set<std::string> readable_by) {
    check_actor(actor);
    auto it = entries_.find(key);
    const MemoryEntry* existing = it == entries_.end() ? nullptr : &it->second;
    if (!may_write(existing, actor)) {
        log_.push_back({actor, key, AccessMode::write, false});
        throw AccessDenied("`" + actor + "` may not overwrite `" + key + "` owned by `" + existing->writer + "`");
    }
    entries_[key] = MemoryEntry{std::move(value), actor, std::move(readable_by)};
    log_.push_back({actor, key, AccessMode::write, true});
}

std::string MemoryStore::digest() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, e] : entries_) {
        j[key] = {{"value", e.value}, {"writer", e.writer}, {"readable_by", e.readable_by}};
    }
    return sha256_hex(j.dump());
}

}  // namespace weave::orchestrator
