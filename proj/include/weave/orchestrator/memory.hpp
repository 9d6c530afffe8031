#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace weave::orchestrator {

enum class AccessMode { read, write };

struct AccessRecord {
    std::string actor;
    std::string key;
    AccessMode mode;
    bool allowed;

    bool operator==(const AccessRecord&) const = default;
};

struct MemoryEntry {
    std::string value;
    std::string writer;
    std::set<std::string> readable_by;

    bool operator==(const MemoryEntry&) const = default;
};

class MemoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AccessDenied : public MemoryError {
public:
    using MemoryError::MemoryError;
};

class MissingKey : public MemoryError {
public:
    using MemoryError::MemoryError;
};

/// Shared state for one run with per-entry read ACLs.
///
/// Read succeeds iff the actor wrote the entry or is listed in its
/// `readable_by`. Writes create an entry owned by the writer; overwriting an
/// entry owned by someone else is denied. Every access is logged, and a denied
/// access changes nothing but the log.
class MemoryStore {
public:
    MemoryStore() = default;
    /// Restricts accessors to `actors` (the ids declared by the workflow).
    explicit MemoryStore(std::set<std::string> actors) : actors_(std::move(actors)) {}

    std::string read(const std::string& actor, const std::string& key);
    void write(const std::string& actor, const std::string& key, std::string value, std::set<std::string> readable_by);

    static bool may_read(const MemoryEntry& entry, const std::string& actor);
    static bool may_write(const MemoryEntry* existing, const std::string& actor);

    const std::map<std::string, MemoryEntry>& entries() const noexcept { return entries_; }
    const std::vector<AccessRecord>& access_log() const noexcept { return log_; }
    /// SHA-256 over the entries only (the log is excluded).
    std::string digest() const;

private:
    void check_actor(const std::string& actor) const;

    std::set<std::string> actors_;
    std::map<std::string, MemoryEntry> entries_;
    std::vector<AccessRecord> log_;
};

inline std::string memory_read(MemoryStore& store, const std::string& actor, const std::string& key) {
    return store.read(actor, key);
}

inline void memory_write(MemoryStore& store, const std::string& actor, const std::string& key, std::string value,
                         std::set<std::string> readable_by) {
    store.write(actor, key, std::move(value), std::move(readable_by));
}

}  // namespace weave::orchestrator
