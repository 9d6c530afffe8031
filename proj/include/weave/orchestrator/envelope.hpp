#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weave/util/clock.hpp"

namespace weave::orchestrator {

using Metadata = std::map<std::string, std::string>;

/// A routed message. A child envelope carries every metadata pair of its parent.
struct Envelope {
    std::string id;
    std::optional<std::string> parent_id;
    std::string sender;
    std::string recipient;
    std::string content;
    Metadata metadata;
    std::chrono::system_clock::time_point created_at;
};

/// Issues envelopes for one run. Ids are sequential ("env-1", "env-2", ...).
class MessageRouter {
public:
    explicit MessageRouter(const Clock& clock = system_clock()) : clock_(clock) {}

    Envelope open(std::string sender, std::string recipient, std::string content, Metadata metadata);

    /// New envelope replying to or delegating from `parent_id`. `extra` keys
    /// already present on the parent keep the parent's value.
    Envelope route(const std::string& parent_id, std::string sender, std::string recipient, std::string content,
                   const Metadata& extra = {});

    const Envelope& get(const std::string& id) const;
    const std::vector<Envelope>& envelopes() const noexcept { return envelopes_; }

private:
    const Clock& clock_;
    std::vector<Envelope> envelopes_;
};

}  // namespace weave::orchestrator
