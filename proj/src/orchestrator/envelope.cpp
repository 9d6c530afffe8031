#include "weave/orchestrator/envelope.hpp"

#include <stdexcept>

namespace weave::orchestrator {

Envelope MessageRouter::open(std::string sender, std::string recipient, std::string content, Metadata metadata) {
    Envelope e;
    e.id = "env-" + std::to_string(envelopes_.size() + 1);
    e.sender = std::move(sender);
    e.recipient = std::move(recipient);
    e.content = std::move(content);
    e.metadata = std::move(metadata);
    e.created_at = clock_.now();
    envelopes_.push_back(e);
    return e;
}

Envelope MessageRouter::route(const std::string& parent_id, std::string sender, std::string recipient,
                              std::string content, const Metadata& extra) {
    Metadata metadata = get(parent_id).metadata;
    for (const auto& [k, v] : extra) metadata.emplace(k, v);
    Envelope e;
    e.id = "env-" + std::to_string(envelopes_.size() + 1);
    e.parent_id = parent_id;
    e.sender = std::move(sender);
    e.recipient = std::move(recipient);
    e.content = std::move(content);
    e.metadata = std::move(metadata);
    e.created_at = clock_.now();
    envelopes_.push_back(e);
    return e;
}

const Envelope& MessageRouter::get(const std::string& id) const {
    for (const auto& e : envelopes_) {
        if (e.id == id) return e;
    }
    throw std::out_of_range("unknown envelope " + id);
}

}  // namespace weave::orchestrator
