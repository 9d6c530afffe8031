#pragma once

#include <chrono>

namespace weave {

/// Source of wall-clock time for traces and reports. Replay runs use the
/// frozen clock so that every duration written to disk is zero.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::chrono::system_clock::time_point now() const = 0;
};

const Clock& system_clock();
const Clock& frozen_clock();

template <typename Duration = std::chrono::milliseconds>
Duration elapsed(const Clock& clock, std::chrono::system_clock::time_point since) {
    return std::chrono::duration_cast<Duration>(clock.now() - since);
}

}  // namespace weave
