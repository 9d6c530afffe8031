#include "weave/util/clock.hpp"

namespace weave {
namespace {

class SystemClock final : public Clock {
public:
    std::chrono::system_clock::time_point now() const override { return std::chrono::system_clock::now(); }
};

class FrozenClock final : public Clock {
public:
    std::chrono::system_clock::time_point now() const override { return {}; }
};

}  // namespace

const Clock& system_clock() {
    static const SystemClock clock;
    return clock;
}

const Clock& frozen_clock() {
    static const FrozenClock clock;
    return clock;
}

}  // namespace weave
