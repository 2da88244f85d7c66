#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace rebalance {

using WarningSink = std::function<void(std::string_view)>;

// Warnings go to std::clog unless a sink is installed. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

/// Installs a sink for the lifetime of the guard.
class ScopedWarningSink {
public:
    explicit ScopedWarningSink(WarningSink sink) : previous_(set_warning_sink(std::move(sink))) {}
    ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
    ScopedWarningSink(const ScopedWarningSink&) = delete;
    ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

private:
    WarningSink previous_;
};

}  // namespace rebalance
