#include "rebalance/log.hpp"

#include <iostream>
#include <mutex>

namespace rebalance {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

WarningSink& current_sink() {
    static WarningSink sink;
    return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
    std::lock_guard lock(sink_mutex());
    WarningSink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) {
        current_sink()(message);
    } else {
        std::clog << "warning: " << message << '\n';
    }
}

}  // namespace rebalance
