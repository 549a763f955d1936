#include "qdhom/log.hpp"

#include <iostream>
#include <mutex>

namespace qdhom::log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& sink_slot() {
    static Sink s;
    return s;
}

}  // namespace

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (sink_slot()) {
        sink_slot()(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

Sink set_warning_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(sink_slot());
    sink_slot() = std::move(sink);
    return previous;
}

}  // namespace qdhom::log
