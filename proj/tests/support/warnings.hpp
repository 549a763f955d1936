#pragma once

#include "qdhom/log.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace test_support {

// Collects library warnings for the lifetime of the object.
struct WarningCapture {
    std::vector<std::string> messages;
    qdhom::log::Sink previous;
    WarningCapture() {
        previous = qdhom::log::set_warning_sink(
            [this](std::string_view m) { messages.emplace_back(m); });
    }
    ~WarningCapture() { qdhom::log::set_warning_sink(previous); }
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    bool contains(std::string_view needle) const {
        for (const auto& m : messages)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }
};

}  // namespace test_support
