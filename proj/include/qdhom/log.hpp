#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace qdhom::log {

// Non-fatal diagnostics. Default sink writes "warning: ..." to stderr.
void warn(std::string_view message);

using Sink = std::function<void(std::string_view)>;
// Returns the previous sink. Passing an empty function restores stderr.
Sink set_warning_sink(Sink sink);

}  // namespace qdhom::log
