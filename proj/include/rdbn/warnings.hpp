#pragma once

#include <functional>
#include <string>

namespace rdbn {

using WarnHandler = std::function<void(const std::string&)>;

/// Emit a non-fatal diagnostic. Thread-safe. Default handler writes
/// "rdbn: warning: ..." to stderr; tests may install their own sink.
void warn(const std::string& message);

/// Replace the warning sink; returns the previous handler.
WarnHandler set_warn_handler(WarnHandler handler);

}  // namespace rdbn
