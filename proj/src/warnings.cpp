#include "rdbn/warnings.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace rdbn {

namespace {

std::mutex handler_mutex;

WarnHandler& handler_slot() {
  static WarnHandler handler = [](const std::string& msg) {
    std::cerr << "rdbn: warning: " << msg << '\n';
  };
  return handler;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(handler_mutex);
  handler_slot()(message);
}

WarnHandler set_warn_handler(WarnHandler handler) {
  std::lock_guard<std::mutex> lock(handler_mutex);
  WarnHandler previous = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return previous;
}

}  // namespace rdbn
