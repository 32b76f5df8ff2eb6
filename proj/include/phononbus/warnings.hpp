#pragma once

#include <string>
#include <utility>
#include <vector>

namespace phononbus {

// Collects non-fatal diagnostics (regime violations, marginal parameters).
// Library code never prints; callers decide what to do with the messages.
struct Warnings {
  std::vector<std::string> messages;

  void add(std::string msg) { messages.push_back(std::move(msg)); }
  bool empty() const { return messages.empty(); }
  std::size_t size() const { return messages.size(); }
};

// Convenience for optional sinks: a null sink silently drops the message.
inline void warn(Warnings* sink, std::string msg) {
  if (sink != nullptr) sink->add(std::move(msg));
}

}  // namespace phononbus
