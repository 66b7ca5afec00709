#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webgeo/errors.hpp"

namespace webgeo {

/// Variable assignment used by numeric evaluation. Insertion order is kept;
/// lookups are linear, which wins for the handful of variables a system has.
class Env {
 public:
  Env() = default;
  Env(std::initializer_list<std::pair<std::string, double>> init) {
    for (auto& kv : init) set(kv.first, kv.second);
  }

  void set(std::string name, double value) {
    for (auto& slot : slots_)
      if (slot.first == name) {
        slot.second = value;
        return;
      }
    slots_.emplace_back(std::move(name), value);
  }

  const double* find(std::string_view name) const {
    for (auto& slot : slots_)
      if (slot.first == name) return &slot.second;
    return nullptr;
  }

  double at(std::string_view name) const {
    if (const double* v = find(name)) return *v;
    throw UnknownVariable(std::string(name), 0);
  }

  /// "t=1.5, x1=2" — used in DomainFault messages.
  std::string describe() const {
    std::string out;
    for (const auto& slot : slots_) {
      if (!out.empty()) out += ", ";
      out += slot.first + "=" + std::to_string(slot.second);
    }
    return out;
  }

  const std::vector<std::pair<std::string, double>>& slots() const {
    return slots_;
  }

 private:
  std::vector<std::pair<std::string, double>> slots_;
};

}  // namespace webgeo
