#pragma once

#include <stdexcept>
#include <string>

namespace sncode {

/// Closure, ambient enumeration or search budget exceeded a configured cap.
/// Callers must treat this as "no answer", never as a verdict.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// An internally produced certificate failed its own re-verification,
/// or two independent oracles disagreed.
struct verification_error : std::runtime_error {
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sncode
