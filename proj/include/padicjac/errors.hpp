#pragma once

#include <stdexcept>
#include <string>

namespace padicjac {

// Mathematical rejection of an input or a failed convergence/consistency
// gate. `kind` is a stable machine-readable tag surfaced by the CLI.
class math_error : public std::runtime_error {
public:
    math_error(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& detail) {
    throw math_error(kind, detail);
}

// Malformed configs, bad flags, unparsable point syntax.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& detail) : std::runtime_error(detail) {}
};

} // namespace padicjac
