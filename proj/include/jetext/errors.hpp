#pragma once

#include <stdexcept>
#include <string>

namespace jetext {

// Invalid configuration or input (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant the pipeline guarantees was observed broken (CLI exit code 3).
class invariant_error : public std::runtime_error {
public:
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// Input exceeds a documented capacity limit (CLI exit code 4).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jetext
