#pragma once

#include <stdexcept>
#include <string>

namespace kgcraft {

struct GraphError : std::runtime_error {
    explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

struct PerceptionError : std::runtime_error {
    explicit PerceptionError(const std::string& what) : std::runtime_error(what) {}
};

struct ActionParseError : std::runtime_error {
    explicit ActionParseError(const std::string& what) : std::runtime_error(what) {}
};

struct SkillError : std::runtime_error {
    explicit SkillError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PolicyError : std::runtime_error {
    explicit PolicyError(const std::string& what) : std::runtime_error(what) {}
};

// Transport-level failure talking to a remote policy endpoint (after retries).
struct TransportError : PolicyError {
    explicit TransportError(const std::string& what) : PolicyError(what) {}
};

}  // namespace kgcraft
