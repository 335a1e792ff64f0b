#ifndef VECOFFLOAD_ERRORS_HPP
#define VECOFFLOAD_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vecoffload {

// Scenario/experiment document could not be parsed or violates the schema.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error("config error [" + key + "]: " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class UnknownPresetError : public std::runtime_error {
public:
    explicit UnknownPresetError(const std::string& name)
        : std::runtime_error("unknown scenario preset: " + name) {}
};

// Geometric-sum convergence preconditions of the tight failure form do not hold.
class ConvergenceViolated : public std::runtime_error {
public:
    explicit ConvergenceViolated(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive search would enumerate more points than the caller allowed.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t points, const std::string& what)
        : std::runtime_error(what), points_(points) {}
    std::uint64_t points() const noexcept { return points_; }

private:
    std::uint64_t points_;
};

class DimensionMismatch : public std::runtime_error {
public:
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

class LpError : public std::runtime_error {
public:
    explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vecoffload

#endif  // VECOFFLOAD_ERRORS_HPP
