#ifndef GDO_CORE_ERRORS_HPP
#define GDO_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace gdo {

// Bad user input: malformed config, out-of-range argument, series too
// short for a metric, and so on. Maps to exit code 2 at the CLI.
class InvalidArgument : public std::runtime_error {
public:
    explicit InvalidArgument(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / environment failures. Maps to exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric sanity bound was violated mid-simulation (non-finite state,
// fractional frequency out of range, non-monotonic control time).
class SimulationFault : public std::runtime_error {
public:
    explicit SimulationFault(const std::string& msg) : std::runtime_error(msg) {}
};

// Scenario validation error carrying one message per offending field,
// each prefixed with its config path (e.g. "duts[1].archetype: ...").
class SpecError : public InvalidArgument {
public:
    explicit SpecError(std::vector<std::string> issues)
        : InvalidArgument(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "\n";
            out += s;
        }
        return out;
    }
    std::vector<std::string> issues_;
};

} // namespace gdo

#endif
