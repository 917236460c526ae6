#ifndef QSG_ERRORS_HPP
#define QSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qsg {

// configuration / validation problems (CLI exit code 2)
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// solver failed to reach the stopping threshold (CLI exit code 3)
struct NotConvergedError : std::runtime_error {
    explicit NotConvergedError(const std::string& msg) : std::runtime_error(msg) {}
};

// snapshot paired with a model it was not computed for (CLI exit code 4)
struct ProvenanceError : std::runtime_error {
    explicit ProvenanceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qsg

#endif // QSG_ERRORS_HPP
