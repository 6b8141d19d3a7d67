#ifndef RETURNSTAT_ERRORS_HPP
#define RETURNSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace returnstat {

// Error categories map onto the CLI exit codes: parameter/usage errors
// exit with 2, domain errors (zero-measure cylinders, degenerate setups)
// with 3, capacity-guard violations with 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& msg) : Error(msg) {}
};

class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

}  // namespace returnstat

#endif
