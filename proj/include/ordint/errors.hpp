#pragma once

#include <stdexcept>
#include <string>

namespace ordint {

/// Base for every error raised by the library. Carries the module and the
/// operation that raised it so a CLI can surface both.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string operation, const std::string& what)
        : std::runtime_error(module + "::" + operation + ": " + what),
          module_(std::move(module)),
          operation_(std::move(operation)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string module_;
    std::string operation_;
};

/// Shape errors: dimension or space mismatch, unsupported family, wrong set kind.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A precondition stated by an operation was violated by its inputs.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A bounded search ran out of budget (bisection depth, refinement steps).
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace ordint
