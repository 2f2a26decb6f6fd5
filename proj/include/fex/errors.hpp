#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fex {

// Base class for all workbench errors. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input / format problems (exit code 3).
struct ParseError : Error {
    int line = 0;
    int col = 0;
    ParseError(const std::string& what, int line_, int col_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what),
          line(line_), col(col_) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

// Bounded searches that ran out of budget (exit code 4).
struct BudgetError : Error {
    using Error::Error;
};

struct NoDifferenceFound : BudgetError {
    uint64_t bound;
    explicit NoDifferenceFound(uint64_t bound_)
        : BudgetError("no difference between sets found below bound " + std::to_string(bound_)),
          bound(bound_) {}
};

struct WidthExceeded : Error {
    explicit WidthExceeded(const std::string& what) : Error(what) {}
};

struct ExhaustedSupports : BudgetError {
    explicit ExhaustedSupports(const std::string& what) : BudgetError(what) {}
};

struct SizeOverflow : BudgetError {
    explicit SizeOverflow(const std::string& what) : BudgetError(what) {}
};

struct UnknownGenerator : Error {
    uint32_t index;
    explicit UnknownGenerator(uint32_t index_)
        : Error("unknown generator g" + std::to_string(index_)), index(index_) {}
};

struct UnboundAtom : Error {
    uint32_t index;
    explicit UnboundAtom(uint32_t index_)
        : Error("atom a" + std::to_string(index_) + " not bound by the assignment"), index(index_) {}
};

struct ImproperFilter : Error {
    explicit ImproperFilter(const std::string& what) : Error(what) {}
};

struct ClosureBudgetExceeded : BudgetError {
    uint32_t rounds;
    explicit ClosureBudgetExceeded(uint32_t rounds_)
        : BudgetError("witness closure did not stabilize within " + std::to_string(rounds_) + " rounds"),
          rounds(rounds_) {}
};

struct UniverseOverflow : BudgetError {
    explicit UniverseOverflow(const std::string& what) : BudgetError(what) {}
};

struct InconsistentAssignment : Error {
    explicit InconsistentAssignment(const std::string& what) : Error(what) {}
};

struct NotAModel : Error {
    explicit NotAModel(const std::string& what) : Error(what) {}
};

struct SignatureMismatch : Error {
    explicit SignatureMismatch(const std::string& what) : Error(what) {}
};

struct FieldTooLarge : Error {
    explicit FieldTooLarge(const std::string& what) : Error(what) {}
};

}  // namespace fex
