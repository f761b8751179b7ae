#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nippaudit {

// Argument outside the domain of a number-theoretic primitive (zero, non-prime, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateForm : public DomainError {
public:
    using DomainError::DomainError;
};

class NotPositiveDefinite : public DomainError {
public:
    using DomainError::DomainError;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No calibration entry exists for the requested prime / valuation profile.
class Uncalibrated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(format(source, line, column, what)), source_(source), line_(line), column_(column) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& source, std::size_t line, std::size_t column,
                              const std::string& what) {
        std::string out = source.empty() ? std::string("<input>") : source;
        if (line > 0) out += ":" + std::to_string(line);
        if (column > 0) out += ":" + std::to_string(column);
        return out + ": " + what;
    }

    std::string source_;
    std::size_t line_;
    std::size_t column_;
};

// Dataset-level inconsistency (ordinal gaps, orphaned appendix records).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nippaudit
