#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnrec {

/// Base of every error the library throws. The message is surfaced verbatim by the CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name)
        : Error("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class TableMismatch : public Error {
public:
    TableMismatch() : Error("operands belong to different variable tables") {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error("parse error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class InconsistentSystem : public Error {
public:
    InconsistentSystem(const std::string& a, const std::string& b)
        : Error("inconsistent system: mixed partials disagree for coordinates '" + a + "' and '" + b + "'"),
          first_(a), second_(b) {}
    explicit InconsistentSystem(const std::string& what) : Error("inconsistent system: " + what) {}
    const std::string& first() const noexcept { return first_; }
    const std::string& second() const noexcept { return second_; }

private:
    std::string first_, second_;
};

class SeedNotCasimir : public Error {
public:
    SeedNotCasimir() : Error("seed is not a Casimir of the first Poisson structure") {}
};

class NoSolutionWithinDegree : public Error {
public:
    NoSolutionWithinDegree(int step, int degree)
        : Error("Lenard step " + std::to_string(step) + " has no polynomial solution of degree <= " +
                std::to_string(degree)) {}
};

class AmbiguousSolution : public Error {
public:
    AmbiguousSolution(int step, std::size_t kernel_dim)
        : Error("Lenard step " + std::to_string(step) + " is ambiguous: kernel dimension " +
                std::to_string(kernel_dim)),
          kernel_dim_(kernel_dim) {}
    std::size_t kernel_dimension() const noexcept { return kernel_dim_; }

private:
    std::size_t kernel_dim_;
};

class WindowTooSmall : public Error {
public:
    WindowTooSmall(int have, int need)
        : Error("truncation window too small: max orbit " + std::to_string(have) + ", need at least " +
                std::to_string(need)),
          required_(need) {}
    explicit WindowTooSmall(const std::string& what) : Error("truncation window too small: " + what) {}
    int required() const noexcept { return required_; }

private:
    int required_ = 0;
};

/// Model document violated its schema; `path` addresses the offending node (e.g. "/variables/3/kind").
class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : Error("schema error at " + path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace pnrec
