#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace toolspan {

// Base for every recoverable error raised by the library. The CLI maps the
// category onto its exit code.
class Error : public std::runtime_error {
public:
    enum class Category { Config, Endpoint, Data };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class ParseError : public Error {
public:
    enum class Kind { MalformedJson, MissingField, UnknownRole };

    ParseError(Kind kind, const std::string& what)
        : Error(Category::Data, what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class UnbalancedTokens : public Error {
public:
    UnbalancedTokens(std::size_t offset, const std::string& what)
        : Error(Category::Data, what + " at byte " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class AdapterMismatch : public Error {
public:
    AdapterMismatch(std::size_t line, const std::string& what)
        : Error(Category::Data, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class RequestFailed : public Error {
public:
    explicit RequestFailed(const std::string& what) : Error(Category::Endpoint, what) {}
};

class ContextTooLong : public Error {
public:
    ContextTooLong(std::size_t size, std::size_t limit)
        : Error(Category::Data, "prompt of " + std::to_string(size) + " bytes exceeds limit of " +
                                    std::to_string(limit)) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

}  // namespace toolspan
