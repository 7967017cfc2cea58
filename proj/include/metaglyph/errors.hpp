#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metaglyph {

// Parse failure with the byte offset of the offending input.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::string message, std::size_t byte_offset)
        : std::runtime_error(message + " (byte " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operator glyph reached a code path that has no semantics for it.
class UnsupportedOperator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownVerb : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownGlyph : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a compiled control prompt fails the token-parity check.
class TokenMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace metaglyph
