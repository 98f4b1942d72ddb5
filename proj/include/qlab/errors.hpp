#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

// Input outside an operation's mathematical domain or table range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Memory, sieve-range or scan budget exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file or unknown identifier.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad command-line or configuration input.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An invariant that must hold unconditionally was observed to fail.
class PropertyFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace qlab
