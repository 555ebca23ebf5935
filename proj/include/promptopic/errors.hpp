#pragma once

#include <stdexcept>
#include <string>

namespace promptopic {

/// Base class for all pipeline errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file / CLI argument problems. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class MissingLabel : public Error {
public:
    using Error::Error;
};

class MissingTimestamp : public Error {
public:
    using Error::Error;
};

/// Model output that cannot be parsed (majority of lines invalid, or zero blocks).
class MalformedResponse : public Error {
public:
    using Error::Error;
};

/// Provider gave up after exhausting the configured retry budget.
class ProviderExhausted : public Error {
public:
    using Error::Error;
};

/// 401/403 from the backend; never retried.
class AuthError : public Error {
public:
    using Error::Error;
};

/// Input would exceed the provider's declared context window.
class ContextOverflow : public Error {
public:
    using Error::Error;
};

class EmptyAfterNormalization : public Error {
public:
    using Error::Error;
};

class EmptySubtopics : public Error {
public:
    using Error::Error;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class UnknownSeed : public Error {
public:
    using Error::Error;
};

}  // namespace promptopic
