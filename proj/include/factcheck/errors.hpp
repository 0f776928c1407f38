#pragma once

#include <stdexcept>
#include <string>

namespace factcheck {

/// Input could not be parsed (malformed JSON, unreadable line, ...).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input parsed but violates a domain rule (unknown label, bad rating, id mismatch).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Missing or inconsistent configuration, raised before any network traffic.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An embedding or chat provider failed after exhausting its retries.
class ProviderError : public std::runtime_error {
public:
    ProviderError(const std::string& what, int status = 0, std::string body_excerpt = {})
        : std::runtime_error(what), status_(status), body_excerpt_(std::move(body_excerpt)) {}

    int status() const noexcept { return status_; }
    const std::string& body_excerpt() const noexcept { return body_excerpt_; }

private:
    int status_;
    std::string body_excerpt_;
};

/// The LLM answer could not be turned into a GeneratorOutput.
class OutputParseError : public std::runtime_error {
public:
    OutputParseError(const std::string& what, std::string raw_text)
        : std::runtime_error(what), raw_text_(std::move(raw_text)) {}

    const std::string& raw_text() const noexcept { return raw_text_; }

private:
    std::string raw_text_;
};

}  // namespace factcheck
