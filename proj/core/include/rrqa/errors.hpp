#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrqa {

/// Base of every error raised by the library. Callers that only need a
/// message can catch this; the subclasses exist so tests and the CLI can
/// tell failure modes apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Reasoning-state machine
class StateMachineError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

// Backend failures. Each names the endpoint and attempt count in its message.
class BackendError : public Error {
public:
    BackendError(const std::string& what, std::string endpoint, int attempts)
        : Error(what), endpoint_(std::move(endpoint)), attempts_(attempts) {}

    const std::string& endpoint() const noexcept { return endpoint_; }
    int attempts() const noexcept { return attempts_; }

private:
    std::string endpoint_;
    int attempts_;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

class RateLimited : public BackendError {
public:
    using BackendError::BackendError;
};

class MalformedResponse : public BackendError {
public:
    using BackendError::BackendError;
};

class AuthError : public BackendError {
public:
    using BackendError::BackendError;
};

class ScriptExhausted : public Error {
public:
    using Error::Error;
};

class NoMatchingRule : public Error {
public:
    using Error::Error;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class ModelOutputUnparseable : public Error {
public:
    using Error::Error;
};

class RefineEmpty : public Error {
public:
    using Error::Error;
};

class AggregationEmpty : public Error {
public:
    using Error::Error;
};

// Retrieval
class DuplicateDocId : public Error {
public:
    explicit DuplicateDocId(const std::string& id)
        : Error("duplicate doc_id: " + id), doc_id_(id) {}
    const std::string& doc_id() const noexcept { return doc_id_; }

private:
    std::string doc_id_;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus contains no documents") {}
};

class IndexFormatError : public Error {
public:
    using Error::Error;
};

// Datasets and evaluation
class FileNotFound : public Error {
public:
    explicit FileNotFound(const std::string& path)
        : Error("file not found: " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::vector<std::size_t> lines)
        : Error(what), lines_(std::move(lines)) {}
    /// 1-based line numbers of the offending input rows.
    const std::vector<std::size_t>& lines() const noexcept { return lines_; }

private:
    std::vector<std::size_t> lines_;
};

class UnmatchedTrace : public Error {
public:
    explicit UnmatchedTrace(std::vector<std::string> ids);
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

}  // namespace rrqa
