#pragma once

#include <stdexcept>
#include <string>

namespace credlens {

// Base class for all library errors. Subclasses mirror the failure
// categories surfaced by the public API so callers can discriminate.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or missing file/directory. Message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed record content. Message names the record id and field.
class ParseError : public Error {
public:
    using Error::Error;
};

// Corpus-level consistency violation (e.g. duplicate article id).
class StructuralError : public Error {
public:
    using Error::Error;
};

// Invalid configuration or resource (e.g. empty dictionary).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Sample fails a statistical precondition (size range, zero variance).
class RangeError : public Error {
public:
    using Error::Error;
};

// Target article found inside its own history reference set.
class LeakageError : public Error {
public:
    using Error::Error;
};

// Training cannot proceed (single-class labels, bad fold counts).
class TrainingError : public Error {
public:
    using Error::Error;
};

// Non-finite or otherwise unusable feature value. Message names the feature.
class DataError : public Error {
public:
    using Error::Error;
};

// Prediction input schema does not match the training schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Bad command line usage; maps to exit code 2 in the CLI.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace credlens
