#pragma once

#include <stdexcept>
#include <string>

namespace semsearch {

/// Failure classes for data loading and validation. Each loader reports the
/// first violation it meets and aborts; the kind tells callers (and the CLI
/// exit path) what went wrong without parsing the message.
enum class ErrorKind {
    Io,                    // file missing / unreadable
    Parse,                 // malformed line or field
    UnknownReference,      // id used before it was declared
    HierarchyCycle,        // class parent chain does not terminate
    DomainRangeViolation,  // fact endpoint class outside the relation signature
    DuplicateFact,         // repeated (subject, relation, object) triple
    DuplicateDocument,     // repeated document id in a corpus
    Format,                // structural problem (bad header, multiple roots, ...)
};

const char* to_string(ErrorKind kind);

class DataError : public std::runtime_error {
public:
    DataError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace semsearch
