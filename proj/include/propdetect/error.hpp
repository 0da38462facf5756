#pragma once

#include <stdexcept>
#include <string>

namespace propdetect {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (JSONL, word-vector text, binary artifacts).
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input violating a documented invariant
// (duplicate ids, unknown sources, dimension mismatches, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Annotation label not present in the technique registry.
struct TaxonomyError : Error {
  using Error::Error;
};

// Transport-level failure talking to the annotation service.
struct NetworkError : Error {
  using Error::Error;
};

// Syntactically valid HTTP response that does not match the contract.
struct ProtocolError : Error {
  using Error::Error;
};

// Run configuration problems; message lists every violation.
struct ConfigError : Error {
  using Error::Error;
};

// Filesystem-level failure (missing file, short read, write failure).
struct IoError : Error {
  using Error::Error;
};

}  // namespace propdetect
