#pragma once

#include <stdexcept>
#include <string>

namespace anlock {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model evaluation
class InvalidParams : public Error { using Error::Error; };
class InvalidGrid : public Error { using Error::Error; };
class DegenerateModel : public Error { using Error::Error; };

// Locking
class KeyLengthMismatch : public Error { using Error::Error; };
class GenerationFailure : public Error { using Error::Error; };

// GA
class EncodingMismatch : public Error { using Error::Error; };
class InvalidConfig : public Error { using Error::Error; };
class BudgetExhausted : public Error { using Error::Error; };

// Enumeration attack
class SpecMissing : public Error { using Error::Error; };
class CandidateOverflow : public Error { using Error::Error; };
class NoMatch : public Error { using Error::Error; };

// Harness
class CapExceeded : public Error { using Error::Error; };

/// Malformed input file.
class ParseError : public Error { using Error::Error; };

}  // namespace anlock
