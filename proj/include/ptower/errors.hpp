#pragma once

#include <stdexcept>
#include <string>

namespace ptower {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// padic-core
class PreconditionViolation : public Error { using Error::Error; };
class NonUnit : public Error { using Error::Error; };

// iwasawa-algebra
class PrecisionExhausted : public Error { using Error::Error; };
class InfiniteQuotient : public Error { using Error::Error; };

// module-algebra
class WellDefinednessViolation : public Error { using Error::Error; };
class NotAutomorphism : public Error { using Error::Error; };
class OrderNotPPower : public Error { using Error::Error; };

// tower-sim
class LevelOutOfRange : public Error { using Error::Error; };
class NoStableFit : public Error { using Error::Error; };

/// Raised when a computation contradicts a proven identity. Always an
/// implementation bug or corrupted input, never an expected outcome.
class TheoremViolation : public Error { using Error::Error; };

// galois-descent
class InvalidGroupTable : public Error { using Error::Error; };
class ActionNotHomomorphism : public Error { using Error::Error; };
class BudgetExceeded : public Error { using Error::Error; };
class GenerationFailed : public Error { using Error::Error; };

// cli
class SchemaError : public Error { using Error::Error; };
class RamHypNotAsserted : public Error { using Error::Error; };
class MissingLevels : public Error { using Error::Error; };

}  // namespace ptower
