#pragma once

#include <stdexcept>
#include <string>

namespace chjb {

/// Error categories; each maps to a distinct CLI exit code.
enum class ErrorKind {
    Config,        // config file parse / validation
    Expression,    // expression syntax or evaluation
    Model,         // model assumption violated (non-convex, bad table, ...)
    Range,         // argument outside a declared range
    Scheme,        // numerical scheme failure (infeasible node, divergence)
    InvalidInput,  // operation precondition violated
    Io,            // file read/write
    Unconverged,   // iteration ran out of horizon without a verdict
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    /// Nonzero process exit code for this error class.
    int exit_code() const {
        switch (kind_) {
            case ErrorKind::Config: return 3;
            case ErrorKind::Expression: return 4;
            case ErrorKind::Model: return 5;
            case ErrorKind::Range: return 6;
            case ErrorKind::Scheme: return 7;
            case ErrorKind::InvalidInput: return 8;
            case ErrorKind::Io: return 9;
            case ErrorKind::Unconverged: return 10;
        }
        return 1;
    }

    const char* kind_name() const {
        switch (kind_) {
            case ErrorKind::Config: return "config";
            case ErrorKind::Expression: return "expression";
            case ErrorKind::Model: return "model";
            case ErrorKind::Range: return "range";
            case ErrorKind::Scheme: return "scheme";
            case ErrorKind::InvalidInput: return "invalid_input";
            case ErrorKind::Io: return "io";
            case ErrorKind::Unconverged: return "unconverged";
        }
        return "error";
    }

  private:
    ErrorKind kind_;
};

}  // namespace chjb
