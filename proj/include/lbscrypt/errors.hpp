#pragma once

#include <stdexcept>
#include <string>

namespace lbscrypt {

/// Malformed input: bad config field, out-of-range plaintext, wrong lengths.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Homomorphic evaluation refused: key mismatch, depth or noise exhausted.
class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepthExhausted : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

class NoiseBudgetExhausted : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

class KeyMismatch : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

/// A cryptanalysis stage failed; `stage()` names which one.
class AttackError : public std::runtime_error {
 public:
  AttackError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace lbscrypt
