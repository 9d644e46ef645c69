#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hstab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or mismatched arguments (family mismatch, bad forest, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded. `size` is the offending quantity.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t size)
      : Error(what + " (size " + std::to_string(size) + ")"), size_(size) {}
  std::uint64_t size() const { return size_; }

 private:
  std::uint64_t size_;
};

// A computed object violates a structural identity (e.g. d∘d != 0).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Transitivity / stabilizer hypotheses of the destabilization complex fail.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace hstab
