#pragma once

#include <stdexcept>
#include <string>

namespace lacelab {

// Invalid input. Carries the offending parameter name and the module that
// rejected it so the CLI can report a machine-readable error.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string module, std::string field, const std::string& message)
      : std::invalid_argument(message), module_(std::move(module)), field_(std::move(field)) {}
  const std::string& module() const noexcept { return module_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string module_;
  std::string field_;
};

// A numerical certificate could not be met: truncation tail too large,
// quadrature residual above threshold, divergent series, ...
class CertificateError : public std::runtime_error {
 public:
  CertificateError(std::string module, std::string quantity, double value, double limit,
                   const std::string& message)
      : std::runtime_error(message),
        module_(std::move(module)),
        quantity_(std::move(quantity)),
        value_(value),
        limit_(limit) {}
  const std::string& module() const noexcept { return module_; }
  const std::string& quantity() const noexcept { return quantity_; }
  double value() const noexcept { return value_; }
  double limit() const noexcept { return limit_; }

 private:
  std::string module_;
  std::string quantity_;
  double value_;
  double limit_;
};

inline void require(bool ok, const char* module, const char* field, const std::string& message) {
  if (!ok) throw DomainError(module, field, message);
}

}  // namespace lacelab
