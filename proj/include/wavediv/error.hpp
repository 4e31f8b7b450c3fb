// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_ERROR_HPP
#define WAVEDIV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wavediv {

enum class Errc {
  unsupported_family,
  cascade_divergence,
  quadrature_underflow,
  empty_sample,
  out_of_domain_value,
  invalid_alpha,
  non_positive_density,
  non_finite_integral,
  domain_mismatch,
  sample_size_mismatch,
  missing_renyi_base,
  degenerate_variance,
  unknown_density_id,
  invalid_config,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace wavediv

#endif  // WAVEDIV_ERROR_HPP
