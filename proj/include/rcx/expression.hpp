#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rcx/complexity.hpp"

// Textual syntax for complexity functions: sums of factor products
//   c * n^p * log[l]^j(n) * b^n * gamma(n)^g
// with every factor optional, e.g. "5.23e-9 * n^3" or "408 * n^2 * gamma(n+1)".

namespace rcx {

class ExpressionError : public std::runtime_error {
  public:
    ExpressionError(const std::string& message, std::size_t position);
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

ComplexityFunction parse_complexity_expression(std::string_view text);

// Canonical text form; parse(render(f)) == f.
std::string render(const ComplexityFunction& f);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

} // namespace rcx
