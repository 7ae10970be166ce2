#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace graphfair {

using Rational = mpq_class;

// Accepts "7", "-3", "2/5" and decimals such as "0.125"; conversion is exact.
Rational parse_rational(std::string_view text);

// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

}  // namespace graphfair
