#include "graphfair/rational.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <cctype>

namespace graphfair {

Rational parse_rational(std::string_view text) {
  const auto fail = [&] { throw InputError("malformed number '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  std::string digits(text);
  if (const auto slash = digits.find('/'); slash != std::string::npos) {
    Rational q;
    if (q.set_str(digits, 10) != 0 || q.get_den() == 0) fail();
    q.canonicalize();
    return q;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (digits[0] == '-' || digits[0] == '+') {
    negative = digits[0] == '-';
    pos = 1;
  }
  std::string whole, frac;
  const auto dot = digits.find('.', pos);
  whole = digits.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
  if (dot != std::string::npos) frac = digits.substr(dot + 1);
  const auto all_digits = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
  };
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac)) fail();

  mpz_class numerator(whole.empty() ? std::string("0") : whole + frac, 10);
  if (whole.empty()) numerator = mpz_class(frac, 10);
  mpz_class denominator = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) denominator *= 10;
  Rational q(numerator, denominator);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace graphfair
