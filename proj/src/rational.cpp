#include "idemcalc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace idem {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t start = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) start = 1;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!is_integer_literal(num, true) ||
      (slash != std::string_view::npos && !is_integer_literal(den, false)))
    throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");

  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class numerator(n, 10);
  mpz_class denominator = 1;
  if (slash != std::string_view::npos) {
    denominator = mpz_class(std::string(den), 10);
    if (denominator == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::size_t limb_size(const Rational& value) {
  const auto a = mpz_size(value.get_num_mpz_t());
  const auto b = mpz_size(value.get_den_mpz_t());
  return a > b ? a : b;
}

}  // namespace idem
