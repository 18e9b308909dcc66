#include "lagro/rational.hpp"

#include <cctype>

#include "lagro/error.hpp"

namespace lagro {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer_literal(num)) {
    throw InputError("not a rational literal: \"" + std::string(text) + "\"");
  }
  std::string num_str(num[0] == '+' ? num.substr(1) : num);
  if (slash == std::string_view::npos) return Scalar(Integer(num_str));

  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("not a rational literal: \"" + std::string(text) + "\"");
  }
  Integer d{std::string(den)};
  if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  Scalar out(Integer(num_str), d);
  out.canonicalize();
  return out;
}

std::string to_string(const Scalar& value) { return value.get_str(); }

bool is_integer(const Scalar& value) { return value.get_den() == 1; }

Scalar abs(const Scalar& value) { return value < 0 ? Scalar(-value) : value; }

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Scalar power(const Scalar& base, unsigned exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Scalar out(num, den);
  out.canonicalize();
  return out;
}

Integer floor(const Scalar& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Integer ceil(const Scalar& value) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

}  // namespace lagro
