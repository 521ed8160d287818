#include "harmtree/rational.hpp"

#include <cctype>

namespace harmtree {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' ||
      den.front() == '+') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str(10);
}

double approx(const Rational& q) { return q.get_d(); }

Rational pow2(long e) {
  Rational r;
  mpz_class p = 1;
  const unsigned long mag = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), mag);
  if (e >= 0) {
    r = Rational(p);
  } else {
    r = Rational(mpz_class(1), p);
  }
  r.canonicalize();
  return r;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational bounded(const Rational& t) { return Rational(t / (1 + t)); }

std::size_t hash_value(const Rational& q) noexcept {
  std::size_t seed = 0;
  auto mix = [&seed](mpz_srcptr z) {
    const std::size_t n = mpz_size(z);
    hash_combine(seed, n);
    hash_combine(seed, static_cast<std::size_t>(mpz_sgn(z) + 1));
    for (std::size_t i = 0; i < n; ++i) {
      hash_combine(seed, static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
    }
  };
  mix(q.get_num_mpz_t());
  mix(q.get_den_mpz_t());
  return seed;
}

}  // namespace harmtree
