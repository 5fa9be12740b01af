#include "vndim/rational.hpp"

#include "vndim/errors.hpp"

namespace vndim {

Rat rat_parse(const std::string& s) {
  if (s.empty()) fail(ErrorKind::ParseError, "empty rational literal");
  for (char c : s) {
    if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
      fail(ErrorKind::ParseError, "bad rational literal '" + s + "'");
  }
  std::string t = s[0] == '+' ? s.substr(1) : s;  // gmp rejects a leading '+'
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), t.c_str(), 10) != 0)
    fail(ErrorKind::ParseError, "bad rational literal '" + s + "'");
  if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0)
    fail(ErrorKind::ParseError, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string rat_decimal(const Rat& r, int digits) {
  Int num = r.get_num();
  Int den = r.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // round(|r| * 10^digits), half away from zero
  Int scaled = num * scale;
  Int q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  if (rem * 2 >= den) q += 1;
  Int ip = q / scale;
  Int fp = q % scale;
  std::string frac = fp.get_str();
  frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
  std::string out = (neg && (ip != 0 || fp != 0)) ? "-" : "";
  out += ip.get_str();
  out += ".";
  out += frac;
  return out;
}

Rat rat_pow(const Rat& r, std::uint64_t n) {
  Rat acc = 1;
  Rat base = r;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

Int rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), mpq_numref(r.get_mpq_t()), mpq_denref(r.get_mpq_t()));
  return q;
}

}  // namespace vndim
