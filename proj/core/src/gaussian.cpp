#include "vndim/gaussian.hpp"

#include "vndim/errors.hpp"

namespace vndim {

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  if (b.is_zero()) fail(ErrorKind::InternalInvariant, "division by zero Gaussian rational");
  Rat n = b.norm();
  GQ c = a * b.conj();
  return {c.re / n, c.im / n};
}

GQ gq_parse(const std::string& s) {
  if (s.empty()) fail(ErrorKind::ParseError, "empty complex literal");
  // Split at the last '+'/'-' that is not leading and not right after '/'.
  // Everything ending in 'i' is an imaginary part.
  std::string t = s;
  bool has_i = t.back() == 'i';
  if (!has_i) return GQ(rat_parse(t));
  t.pop_back();
  // find split point of "a+bi" / "a-bi"
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/' && t[k - 1] != '+' && t[k - 1] != '-') {
      split = k;
      break;
    }
  }
  auto parse_im = [](std::string u) {
    if (u.empty() || u == "+") return rat(1);
    if (u == "-") return rat(-1);
    return rat_parse(u);
  };
  if (split == std::string::npos) return GQ(Rat(0), parse_im(t));
  return GQ(rat_parse(t.substr(0, split)), parse_im(t.substr(split)));
}

std::string gq_str(const GQ& v) {
  if (v.is_zero()) return "0";
  if (v.im == 0) return rat_str(v.re);
  std::string imag;
  if (v.im == 1)
    imag = "i";
  else if (v.im == -1)
    imag = "-i";
  else
    imag = rat_str(v.im) + "i";
  if (v.re == 0) return imag;
  if (v.im > 0) return rat_str(v.re) + "+" + imag;
  return rat_str(v.re) + imag;
}

}  // namespace vndim
