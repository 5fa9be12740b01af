#pragma once

#include <string>

#include "vndim/rational.hpp"

namespace vndim {

/// Exact complex number a + b*i with rational a, b. Field arithmetic, no rounding.
struct GaussianRational {
  Rat re;
  Rat im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rat r) : re(std::move(r)), im(0) {}
  GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  static GaussianRational unit_i() { return {Rat(0), Rat(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rat norm() const { return re * re + im * im; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);

  GaussianRational& operator+=(const GaussianRational& o) { *this = *this + o; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { *this = *this - o; return *this; }
  GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }
};

using GQ = GaussianRational;

/// Parses "3", "-1/2", "i", "-i", "2i", "1+i", "-1/2+3/4i", "1-2/3i".
GQ gq_parse(const std::string& s);

/// Canonical form: "0", "a", "bi", "a+bi", "a-bi" with rational a, b.
std::string gq_str(const GQ& v);

}  // namespace vndim
