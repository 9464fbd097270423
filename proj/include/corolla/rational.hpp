#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace corolla {

// Exact rational scalar. Always reduced, denominator positive; no rounding
// anywhere in the library.
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}
  Rat(long n, long d) : v_(n, d) { v_.canonicalize(); }
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  static Rat parse(const std::string& s);  // "p/q" or "p"

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { v_ /= o.v_; return *this; }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

  static Rat factorial(unsigned n);
  static Rat binomial(unsigned n, unsigned k);

  // "p/q" when q != 1, else "p"
  std::string str() const;

  const mpq_class& raw() const { return v_; }

private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace corolla
