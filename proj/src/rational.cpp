#include "corolla/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace corolla {

Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class v;
  if (v.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  v.canonicalize();
  if (v.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  return Rat(v);
}

Rat Rat::factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rat(mpq_class(f));
}

Rat Rat::binomial(unsigned n, unsigned k) {
  if (k > n) return Rat(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rat(mpq_class(b));
}

std::string Rat::str() const {
  return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

}  // namespace corolla
