#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "wpn/arith.hpp"
#include "wpn/error.hpp"

namespace wpn {

/// Working precision for high-precision reals: 256 bits, about 77 digits.
inline constexpr mpfr_prec_t kRealPrecision = 256;

/// Copyable RAII wrapper over an MPFR value, round-to-nearest.
class Real {
 public:
  Real() { mpfr_init2(v_, kRealPrecision); mpfr_set_zero(v_, 1); }
  Real(long v) : Real() { mpfr_set_si(v_, v, MPFR_RNDN); }
  explicit Real(const mpq_class& q) : Real() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  explicit Real(const mpz_class& z) : Real() { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  Real(const Real& o) : Real() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept : Real() { mpfr_swap(v_, o.v_); }
  Real& operator=(Real o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  static Real from_u64(u64 v) { return Real(mpz_class(static_cast<unsigned long>(v))); }

  /// Parses a decimal ("1.7", "1e-6", ...) or an exact ratio "p/q".
  static Real parse(std::string_view text) {
    Real r;
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpq_class q;
      if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        fail(ErrorKind::invalid_argument, "malformed ratio: '" + s + "'");
      q.canonicalize();
      return Real(q);
    }
    char* end = nullptr;
    if (s.empty()) fail(ErrorKind::invalid_argument, "empty real");
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end != s.c_str() + s.size()) fail(ErrorKind::invalid_argument, "malformed real: '" + s + "'");
    return r;
  }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Fixed-point text with `digits` places after the point.
  std::string to_fixed(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", digits, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  /// Scientific text with `digits` significant digits.
  std::string to_scientific(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend Real operator+(const Real& x, const Real& y) { Real r; mpfr_add(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& x, const Real& y) { Real r; mpfr_sub(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& x, const Real& y) { Real r; mpfr_mul(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& x, const Real& y) { Real r; mpfr_div(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
  Real& operator+=(const Real& y) { mpfr_add(v_, v_, y.v_, MPFR_RNDN); return *this; }

  friend int cmp(const Real& x, const Real& y) { return mpfr_cmp(x.v_, y.v_); }
  friend bool operator<(const Real& x, const Real& y) { return cmp(x, y) < 0; }
  friend bool operator<=(const Real& x, const Real& y) { return cmp(x, y) <= 0; }
  friend bool operator>(const Real& x, const Real& y) { return cmp(x, y) > 0; }
  friend bool operator==(const Real& x, const Real& y) { return cmp(x, y) == 0; }

  friend Real abs(const Real& x) { Real r; mpfr_abs(r.v_, x.v_, MPFR_RNDN); return r; }
  friend Real log(const Real& x) { Real r; mpfr_log(r.v_, x.v_, MPFR_RNDN); return r; }
  friend Real pow(const Real& x, const Real& y) { Real r; mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

/// Decimal text of an exact rational with `digits` places after the point.
inline std::string to_fixed(const mpq_class& q, int digits) { return Real(q).to_fixed(digits); }

inline double to_double(const mpq_class& q) { return Real(q).to_double(); }

}  // namespace wpn
