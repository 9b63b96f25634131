#pragma once

// log2 of the union bound on the probability that a random A ⊆ 2^n with
// density ε misses some half-dense rectangle, evaluated as a rigorous
// interval with MPFR directed rounding.

#include <gmp.h>
#include <mpfr.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smallset/error.hpp"

namespace smallset {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr mpfr_prec_t kBoundPrecision = 256;
inline constexpr mpfr_prec_t kMaxBoundPrecision = 8192;

namespace bound_detail {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

class Quotient {
 public:
  explicit Quotient(const Rational& q) {
    mpq_init(v_);
    const std::string text = boost::multiprecision::numerator(q).str() + "/" +
                             boost::multiprecision::denominator(q).str();
    mpq_set_str(v_, text.c_str(), 10);
    mpq_canonicalize(v_);
  }
  ~Quotient() { mpq_clear(v_); }
  Quotient(const Quotient&) = delete;
  Quotient& operator=(const Quotient&) = delete;
  mpq_srcptr get() const { return v_; }

 private:
  mpq_t v_;
};

inline std::string format(mpfr_srcptr x, bool up) {
  char* raw = nullptr;
  mpfr_asprintf(&raw, up ? "%.24RUe" : "%.24RDe", x);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

// 2^(num/den) rounded in direction rnd.
inline void pow2_fraction(mpfr_ptr out, long num, unsigned long den, mpfr_rnd_t rnd) {
  mpfr_set_si(out, num, rnd);
  mpfr_div_ui(out, out, den, rnd);
  mpfr_exp2(out, out, rnd);
}

}  // namespace bound_detail

enum class BoundForm {
  Tight,         // n + 2^(3n/4+1) + 2^(n-2)·log2(1-ε)
  SevenEighths,  // 2^(7n/8) + 2^(n-2)·log2(1-ε)
  Final,         // 2^(7n/8) - ε·2^(n-2)
};

constexpr std::string_view form_name(BoundForm f) {
  switch (f) {
    case BoundForm::Tight: return "tight";
    case BoundForm::SevenEighths: return "seven_eighths";
    case BoundForm::Final: return "final";
  }
  return "?";
}

/// A closed interval [lower, upper] known to contain the exact value.
struct Enclosure {
  std::string lower;
  std::string upper;
  int sign = 0;  // -1 or +1 when decided, 0 when the interval straddles 0
  mpfr_prec_t precision = 0;
  double midpoint = 0;
};

namespace bound_detail {

inline Enclosure evaluate(std::uint64_t n, const Rational& eps, BoundForm form, mpfr_prec_t prec) {
  Real lo(prec);
  Real hi(prec);
  Real term(prec);
  const Quotient q(eps);
  for (int side = 0; side < 2; ++side) {
    const mpfr_rnd_t rnd = side == 0 ? MPFR_RNDD : MPFR_RNDU;
    mpfr_ptr acc = side == 0 ? lo.get() : hi.get();
    mpfr_set_ui(acc, 0, rnd);
    if (form == BoundForm::Tight) {
      mpfr_set_ui(term.get(), n, rnd);
      mpfr_add(acc, acc, term.get(), rnd);
      pow2_fraction(term.get(), static_cast<long>(3 * n + 4), 4, rnd);
    } else {
      pow2_fraction(term.get(), static_cast<long>(7 * n), 8, rnd);
    }
    mpfr_add(acc, acc, term.get(), rnd);
    if (form == BoundForm::Final) {
      // subtract ε·2^(n-2), rounded against the direction of acc
      const mpfr_rnd_t other = side == 0 ? MPFR_RNDU : MPFR_RNDD;
      mpfr_set_q(term.get(), q.get(), other);
      mpfr_mul_2si(term.get(), term.get(), static_cast<long>(n) - 2, other);
      mpfr_sub(acc, acc, term.get(), rnd);
    } else {
      // 1 - ε, then log2; both monotone so rounding in rnd keeps the direction
      Real one_minus(prec);
      mpfr_set_q(term.get(), q.get(), side == 0 ? MPFR_RNDU : MPFR_RNDD);
      mpfr_ui_sub(one_minus.get(), 1, term.get(), rnd);
      mpfr_log2(term.get(), one_minus.get(), rnd);
      mpfr_mul_2si(term.get(), term.get(), static_cast<long>(n) - 2, rnd);
      mpfr_add(acc, acc, term.get(), rnd);
    }
  }
  Enclosure e;
  e.lower = format(lo.get(), false);
  e.upper = format(hi.get(), true);
  e.sign = mpfr_sgn(hi.get()) < 0 ? -1 : (mpfr_sgn(lo.get()) > 0 ? 1 : 0);
  e.precision = prec;
  Real mid(prec);
  mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  e.midpoint = mpfr_get_d(mid.get(), MPFR_RNDN);
  return e;
}

}  // namespace bound_detail

/// Enclosure of L(n, ε), starting at 256 bits and doubling while the sign is
/// undecided, up to 8192 bits. An exact zero stays undecided.
inline Enclosure log2_failure_bound(std::uint64_t n, const Rational& eps, BoundForm form = BoundForm::Tight,
                                    mpfr_prec_t prec = kBoundPrecision) {
  if (eps <= 0 || eps >= 1) throw Error(ErrorKind::InvalidInput, "epsilon must lie strictly between 0 and 1");
  if (n == 0) throw Error(ErrorKind::InvalidInput, "n must be positive");
  Enclosure e = bound_detail::evaluate(n, eps, form, prec);
  while (e.sign == 0 && prec < kMaxBoundPrecision) {
    prec *= 2;
    e = bound_detail::evaluate(n, eps, form, prec);
  }
  return e;
}

/// The inequalities that let the tight form be replaced by 2^(7n/8).
/// `short_form` is 2^(3n/4) + n + 1 ≤ 2^(7n/8); `full_form` is 2^(3n/4+1) + n ≤ 2^(7n/8),
/// which is what the tight form actually requires.
struct Simplification {
  bool short_form = false;
  bool full_form = false;
};

inline Simplification simplification_holds(std::uint64_t n) {
  const mpfr_prec_t prec = kBoundPrecision;
  bound_detail::Real lhs(prec);
  bound_detail::Real rhs(prec);
  Simplification out;
  // both sides are rounded to settle ≤ rigorously: lhs up, rhs down
  bound_detail::pow2_fraction(rhs.get(), static_cast<long>(7 * n), 8, MPFR_RNDD);
  bound_detail::pow2_fraction(lhs.get(), static_cast<long>(3 * n), 4, MPFR_RNDU);
  mpfr_add_ui(lhs.get(), lhs.get(), n + 1, MPFR_RNDU);
  out.short_form = mpfr_lessequal_p(lhs.get(), rhs.get()) != 0;
  bound_detail::pow2_fraction(lhs.get(), static_cast<long>(3 * n + 4), 4, MPFR_RNDU);
  mpfr_add_ui(lhs.get(), lhs.get(), n, MPFR_RNDU);
  out.full_form = mpfr_lessequal_p(lhs.get(), rhs.get()) != 0;
  return out;
}

struct DefinedCheck {
  std::uint64_t m = 0;
  Rational eps;
  Enclosure even;  // L(2m+2, 1/m²), block length |I⁰_m|
  Enclosure odd;   // L(2m+1, 1/m²), block length |I¹_m|
  bool defined = false;
};

/// True iff both block lengths of index m admit a hitting set with ε = 1/m².
inline DefinedCheck check_defined(std::uint64_t m, BoundForm form = BoundForm::Tight) {
  if (m < 2) throw Error(ErrorKind::InvalidInput, "m must be at least 2");
  DefinedCheck out;
  out.m = m;
  out.eps = Rational(1, boost::multiprecision::cpp_int(m) * m);
  out.even = log2_failure_bound(2 * m + 2, out.eps, form);
  out.odd = log2_failure_bound(2 * m + 1, out.eps, form);
  if (out.even.sign == 0 || out.odd.sign == 0) {
    throw Error(ErrorKind::Inconclusive, "enclosure for m = " + std::to_string(m) + " straddles 0");
  }
  out.defined = out.even.sign < 0 && out.odd.sign < 0;
  return out;
}

struct DefinedScan {
  std::optional<std::uint64_t> least;     // least m in range with check_defined true
  std::optional<std::uint64_t> stable;    // least m from which every m in range is true
  std::vector<std::uint64_t> defined;
};

inline DefinedScan scan_defined(std::uint64_t lo, std::uint64_t hi, BoundForm form = BoundForm::Tight) {
  DefinedScan out;
  for (std::uint64_t m = lo; m <= hi; ++m) {
    const bool ok = check_defined(m, form).defined;
    if (ok) {
      out.defined.push_back(m);
      if (!out.least) out.least = m;
      if (!out.stable) out.stable = m;
    } else {
      out.stable.reset();
    }
  }
  return out;
}

/// Parse "p/q", "p", or a decimal such as "0.375" into an exact rational.
namespace bound_detail {

// Decimal digits only; cpp_int would read a leading 0 as octal and 0x as hex.
inline boost::multiprecision::cpp_int decimal_int(std::string text, bool allow_empty = false) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty() && !allow_empty) throw Error(ErrorKind::InvalidInput, "missing digits");
  for (char c : text) {
    if (c < '0' || c > '9') throw Error(ErrorKind::InvalidInput, "not a decimal digit");
  }
  text.erase(0, std::min(text.find_first_not_of('0'), text.size()));
  boost::multiprecision::cpp_int v(text.empty() ? "0" : text);
  return negative ? boost::multiprecision::cpp_int(-v) : v;
}

}  // namespace bound_detail

inline Rational parse_rational(const std::string& text) {
  using bound_detail::decimal_int;
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const auto p = decimal_int(text.substr(0, slash));
      const auto q = decimal_int(text.substr(slash + 1));
      if (q == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
      return Rational(p, q);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string whole = text.substr(0, dot);
      const std::string frac = text.substr(dot + 1);
      if (frac.empty() || frac[0] == '-' || frac[0] == '+') throw Error(ErrorKind::InvalidInput, "bad fraction");
      const bool negative = !whole.empty() && whole[0] == '-';
      boost::multiprecision::cpp_int scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational r(decimal_int(whole, true));
      const Rational f(decimal_int(frac), scale);
      return negative ? Rational(r - f) : Rational(r + f);
    }
    return Rational(decimal_int(text));
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidInput, "not a rational number: '" + text + "'");
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "not a rational number: '" + text + "'");
  }
}

inline std::string rational_str(const Rational& r) {
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

}  // namespace smallset
