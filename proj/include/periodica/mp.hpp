#pragma once

// Multiple-precision scalars and exact decimal times.
//
// MpReal is a value-semantic wrapper over an MPFR number. Every operation
// rounds to nearest-even at the precision of its destination; binary
// operators produce a result at the wider of the two operand precisions.
// There is no global precision: callers pass a PrecisionContext explicitly.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <gmpxx.h>
#include <string>
#include <string_view>

namespace periodica {

class PrecisionContext {
 public:
  static constexpr long kMinBits = 64;
  static constexpr long kPeriodDefaultBits = 2000;

  explicit PrecisionContext(long bits);

  long bits() const noexcept { return bits_; }

  /// Same context widened by `extra` bits.
  PrecisionContext widened(long extra) const {
    return PrecisionContext(bits_ + extra);
  }

  friend bool operator==(const PrecisionContext&,
                         const PrecisionContext&) = default;

 private:
  long bits_;
};

class MpReal {
 public:
  /// +0 at the context's precision.
  explicit MpReal(const PrecisionContext& ctx);
  MpReal(long value, const PrecisionContext& ctx);
  /// Exact conversion of a hardware double (precision >= 53 bits).
  MpReal(double value, const PrecisionContext& ctx);
  /// Copy of `other` rounded to `ctx`.
  MpReal(const MpReal& other, const PrecisionContext& ctx);

  /// Parses decimal text ("0.01", "-1.5e-30"); throws ConfigError on junk.
  static MpReal parse(std::string_view text, const PrecisionContext& ctx);
  static MpReal from_rational(const mpq_class& q, const PrecisionContext& ctx);
  static MpReal from_integer(const mpz_class& z, const PrecisionContext& ctx);

  MpReal(const MpReal& other);
  MpReal(MpReal&& other) noexcept;
  MpReal& operator=(const MpReal& other);
  MpReal& operator=(MpReal&& other) noexcept;
  ~MpReal();

  long precision() const noexcept { return mpfr_get_prec(value_); }
  PrecisionContext context() const { return PrecisionContext(precision()); }

  mpfr_ptr raw() noexcept { return value_; }
  mpfr_srcptr raw() const noexcept { return value_; }

  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Exact value as a rational. The number must be finite.
  mpq_class to_rational() const;

  // Compound operators keep this value's precision.
  MpReal& operator+=(const MpReal& rhs);
  MpReal& operator-=(const MpReal& rhs);
  MpReal& operator*=(const MpReal& rhs);
  MpReal& operator/=(const MpReal& rhs);
  MpReal& operator*=(long rhs);
  MpReal& operator/=(long rhs);

  MpReal operator-() const;

  friend MpReal operator+(const MpReal& a, const MpReal& b);
  friend MpReal operator-(const MpReal& a, const MpReal& b);
  friend MpReal operator*(const MpReal& a, const MpReal& b);
  friend MpReal operator/(const MpReal& a, const MpReal& b);
  friend MpReal operator*(const MpReal& a, long b);
  friend MpReal operator*(long a, const MpReal& b) { return b * a; }
  friend MpReal operator/(const MpReal& a, long b);

  friend bool operator==(const MpReal& a, const MpReal& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const MpReal& a, const MpReal& b);
  friend bool operator==(const MpReal& a, long b) {
    return !mpfr_nan_p(a.value_) && mpfr_cmp_si(a.value_, b) == 0;
  }
  friend std::partial_ordering operator<=>(const MpReal& a, long b);

 private:
  mpfr_t value_;
};

MpReal abs(const MpReal& x);
MpReal sqrt(const MpReal& x);
MpReal exp(const MpReal& x);
MpReal log(const MpReal& x);
MpReal log10(const MpReal& x);
MpReal sin(const MpReal& x);
MpReal cos(const MpReal& x);
MpReal floor(const MpReal& x);
/// x * 2^e, exact.
MpReal ldexp(const MpReal& x, long e);
const MpReal& max(const MpReal& a, const MpReal& b);

/// Exact nonnegative decimal time: mantissa * 10^exponent.
class BigTime {
 public:
  BigTime() = default;
  BigTime(const mpz_class& mantissa, long exponent);

  /// Accepts "10", "1e60", "1.5e3", "0.25". Negative or malformed text
  /// throws ConfigError.
  static BigTime parse(std::string_view text);
  static BigTime from_integer(const mpz_class& value) { return {value, 0}; }

  const mpz_class& mantissa() const noexcept { return mantissa_; }
  long exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return mantissa_ == 0; }

  mpq_class to_rational() const;
  /// Decimal logarithm; 0 for t = 0.
  double log10() const;
  /// Plain decimal text without exponent ("1000", "0.25").
  std::string to_string() const;

  friend bool operator==(const BigTime&, const BigTime&) = default;
  friend std::strong_ordering operator<=>(const BigTime& a, const BigTime& b);

 private:
  void normalize();

  mpz_class mantissa_{0};
  long exponent_ = 0;
};

struct Conversion {
  MpReal value;
  bool exact;
};

/// Rounds t to the context; `exact` is set iff no rounding happened.
Conversion to_mp(const BigTime& t, const PrecisionContext& ctx);

/// Mantissa bits needed for `out_digits` digits of relative accuracy below
/// 1/t at magnitude t, plus 32 guard bits.
long required_bits(const BigTime& t, int out_digits);
long required_bits_for_log10(double log10_magnitude, int out_digits);

/// floor(t / period), exactly. period must be positive and finite.
mpz_class floor_quotient(const BigTime& t, const MpReal& period);

/// t - k * period computed exactly and rounded once to ctx.
MpReal exact_residual(const BigTime& t, const mpz_class& k,
                      const MpReal& period, const PrecisionContext& ctx);

/// Significant digits `x` holds: floor((bits - 1) * log10 2).
int digits_capacity(long bits);

/// Leading significant digits on which a and b agree, measured as
/// floor(-log10(|a - b| / max(|a|, |b|))) and capped by the precision.
int agreed_digits(const MpReal& a, const MpReal& b);

enum class DigitMode { truncate, nearest };

/// Fixed-point decimal text with `significant` digits. The default truncates
/// toward zero so verified digits are never rounded up.
std::string to_decimal(const MpReal& x, int significant,
                       DigitMode mode = DigitMode::truncate);
/// Scientific notation "d.ddde-XX", rounded to nearest, for diagnostics.
std::string to_scientific(const MpReal& x, int significant);

}  // namespace periodica
