#include "periodica/mp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "periodica/errors.hpp"

namespace periodica {

namespace {

constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

// RAII holder for the char buffers mpfr_get_str returns.
struct MpfrString {
  char* text = nullptr;
  ~MpfrString() {
    if (text != nullptr) mpfr_free_str(text);
  }
};

long widest(const MpReal& a, const MpReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

PrecisionContext::PrecisionContext(long bits) : bits_(bits) {
  if (bits < kMinBits || bits > MPFR_PREC_MAX) {
    throw ConfigError("precision must be at least " +
                      std::to_string(kMinBits) + " bits, got " +
                      std::to_string(bits));
  }
}

MpReal::MpReal(const PrecisionContext& ctx) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_zero(value_, 1);
}

MpReal::MpReal(long value, const PrecisionContext& ctx) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

MpReal::MpReal(double value, const PrecisionContext& ctx) {
  mpfr_init2(value_, std::max<long>(ctx.bits(), 53));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

MpReal::MpReal(const MpReal& other, const PrecisionContext& ctx) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpReal MpReal::parse(std::string_view text, const PrecisionContext& ctx) {
  MpReal out(ctx);
  const std::string owned(text);
  char* end = nullptr;
  if (!owned.empty()) {
    mpfr_strtofr(out.value_, owned.c_str(), &end, 10, MPFR_RNDN);
  }
  if (end == nullptr || *end != '\0' || end == owned.c_str()) {
    throw ConfigError("not a decimal number: '" + owned + "'");
  }
  if (!out.is_finite()) {
    throw ConfigError("not a finite number: '" + owned + "'");
  }
  return out;
}

MpReal MpReal::from_rational(const mpq_class& q, const PrecisionContext& ctx) {
  MpReal out(ctx);
  mpfr_set_q(out.value_, q.get_mpq_t(), MPFR_RNDN);
  return out;
}

MpReal MpReal::from_integer(const mpz_class& z, const PrecisionContext& ctx) {
  MpReal out(ctx);
  mpfr_set_z(out.value_, z.get_mpz_t(), MPFR_RNDN);
  return out;
}

MpReal::MpReal(const MpReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpReal::MpReal(MpReal&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

MpReal& MpReal::operator=(const MpReal& other) {
  if (this != &other) {
    if (precision() != other.precision()) {
      mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

MpReal& MpReal::operator=(MpReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

MpReal::~MpReal() { mpfr_clear(value_); }

mpq_class MpReal::to_rational() const {
  if (!is_finite()) throw DomainError("non-finite value has no rational form");
  mpz_class mantissa;
  const mpfr_exp_t e = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
  mpq_class q(mantissa);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

MpReal& MpReal::operator+=(const MpReal& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator-=(const MpReal& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator*=(const MpReal& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator/=(const MpReal& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

MpReal MpReal::operator-() const {
  MpReal out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

MpReal operator+(const MpReal& a, const MpReal& b) {
  MpReal out{PrecisionContext(widest(a, b))};
  mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
MpReal operator-(const MpReal& a, const MpReal& b) {
  MpReal out{PrecisionContext(widest(a, b))};
  mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
MpReal operator*(const MpReal& a, const MpReal& b) {
  MpReal out{PrecisionContext(widest(a, b))};
  mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
MpReal operator/(const MpReal& a, const MpReal& b) {
  MpReal out{PrecisionContext(widest(a, b))};
  mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
MpReal operator*(const MpReal& a, long b) {
  MpReal out(a);
  out *= b;
  return out;
}
MpReal operator/(const MpReal& a, long b) {
  MpReal out(a);
  out /= b;
  return out;
}

std::partial_ordering operator<=>(const MpReal& a, const MpReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) {
    return std::partial_ordering::unordered;
  }
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const MpReal& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

MpReal abs(const MpReal& x) {
  MpReal out(x);
  mpfr_abs(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

MpReal sqrt(const MpReal& x) {
  MpReal out(x.context());
  mpfr_sqrt(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal exp(const MpReal& x) {
  MpReal out(x.context());
  mpfr_exp(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal log(const MpReal& x) {
  MpReal out(x.context());
  mpfr_log(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal log10(const MpReal& x) {
  MpReal out(x.context());
  mpfr_log10(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal sin(const MpReal& x) {
  MpReal out(x.context());
  mpfr_sin(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal cos(const MpReal& x) {
  MpReal out(x.context());
  mpfr_cos(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

MpReal floor(const MpReal& x) {
  MpReal out(x.context());
  mpfr_floor(out.raw(), x.raw());
  return out;
}

MpReal ldexp(const MpReal& x, long e) {
  MpReal out(x);
  mpfr_mul_2si(out.raw(), out.raw(), e, MPFR_RNDN);
  return out;
}

const MpReal& max(const MpReal& a, const MpReal& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// BigTime

BigTime::BigTime(const mpz_class& mantissa, long exponent)
    : mantissa_(mantissa), exponent_(exponent) {
  if (mantissa_ < 0) throw ConfigError("time must be nonnegative");
  normalize();
}

void BigTime::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  while (mpz_divisible_ui_p(mantissa_.get_mpz_t(), 10) != 0) {
    mantissa_ /= 10;
    ++exponent_;
  }
}

BigTime BigTime::parse(std::string_view text) {
  const auto bad = [&] {
    return ConfigError("not a nonnegative decimal time: '" +
                       std::string(text) + "'");
  };
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '+') ++pos;
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw bad();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw bad();
    ++pos;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) throw bad();
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) == 0) throw bad();
      exponent = exponent * 10 + (c - '0');
      if (exponent > 1'000'000) throw bad();
    }
    if (negative) exponent = -exponent;
  }
  return BigTime(mpz_class(digits, 10), exponent - fraction_digits);
}

mpq_class BigTime::to_rational() const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                static_cast<unsigned long>(exponent_ < 0 ? -exponent_
                                                         : exponent_));
  mpq_class q = exponent_ >= 0 ? mpq_class(mantissa_ * scale)
                               : mpq_class(mantissa_, scale);
  q.canonicalize();
  return q;
}

double BigTime::log10() const {
  if (is_zero()) return 0.0;
  mpfr_t m;
  mpfr_init2(m, 64);
  mpfr_set_z(m, mantissa_.get_mpz_t(), MPFR_RNDN);
  mpfr_log10(m, m, MPFR_RNDN);
  const double out = mpfr_get_d(m, MPFR_RNDN) + static_cast<double>(exponent_);
  mpfr_clear(m);
  return out;
}

std::string BigTime::to_string() const {
  std::string digits = mantissa_.get_str(10);
  if (exponent_ >= 0) {
    if (mantissa_ == 0) return "0";
    return digits + std::string(static_cast<std::size_t>(exponent_), '0');
  }
  const auto shift = static_cast<std::size_t>(-exponent_);
  if (digits.size() <= shift) {
    return "0." + std::string(shift - digits.size(), '0') + digits;
  }
  digits.insert(digits.size() - shift, ".");
  return digits;
}

std::strong_ordering operator<=>(const BigTime& a, const BigTime& b) {
  const int c = cmp(a.to_rational(), b.to_rational());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

// ---------------------------------------------------------------------------

Conversion to_mp(const BigTime& t, const PrecisionContext& ctx) {
  MpReal value(ctx);
  const mpq_class q = t.to_rational();
  const int ternary = mpfr_set_q(value.raw(), q.get_mpq_t(), MPFR_RNDN);
  return {std::move(value), ternary == 0};
}

long required_bits_for_log10(double log10_magnitude, int out_digits) {
  if (out_digits < 1) throw ConfigError("out_digits must be at least 1");
  const double magnitude = std::max(log10_magnitude, 0.0);
  return static_cast<long>(
             std::ceil((magnitude + out_digits) * kLog2Of10)) +
         32;
}

long required_bits(const BigTime& t, int out_digits) {
  return required_bits_for_log10(t.log10(), out_digits);
}

mpz_class floor_quotient(const BigTime& t, const MpReal& period) {
  if (!period.is_finite() || period.sign() <= 0) {
    throw DomainError("period must be positive and finite");
  }
  const mpq_class q = t.to_rational() / period.to_rational();
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return k;
}

MpReal exact_residual(const BigTime& t, const mpz_class& k,
                      const MpReal& period, const PrecisionContext& ctx) {
  const mpq_class r = t.to_rational() - mpq_class(k) * period.to_rational();
  return MpReal::from_rational(r, ctx);
}

int digits_capacity(long bits) {
  return static_cast<int>(
      std::floor(static_cast<double>(bits - 1) / kLog2Of10));
}

int agreed_digits(const MpReal& a, const MpReal& b) {
  const int cap =
      digits_capacity(std::min(a.precision(), b.precision()));
  if (a == b) return cap;
  if (!a.is_finite() || !b.is_finite()) return 0;
  const MpReal scale = max(abs(a), abs(b));
  const MpReal rel = abs(a - b) / scale;
  if (rel >= 1) return 0;
  mpfr_t l;
  mpfr_init2(l, 64);
  mpfr_log10(l, rel.raw(), MPFR_RNDN);
  mpfr_neg(l, l, MPFR_RNDN);
  const double d = std::floor(mpfr_get_d(l, MPFR_RNDD));
  mpfr_clear(l);
  return std::clamp(static_cast<int>(d), 0, cap);
}

std::string to_decimal(const MpReal& x, int significant, DigitMode mode) {
  if (mpfr_nan_p(x.raw())) return "nan";
  if (mpfr_inf_p(x.raw())) return x.sign() < 0 ? "-inf" : "inf";
  if (x.is_zero()) return "0";
  significant = std::max(significant, 1);
  mpfr_exp_t e = 0;
  MpfrString s;
  s.text = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(significant),
                        x.raw(),
                        mode == DigitMode::truncate ? MPFR_RNDZ : MPFR_RNDN);
  std::string digits(s.text);
  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  const long n = static_cast<long>(digits.size());
  std::string out;
  if (e <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-e), '0') + digits;
  } else if (e < n) {
    out = digits.substr(0, static_cast<std::size_t>(e)) + "." +
          digits.substr(static_cast<std::size_t>(e));
  } else {
    out = digits + std::string(static_cast<std::size_t>(e - n), '0');
  }
  return sign + out;
}

std::string to_scientific(const MpReal& x, int significant) {
  if (mpfr_nan_p(x.raw())) return "nan";
  if (mpfr_inf_p(x.raw())) return x.sign() < 0 ? "-inf" : "inf";
  if (x.is_zero()) return "0";
  significant = std::max(significant, 1);
  mpfr_exp_t e = 0;
  MpfrString s;
  s.text = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(significant),
                        x.raw(), MPFR_RNDN);
  std::string digits(s.text);
  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  std::string mantissa = digits.substr(0, 1);
  if (digits.size() > 1) mantissa += "." + digits.substr(1);
  const long exponent = static_cast<long>(e) - 1;
  return sign + mantissa + "e" + (exponent < 0 ? "-" : "+") +
         std::to_string(exponent < 0 ? -exponent : exponent);
}

}  // namespace periodica
