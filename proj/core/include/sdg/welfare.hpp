#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sdg {

// Exact 64-bit integer extended with a negative-infinity element that
// absorbs addition and compares below every finite value.  All utility and
// welfare arithmetic goes through this type; finite overflow throws instead
// of wrapping.
class Welfare {
 public:
  constexpr Welfare() = default;
  constexpr explicit Welfare(std::int64_t v) : value_(v), finite_(true) {}

  static constexpr Welfare neg_inf() {
    Welfare w;
    w.finite_ = false;
    return w;
  }

  constexpr bool is_finite() const { return finite_; }

  std::int64_t value() const {
    if (!finite_) throw std::logic_error("Welfare::value() on -inf");
    return value_;
  }

  Welfare& operator+=(Welfare o) {
    if (!finite_ || !o.finite_) {
      finite_ = false;
      return *this;
    }
    std::int64_t r = 0;
    if (__builtin_add_overflow(value_, o.value_, &r))
      throw std::overflow_error("Welfare addition overflow");
    value_ = r;
    return *this;
  }

  friend Welfare operator+(Welfare a, Welfare b) {
    a += b;
    return a;
  }

  friend constexpr bool operator==(Welfare a, Welfare b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }

  friend constexpr bool operator<(Welfare a, Welfare b) {
    if (!a.finite_) return b.finite_;
    if (!b.finite_) return false;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator>(Welfare a, Welfare b) { return b < a; }
  friend constexpr bool operator<=(Welfare a, Welfare b) { return !(b < a); }
  friend constexpr bool operator>=(Welfare a, Welfare b) { return !(a < b); }

  std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  std::int64_t value_ = 0;
  bool finite_ = true;
};

// k * w for a non-negative multiplicity k.  k == 0 yields 0 even for -inf
// ("no such pairs contribute nothing"); that is the convention every counted
// sum in the solvers relies on.
inline Welfare scale(Welfare w, std::int64_t k) {
  if (k < 0) throw std::logic_error("scale: negative multiplicity");
  if (k == 0) return Welfare(0);
  if (!w.is_finite()) return Welfare::neg_inf();
  std::int64_t r = 0;
  if (__builtin_mul_overflow(w.value(), k, &r))
    throw std::overflow_error("Welfare scale overflow");
  return Welfare(r);
}

}  // namespace sdg
