// Copyright 2026 The dtlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DTLAB_RATIONAL_H_
#define DTLAB_RATIONAL_H_

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace dtlab {

using BigInt = boost::multiprecision::cpp_int;

// Exact fraction-valued scalar. Always stored in lowest terms with a
// positive denominator; every operation is exact. All probabilities and
// values in the engine are Rationals; floating point never enters the core.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(runtime/explicit)
  Rational(std::int64_t n, std::int64_t d);
  Rational(BigInt n, BigInt d);

  // Parses "3", "-3/7", "0.25", "1e2" is not accepted. Decimal literals are
  // converted exactly (0.01 == 1/100). Throws DtlabError on malformed input
  // or zero denominator.
  static Rational FromString(const std::string& text);

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const {
    return boost::multiprecision::denominator(value_);
  }

  bool is_zero() const { return value_.is_zero(); }
  bool is_negative() const { return value_ < 0; }
  bool is_integer() const { return denominator() == 1; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.value_ = -a.value_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.value_ != b.value_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.value_ <= b.value_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.value_ > b.value_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.value_ >= b.value_;
  }

  // "n/d" in lowest terms, or just "n" for integers.
  std::string ToString() const;

  // Decimal rendering to the given number of significant digits, rounding
  // half away from zero. Integers render without a fractional part. This is
  // presentation only; the exact value is ToString().
  std::string ToDecimalString(int significant_digits = 6) const;

 private:
  boost::multiprecision::cpp_rational value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace dtlab

#endif  // DTLAB_RATIONAL_H_
