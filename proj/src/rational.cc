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

#include "dtlab/rational.h"

#include <cctype>
#include <ostream>
#include <sstream>

#include "dtlab/errors.h"

namespace dtlab {

namespace {

bool IsDigits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DtlabError("rational denominator is zero");
  value_ = boost::multiprecision::cpp_rational(n, d);
}

Rational::Rational(BigInt n, BigInt d) {
  if (d == 0) throw DtlabError("rational denominator is zero");
  value_ = boost::multiprecision::cpp_rational(std::move(n), std::move(d));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DtlabError("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::FromString(const std::string& text) {
  std::string s = text;
  // Trim surrounding whitespace.
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) {
    throw DtlabError("empty rational literal");
  }
  s = s.substr(first, last - first + 1);

  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = (s[0] == '-');
    s = s.substr(1);
  }

  auto fail = [&text]() -> Rational {
    throw DtlabError("malformed rational literal '" + text + "'");
  };

  Rational result;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!IsDigits(num) || !IsDigits(den)) return fail();
    BigInt n(num), d(den);
    if (d == 0) throw DtlabError("zero denominator in '" + text + "'");
    result = Rational(n, d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!IsDigits(whole) || !IsDigits(frac)) return fail();
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt n = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
    result = Rational(n, scale);
  } else {
    if (!IsDigits(s)) return fail();
    result = Rational(BigInt(s), BigInt(1));
  }
  return negative ? -result : result;
}

std::string Rational::ToString() const {
  std::ostringstream os;
  os << numerator();
  if (denominator() != 1) os << "/" << denominator();
  return os.str();
}

std::string Rational::ToDecimalString(int significant_digits) const {
  if (significant_digits < 1) significant_digits = 1;
  if (is_integer()) {
    std::ostringstream os;
    os << numerator();
    return os.str();
  }
  BigInt n = numerator();
  BigInt d = denominator();
  bool neg = n < 0;
  if (neg) n = -n;

  // Scale so the integer quotient carries `significant_digits` digits of the
  // leading-significant-figure expansion, then round half away from zero.
  BigInt whole = n / d;
  int whole_digits = 0;
  for (BigInt w = whole; w > 0; w /= 10) ++whole_digits;
  int frac_digits =
      whole_digits >= significant_digits ? 0 : significant_digits - whole_digits;
  if (whole == 0) {
    // Count leading zeros after the decimal point so significant digits
    // start at the first nonzero digit.
    BigInt num = n * 10;
    int leading = 0;
    while (num / d == 0) {
      num *= 10;
      ++leading;
    }
    frac_digits = leading + significant_digits;
  }
  BigInt scale = 1;
  for (int i = 0; i < frac_digits; ++i) scale *= 10;
  BigInt scaled = n * scale;
  BigInt q = scaled / d;
  BigInt r = scaled % d;
  if (2 * r >= d) ++q;

  std::ostringstream digits;
  digits << q;
  std::string ds = digits.str();
  while (static_cast<int>(ds.size()) <= frac_digits) ds.insert(0, "0");
  std::string out;
  if (neg) out += "-";
  out += ds.substr(0, ds.size() - frac_digits);
  if (frac_digits > 0) {
    std::string frac = ds.substr(ds.size() - frac_digits);
    // Strip trailing zeros but keep at least one fractional digit.
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    out += "." + frac;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.ToString();
}

}  // namespace dtlab
