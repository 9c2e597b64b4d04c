#include "twistcalc/rational.hpp"

#include <algorithm>

namespace twistcalc {
namespace detail {

std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Peel digits from the absolute value; negate digit-wise to dodge the
  // INT128_MIN edge case.
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    if (digit < 0) digit = -digit;
    out.push_back(static_cast<char>('0' + digit));
    v /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

i128 i128_from_string(std::string_view s) {
  if (s.empty()) throw arith_error("empty integer literal");
  bool neg = false;
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw arith_error("sign without digits in integer literal");
  i128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw arith_error("bad digit in integer literal: " + std::string(s));
    v = checked_add(checked_mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace detail

Rational Rational::parse(std::string_view s) {
  size_t slash = s.find('/');
  if (slash == std::string_view::npos)
    return from_i128(detail::i128_from_string(s), 1);
  return from_i128(detail::i128_from_string(s.substr(0, slash)),
                   detail::i128_from_string(s.substr(slash + 1)));
}

std::string Rational::str() const {
  std::string out = detail::i128_to_string(num_);
  if (den_ != 1) {
    out += '/';
    out += detail::i128_to_string(den_);
  }
  return out;
}

}  // namespace twistcalc
