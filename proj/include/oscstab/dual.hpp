// Copyright 2026 The oscstab Authors
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

/*
  Forward-mode dual numbers.

  A Dual<T> carries a value and one directional derivative. Nesting
  (Dual<Dual<double>>) gives mixed second directional derivatives, which is
  what the bracket and Hessian-vector products need.

      Dual<double> x{3.0, 1.0};
      auto y = x * x;        // y.re == 9, y.du == 6
*/
#pragma once

#include <cmath>
#include <type_traits>

namespace oscstab {

template <typename T>
struct Dual {
  T re{};
  T du{};

  constexpr Dual() = default;
  constexpr Dual(const T& value) : re(value), du(T{}) {}  // NOLINT: implicit lift
  constexpr Dual(const T& value, const T& tangent) : re(value), du(tangent) {}

  // Lift plain doubles into nested duals without ambiguity.
  template <typename S,
            std::enable_if_t<std::is_arithmetic_v<S> && !std::is_same_v<S, T>, int> = 0>
  constexpr Dual(S value) : re(T(value)), du(T{}) {}  // NOLINT

  Dual& operator+=(const Dual& o) { re += o.re; du += o.du; return *this; }
  Dual& operator-=(const Dual& o) { re -= o.re; du -= o.du; return *this; }
  Dual& operator*=(const Dual& o) { du = du * o.re + re * o.du; re *= o.re; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.re + b.re, a.du + b.du}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.re - b.re, a.du - b.du}; }
  friend Dual operator-(const Dual& a) { return {-a.re, -a.du}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.re * b.re, a.du * b.re + a.re * b.du}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.re;
    return {a.re * inv, (a.du * b.re - a.re * b.du) * inv * inv};
  }

  friend bool operator<(const Dual& a, const Dual& b) { return a.re < b.re; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.re > b.re; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.re == b.re; }
};

template <typename T> struct is_dual : std::false_type {};
template <typename T> struct is_dual<Dual<T>> : std::true_type {};

/// Innermost real value of a (possibly nested) dual.
inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) { return value_of(x.re); }

/// sign with sign(0) = 0.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
template <typename T>
double sign(const Dual<T>& x) { return sign(value_of(x)); }

using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

// |x| differentiates as sign(x)·dx, so the derivative at 0 is 0.
template <typename T>
Dual<T> abs(const Dual<T>& x) {
  const double s = sign(x);
  return {abs(x.re) , x.du * T(s)};
}

template <typename T>
Dual<T> sin(const Dual<T>& x) { return {sin(x.re), x.du * cos(x.re)}; }

template <typename T>
Dual<T> cos(const Dual<T>& x) { return {cos(x.re), -(x.du * sin(x.re))}; }

template <typename T>
Dual<T> exp(const Dual<T>& x) {
  const T e = exp(x.re);
  return {e, x.du * e};
}

template <typename T>
Dual<T> log(const Dual<T>& x) { return {log(x.re), x.du / x.re}; }

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  const T s = sqrt(x.re);
  return {s, x.du / (T(2.0) * s)};
}

// Real exponent. For k >= 1 the derivative k·x^(k-1) is finite at 0.
template <typename T>
Dual<T> pow(const Dual<T>& x, double k) {
  if (k == 0.0) return Dual<T>(T(1.0));
  if (k == 1.0) return x;
  return {pow(x.re, k), x.du * (T(k) * pow(x.re, k - 1.0))};
}

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

}  // namespace oscstab
