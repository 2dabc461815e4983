#pragma once

#include "cgm/rational.hpp"

namespace cgm::engine {

// c + k*delta for an infinitesimal delta > 0; strict bounds become
// non-strict ones over these values.
struct DeltaRational {
  Rational c = 0;
  Rational k = 0;

  DeltaRational() = default;
  DeltaRational(Rational c_, Rational k_ = 0) : c(std::move(c_)), k(std::move(k_)) {}

  DeltaRational operator+(const DeltaRational& o) const { return {c + o.c, k + o.k}; }
  DeltaRational operator-(const DeltaRational& o) const { return {c - o.c, k - o.k}; }
  DeltaRational operator*(const Rational& f) const { return {c * f, k * f}; }
  DeltaRational operator/(const Rational& f) const { return {c / f, k / f}; }
  DeltaRational& operator+=(const DeltaRational& o) {
    c += o.c;
    k += o.k;
    return *this;
  }

  friend bool operator==(const DeltaRational& a, const DeltaRational& b) { return a.c == b.c && a.k == b.k; }
  friend bool operator<(const DeltaRational& a, const DeltaRational& b) {
    return a.c < b.c || (a.c == b.c && a.k < b.k);
  }
  friend bool operator>(const DeltaRational& a, const DeltaRational& b) { return b < a; }
  friend bool operator<=(const DeltaRational& a, const DeltaRational& b) { return !(b < a); }
  friend bool operator>=(const DeltaRational& a, const DeltaRational& b) { return !(a < b); }

  Rational at(const Rational& delta) const { return c + k * delta; }
};

}  // namespace cgm::engine
