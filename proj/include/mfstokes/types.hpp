#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfstokes {

/// Physical or reference coordinates; unused trailing entries are zero in 2d.
using Point = std::array<double, 3>;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EstimationFailure : public Error {
 public:
  using Error::Error;
};

class SetupError : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownBenchmark : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Velocity/pressure partitioned coefficient vector.
struct BlockVector {
  Vector u;
  Vector p;

  BlockVector() = default;
  BlockVector(Eigen::Index n, Eigen::Index m) : u(Vector::Zero(n)), p(Vector::Zero(m)) {}
  BlockVector(Vector velocity, Vector pressure) : u(std::move(velocity)), p(std::move(pressure)) {}

  Eigen::Index size() const { return u.size() + p.size(); }

  double dot(const BlockVector& other) const { return u.dot(other.u) + p.dot(other.p); }
  double squared_norm() const { return u.squaredNorm() + p.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  void set_zero() {
    u.setZero();
    p.setZero();
  }

  BlockVector& operator+=(const BlockVector& o) {
    u += o.u;
    p += o.p;
    return *this;
  }
  BlockVector& operator-=(const BlockVector& o) {
    u -= o.u;
    p -= o.p;
    return *this;
  }
  BlockVector& operator*=(double s) {
    u *= s;
    p *= s;
    return *this;
  }

  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator*(double s, BlockVector a) { return a *= s; }

  /// Concatenation (u, p).
  Vector stacked() const {
    Vector out(size());
    out << u, p;
    return out;
  }

  static BlockVector from_stacked(const Vector& x, Eigen::Index n) {
    return {x.head(n), x.tail(x.size() - n)};
  }
};

}  // namespace mfstokes
