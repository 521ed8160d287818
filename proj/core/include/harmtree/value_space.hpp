#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "harmtree/rational.hpp"

namespace harmtree {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An element of the target space: a fixed-length tuple of exact rationals.
/// A complex value is carried as a (real, imaginary) pair in a product(2) space.
class Value {
 public:
  Value() = default;
  explicit Value(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Value(std::initializer_list<Rational> coords) : coords_(coords) {}
  static Value scalar(Rational x) { return Value{std::move(x)}; }

  std::size_t dim() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  friend bool operator==(const Value&, const Value&) = default;

  Value& operator+=(const Value& other);
  Value& operator-=(const Value& other);
  Value& operator*=(const Rational& lambda);
  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }
  friend Value operator*(const Rational& lambda, Value a) { return a *= lambda; }
  Value operator-() const;

 private:
  std::vector<Rational> coords_;
};

std::size_t hash_value(const Value& v) noexcept;

/// The target space E, truncated to finitely many coordinates.
///
///   scalar              d(a, b) = |a - b|
///   product(d)          d(a, b) = sum_j |a_j - b_j| / (1 + |a_j - b_j|)
///   weighted_product(d) d(a, b) = sum_j 2^-j |a_j - b_j| / (1 + |a_j - b_j|), j = 0..d-1
///
/// All three metrics are translation invariant.
class ValueSpace {
 public:
  enum class Kind { scalar, product, weighted_product };

  static ValueSpace scalar() { return ValueSpace(Kind::scalar, 1); }
  static ValueSpace product(std::size_t dim);
  static ValueSpace weighted_product(std::size_t dim);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  /// Coordinate weight w_j; 1 except for weighted_product.
  Rational coordinate_weight(std::size_t j) const;

  bool contains(const Value& v) const { return v.dim() == dim_; }
  void require(const Value& v) const;

  std::string name() const;
  /// Inverse of name(): "scalar", "product(3)", "weighted_product(2)".
  static ValueSpace parse(const std::string& text);

  friend bool operator==(const ValueSpace&, const ValueSpace&) = default;

 private:
  ValueSpace(Kind kind, std::size_t dim) : kind_(kind), dim_(dim) {}
  Kind kind_;
  std::size_t dim_;
};

Value zero(const ValueSpace& space);
Value add(const ValueSpace& space, const Value& a, const Value& b);
Value scale(const ValueSpace& space, const Rational& lambda, const Value& a);
Rational dist(const ValueSpace& space, const Value& a, const Value& b);

}  // namespace harmtree
