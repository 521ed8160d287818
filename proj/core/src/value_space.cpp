#include "harmtree/value_space.hpp"

#include <charconv>

namespace harmtree {

namespace {

void same_dim(const Value& a, const Value& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Value& Value::operator+=(const Value& other) {
  same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Value& Value::operator-=(const Value& other) {
  same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Value& Value::operator*=(const Rational& lambda) {
  for (auto& c : coords_) c *= lambda;
  return *this;
}

Value Value::operator-() const {
  Value out(*this);
  for (auto& c : out.coords_) c = -c;
  return out;
}

std::size_t hash_value(const Value& v) noexcept {
  std::size_t seed = v.dim();
  for (const auto& c : v.coords()) hash_combine(seed, hash_value(c));
  return seed;
}

ValueSpace ValueSpace::product(std::size_t dim) {
  if (dim < 1) throw DimensionError("product space needs dimension >= 1");
  return ValueSpace(Kind::product, dim);
}

ValueSpace ValueSpace::weighted_product(std::size_t dim) {
  if (dim < 1) throw DimensionError("weighted product space needs dimension >= 1");
  return ValueSpace(Kind::weighted_product, dim);
}

Rational ValueSpace::coordinate_weight(std::size_t j) const {
  return kind_ == Kind::weighted_product ? pow2(-static_cast<long>(j)) : Rational(1);
}

void ValueSpace::require(const Value& v) const {
  if (!contains(v)) {
    throw DimensionError("value of dimension " + std::to_string(v.dim()) + " not in " + name());
  }
}

std::string ValueSpace::name() const {
  switch (kind_) {
    case Kind::scalar:
      return "scalar";
    case Kind::product:
      return "product(" + std::to_string(dim_) + ")";
    case Kind::weighted_product:
      return "weighted_product(" + std::to_string(dim_) + ")";
  }
  return "?";
}

ValueSpace ValueSpace::parse(const std::string& text) {
  if (text == "scalar") return scalar();
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw DimensionError("unknown value space '" + text + "'");
  const auto kind = text.substr(0, open);
  std::size_t dim = 0;
  const auto* first = text.data() + open + 1;
  const auto* last = text.data() + text.size() - 1;
  if (auto [p, ec] = std::from_chars(first, last, dim); ec != std::errc{} || p != last) {
    throw DimensionError("bad dimension in '" + text + "'");
  }
  if (kind == "product") return product(dim);
  if (kind == "weighted_product") return weighted_product(dim);
  throw DimensionError("unknown value space '" + text + "'");
}

Value zero(const ValueSpace& space) { return Value(std::vector<Rational>(space.dim(), Rational(0))); }

Value add(const ValueSpace& space, const Value& a, const Value& b) {
  space.require(a);
  space.require(b);
  return a + b;
}

Value scale(const ValueSpace& space, const Rational& lambda, const Value& a) {
  space.require(a);
  return lambda * a;
}

Rational dist(const ValueSpace& space, const Value& a, const Value& b) {
  space.require(a);
  space.require(b);
  if (space.kind() == ValueSpace::Kind::scalar) return abs(a[0] - b[0]);
  Rational total = 0;
  for (std::size_t j = 0; j < space.dim(); ++j) {
    total += space.coordinate_weight(j) * bounded(abs(a[j] - b[j]));
  }
  return total;
}

}  // namespace harmtree
