#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet stores the Taylor coefficients c_m of a function around a point for
// every multi-index m with |m| <= order, i.e. f(x0 + h) ~ sum_m c_m h^m. The
// mixed partial derivative for m is c_m * m!, so a partial is stored exactly
// once per multi-index regardless of the order in which its indices are named.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace smlab {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 4;

using Exponent = std::array<std::uint8_t, kMaxJetDim>;

// Enumeration of monomials of total degree <= order in `dim` variables, sorted
// by degree, together with the index tables that jet arithmetic needs.
class MonomialTable {
 public:
  static const MonomialTable& get(int dim, int order);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(exponents_.size()); }

  [[nodiscard]] const Exponent& exponent(int idx) const { return exponents_[idx]; }
  [[nodiscard]] int degree(int idx) const { return degrees_[idx]; }
  // First index of the block of monomials with the given degree.
  [[nodiscard]] int degree_begin(int deg) const { return degree_begin_[deg]; }
  // -1 when the exponent is not in the table (degree too high).
  [[nodiscard]] int index_of(const Exponent& e) const;
  // m! = prod_i m_i!
  [[nodiscard]] double factorial_weight(int idx) const { return weights_[idx]; }

  struct ProductTerm {
    int lhs;
    int rhs;
    int out;
  };
  [[nodiscard]] const std::vector<ProductTerm>& product_terms() const { return products_; }

 private:
  MonomialTable(int dim, int order);

  int dim_;
  int order_;
  std::vector<Exponent> exponents_;
  std::vector<int> degrees_;
  std::vector<double> weights_;
  std::array<int, kMaxJetOrder + 2> degree_begin_{};
  std::vector<ProductTerm> products_;
  std::vector<int> lookup_;  // dense over (order+1)^dim
};

class Jet {
 public:
  Jet() = default;
  explicit Jet(const MonomialTable& table) : table_(&table), coeffs_(table.size(), 0.0) {}

  static Jet constant(const MonomialTable& table, double value);
  static Jet variable(const MonomialTable& table, int var, double value);

  [[nodiscard]] const MonomialTable& table() const { return *table_; }
  [[nodiscard]] int dim() const { return table_->dim(); }
  [[nodiscard]] int order() const { return table_->order(); }

  [[nodiscard]] double value() const { return coeffs_[0]; }
  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
  [[nodiscard]] std::span<double> coeffs() { return coeffs_; }

  // Partial derivative named by a list of variable indices, e.g. {0, 1, 1}
  // is d^3/dx0 dx1 dx1. Any permutation yields the same stored entry.
  [[nodiscard]] double partial(std::initializer_list<int> vars) const;
  [[nodiscard]] double partial(std::span<const int> vars) const;
  [[nodiscard]] double partial_of_exponent(const Exponent& e) const;

  // d/dx_var as a jet of one lower order.
  [[nodiscard]] Jet derivative(int var) const;
  [[nodiscard]] Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

 private:
  const MonomialTable* table_ = nullptr;
  std::vector<double> coeffs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);
Jet operator-(const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet cos(const Jet& a);
Jet sin(const Jet& a);
Jet cosh(const Jet& a);
Jet sinh(const Jet& a);
Jet square(const Jet& a);

// Applies a univariate function given its derivatives f(a), f'(a), ...,
// f^(order)(a) at a = x.value(). Building block for the elementary functions.
Jet compose_univariate(const Jet& x, std::span<const double> derivs);

// Evaluates the Taylor polynomial `poly` (expansion about its own base point)
// at base + (args - args.value()), giving a jet in the variables of `args`.
Jet compose(const Jet& poly, std::span<const Jet> args);

}  // namespace smlab
