#include "smlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "smlab/error.hpp"

namespace smlab {

namespace {

int encode(const Exponent& e, int dim) {
  int key = 0;
  for (int i = dim - 1; i >= 0; --i) key = key * (kMaxJetOrder + 1) + e[i];
  return key;
}

int power_count(int dim) {
  int n = 1;
  for (int i = 0; i < dim; ++i) n *= (kMaxJetOrder + 1);
  return n;
}

// Exponents of total degree `deg` in `dim` variables, lexicographically
// descending in the first variable. Independent of the table order so that
// lower-order tables are prefixes of higher-order ones.
void enumerate_degree(int dim, int deg, int var, Exponent& cur, std::vector<Exponent>& out) {
  if (var == dim - 1) {
    cur[var] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[var] = static_cast<std::uint8_t>(k);
    enumerate_degree(dim, deg - k, var + 1, cur, out);
  }
  cur[var] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void require_same_table(const Jet& a, const Jet& b) {
  if (&a.table() != &b.table()) {
    throw std::invalid_argument("jet arithmetic on jets from different monomial tables");
  }
}

}  // namespace

MonomialTable::MonomialTable(int dim, int order) : dim_(dim), order_(order) {
  for (int deg = 0; deg <= order; ++deg) {
    degree_begin_[deg] = static_cast<int>(exponents_.size());
    Exponent cur{};
    enumerate_degree(dim, deg, 0, cur, exponents_);
  }
  degree_begin_[order + 1] = static_cast<int>(exponents_.size());

  lookup_.assign(power_count(dim), -1);
  degrees_.reserve(exponents_.size());
  weights_.reserve(exponents_.size());
  for (int idx = 0; idx < size(); ++idx) {
    const auto& e = exponents_[idx];
    int deg = 0;
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      deg += e[i];
      w *= factorial(e[i]);
    }
    degrees_.push_back(deg);
    weights_.push_back(w);
    lookup_[encode(e, dim)] = idx;
  }

  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      Exponent sum{};
      for (int i = 0; i < dim; ++i) sum[i] = exponents_[a][i] + exponents_[b][i];
      products_.push_back({a, b, index_of(sum)});
    }
  }
}

const MonomialTable& MonomialTable::get(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim || order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet table out of range: dim=" + std::to_string(dim) +
                                " order=" + std::to_string(order));
  }
  static std::array<std::array<std::unique_ptr<MonomialTable>, kMaxJetOrder + 1>, kMaxJetDim + 1>
      tables;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = tables[dim][order];
  if (!slot) slot.reset(new MonomialTable(dim, order));
  return *slot;
}

int MonomialTable::index_of(const Exponent& e) const {
  int deg = 0;
  for (int i = 0; i < dim_; ++i) deg += e[i];
  for (int i = dim_; i < kMaxJetDim; ++i) {
    if (e[i] != 0) return -1;
  }
  if (deg > order_) return -1;
  return lookup_[encode(e, dim_)];
}

Jet Jet::constant(const MonomialTable& table, double value) {
  Jet j(table);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(const MonomialTable& table, int var, double value) {
  Jet j = constant(table, value);
  if (table.order() >= 1) {
    Exponent e{};
    e[var] = 1;
    j.coeffs_[table.index_of(e)] = 1.0;
  }
  return j;
}

double Jet::partial_of_exponent(const Exponent& e) const {
  const int idx = table_->index_of(e);
  if (idx < 0) throw std::out_of_range("partial derivative beyond jet order");
  return coeffs_[idx] * table_->factorial_weight(idx);
}

double Jet::partial(std::span<const int> vars) const {
  Exponent e{};
  for (int v : vars) {
    if (v < 0 || v >= dim()) throw std::out_of_range("partial derivative variable out of range");
    ++e[v];
  }
  return partial_of_exponent(e);
}

double Jet::partial(std::initializer_list<int> vars) const {
  return partial(std::span<const int>(vars.begin(), vars.size()));
}

Jet Jet::derivative(int var) const {
  if (order() == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  const auto& lower = MonomialTable::get(dim(), order() - 1);
  Jet out(lower);
  for (int idx = 1; idx < table_->size(); ++idx) {
    Exponent e = table_->exponent(idx);
    if (e[var] == 0) continue;
    const double k = e[var];
    --e[var];
    out.coeffs_[lower.index_of(e)] += k * coeffs_[idx];
  }
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) throw std::logic_error("cannot raise jet order by truncation");
  const auto& lower = MonomialTable::get(dim(), new_order);
  Jet out(lower);
  std::copy_n(coeffs_.begin(), lower.size(), out.coeffs_.begin());
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_table(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_table(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this / o;
  return *this;
}

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  for (double& c : coeffs_) c /= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  require_same_table(a, b);
  Jet out(a.table());
  auto lhs = a.coeffs();
  auto rhs = b.coeffs();
  auto res = out.coeffs();
  for (const auto& t : a.table().product_terms()) res[t.out] += lhs[t.lhs] * rhs[t.rhs];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double v = b.value();
  if (v == 0.0 || !std::isfinite(v)) {
    throw Error(ErrorCode::ArithmeticDomain, "division by zero in jet arithmetic");
  }
  std::array<double, kMaxJetOrder + 1> d{};
  double inv = 1.0 / v;
  double term = inv;
  for (int k = 0; k <= b.order(); ++k) {
    d[k] = term;
    term *= -(k + 1) * inv;
  }
  return a * compose_univariate(b, std::span<const double>(d.data(), b.order() + 1));
}

Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return -a + s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return Jet::constant(a.table(), s) / a; }

Jet operator-(const Jet& a) { return a * -1.0; }

Jet compose_univariate(const Jet& x, std::span<const double> derivs) {
  const int order = x.order();
  Jet h = x;
  h.coeffs()[0] = 0.0;
  // Horner in h: sum_k derivs[k]/k! h^k
  Jet acc = Jet::constant(x.table(), derivs[order] / factorial(order));
  for (int k = order - 1; k >= 0; --k) {
    acc = acc * h;
    acc += derivs[k] / factorial(k);
  }
  return acc;
}

namespace {

using Derivs = std::array<double, kMaxJetOrder + 1>;

Jet apply_derivs(const Jet& x, const Derivs& d) {
  return compose_univariate(x, std::span<const double>(d.data(), x.order() + 1));
}

}  // namespace

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return apply_derivs(a, {e, e, e, e, e});
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) {
    throw Error(ErrorCode::ArithmeticDomain, "log of non-positive value " + std::to_string(v));
  }
  const double r = 1.0 / v;
  return apply_derivs(a, {std::log(v), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (v < 0.0 || (v == 0.0 && a.order() > 0)) {
    throw Error(ErrorCode::ArithmeticDomain, "sqrt of non-positive value " + std::to_string(v));
  }
  const double s = std::sqrt(v);
  if (a.order() == 0) return Jet::constant(a.table(), s);
  const double r = 1.0 / v;
  return apply_derivs(a, {s, 0.5 * s * r, -0.25 * s * r * r, 0.375 * s * r * r * r,
                   -0.9375 * s * r * r * r * r});
}

Jet pow(const Jet& a, double p) {
  const double v = a.value();
  const bool integral = p >= 0.0 && std::floor(p) == p;
  if (!integral && !(v > 0.0)) {
    throw Error(ErrorCode::ArithmeticDomain,
                "non-integral power of non-positive value " + std::to_string(v));
  }
  Derivs d{};
  double coef = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = (coef == 0.0) ? 0.0 : coef * std::pow(v, p - k);
    coef *= (p - k);
  }
  return apply_derivs(a, d);
}

Jet cos(const Jet& a) {
  const double c = std::cos(a.value());
  const double s = std::sin(a.value());
  return apply_derivs(a, {c, -s, -c, s, c});
}

Jet sin(const Jet& a) {
  const double c = std::cos(a.value());
  const double s = std::sin(a.value());
  return apply_derivs(a, {s, c, -s, -c, s});
}

Jet cosh(const Jet& a) {
  const double c = std::cosh(a.value());
  const double s = std::sinh(a.value());
  return apply_derivs(a, {c, s, c, s, c});
}

Jet sinh(const Jet& a) {
  const double c = std::cosh(a.value());
  const double s = std::sinh(a.value());
  return apply_derivs(a, {s, c, s, c, s});
}

Jet square(const Jet& a) { return a * a; }

Jet compose(const Jet& poly, std::span<const Jet> args) {
  const auto& ptab = poly.table();
  if (static_cast<int>(args.size()) != ptab.dim()) {
    throw std::invalid_argument("compose: argument count does not match polynomial dimension");
  }
  const auto& out_tab = args.front().table();
  const int max_pow = std::min(ptab.order(), out_tab.order());

  // powers[i][k] = (args[i] - args[i].value())^k
  std::vector<std::vector<Jet>> powers(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    Jet d = args[i];
    d.coeffs()[0] = 0.0;
    powers[i].push_back(Jet::constant(out_tab, 1.0));
    for (int k = 1; k <= max_pow; ++k) powers[i].push_back(powers[i].back() * d);
  }

  Jet out = Jet::constant(out_tab, poly.value());
  for (int idx = 1; idx < ptab.size(); ++idx) {
    const double c = poly.coeffs()[idx];
    if (c == 0.0 || ptab.degree(idx) > max_pow) continue;
    const auto& e = ptab.exponent(idx);
    Jet term = Jet::constant(out_tab, c);
    for (int i = 0; i < ptab.dim(); ++i) {
      if (e[i] > 0) term = term * powers[i][e[i]];
    }
    out += term;
  }
  return out;
}

}  // namespace smlab
