#include "smlab/potential.hpp"

#include "smlab/error.hpp"

namespace smlab {

std::vector<Jet> ChartMap::apply_jets(const Vector& x, int order) const {
  if (x.size() != source_dim) throw Error(ErrorCode::WrongDimension, name + ": wrong source dimension");
  if (source_inside && !source_inside(as_span(x))) {
    throw Error(ErrorCode::DomainViolation, name + ": point outside the source domain");
  }
  const auto& table = MonomialTable::get(source_dim, order);
  std::vector<Jet> vars;
  vars.reserve(source_dim);
  for (int i = 0; i < source_dim; ++i) vars.push_back(Jet::variable(table, i, x[i]));
  auto out = forward(vars);
  if (static_cast<int>(out.size()) != target_dim) {
    throw Error(ErrorCode::WrongDimension, name + ": forward map returned wrong dimension");
  }
  return out;
}

Vector ChartMap::apply(const Vector& x) const {
  const auto out = apply_jets(x, 0);
  Vector y(target_dim);
  for (int i = 0; i < target_dim; ++i) y[i] = out[i].value();
  return y;
}

Matrix ChartMap::jacobian(const Vector& x) const {
  const auto out = apply_jets(x, 1);
  Matrix j(target_dim, source_dim);
  for (int r = 0; r < target_dim; ++r) {
    for (int c = 0; c < source_dim; ++c) j(r, c) = out[r].partial({c});
  }
  return j;
}

}  // namespace smlab
