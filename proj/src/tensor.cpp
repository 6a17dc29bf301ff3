#include "smlab/tensor.hpp"

namespace smlab {

Derivatives unpack(const Jet& jet) {
  const int n = jet.dim();
  Derivatives d;
  d.dim = n;
  d.order = jet.order();
  d.value = jet.value();
  if (d.order >= 1) {
    d.grad.resize(n);
    for (int i = 0; i < n; ++i) d.grad[i] = jet.partial({i});
  }
  if (d.order >= 2) {
    d.hess.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d.hess(i, j) = jet.partial({i, j});
    }
  }
  if (d.order >= 3) {
    d.d3 = Tensor3(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) d.d3(i, j, k) = jet.partial({i, j, k});
      }
    }
  }
  if (d.order >= 4) {
    d.d4 = Tensor4(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) d.d4(i, j, k, l) = jet.partial({i, j, k, l});
        }
      }
    }
  }
  return d;
}

Derivatives derivatives(const JetProgram& program, const Vector& x, int order) {
  return unpack(jet_eval(program, x, order));
}

}  // namespace smlab
