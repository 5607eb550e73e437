#pragma once

#include <cmath>
#include <vector>

#include "qsc/linalg.hpp"

namespace th {

inline qsc::CMatrix mat2(qsc::cplx a, qsc::cplx b, qsc::cplx c, qsc::cplx d) {
  qsc::CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline qsc::DensityMatrix diag_state(std::vector<double> p) { return qsc::DensityMatrix::diagonal(p); }

// w |psi><psi| + (1-w) I/d
inline qsc::DensityMatrix noisy_pure(qsc::CVector psi, double w) {
  psi.normalize();
  const int d = static_cast<int>(psi.size());
  qsc::CMatrix m = w * psi * psi.adjoint() + (1 - w) / d * qsc::CMatrix::Identity(d, d);
  return qsc::DensityMatrix(qsc::Operator(m));
}

inline qsc::CVector ket(std::vector<qsc::cplx> v) {
  qsc::CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

inline const qsc::CMatrix& pauli_x() {
  static const qsc::CMatrix m = mat2(0, 1, 1, 0);
  return m;
}
inline const qsc::CMatrix& pauli_z() {
  static const qsc::CMatrix m = mat2(1, 0, 0, -1);
  return m;
}

}  // namespace th
