#include "wt/lattice.hpp"

#include "wt/error.hpp"

namespace wt {

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (o.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "lattice point addition");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (o.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "lattice point subtraction");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r(*this);
  for (int& v : r.c_) v = -v;
  return r;
}

std::string LatticePoint::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

}  // namespace wt
