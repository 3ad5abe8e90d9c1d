#include "etf/elimination.hpp"

#include <numeric>

namespace etf {

ExactMatrix to_exact_matrix(const std::vector<std::vector<Cyclotomic>>& mat) {
  ExactMatrix out;
  out.n_rows = mat.size();
  out.n_cols = out.n_rows ? mat[0].size() : 0;
  out.m = 1;
  for (const auto& row : mat) {
    if (row.size() != out.n_cols)
      throw std::invalid_argument("ragged matrix");
    for (const auto& e : row) {
      if (out.m == 1)
        out.m = e.order();
      else if (e.order() != out.m)
        throw std::invalid_argument("mixed cyclotomic orders in matrix");
    }
  }
  const unsigned phi = totient(out.m);
  Int lcm = 1;
  for (const auto& row : mat)
    for (const auto& e : row)
      for (const Rat& r : e.coeffs()) lcm = boost::multiprecision::lcm(lcm, Int(denominator(r)));
  out.entries.reserve(out.n_rows * out.n_cols);
  for (const auto& row : mat)
    for (const auto& e : row) {
      std::vector<Int> v(phi);
      const auto& c = e.coeffs();
      for (unsigned i = 0; i < phi; ++i) {
        Rat scaled = c[i] * Rat(lcm);
        if (denominator(scaled) != 1)
          throw std::logic_error("denominator clearing failed");
        v[i] = numerator(scaled);
      }
      out.entries.push_back(std::move(v));
    }
  return out;
}

bool fits_backend64(const ExactMatrix& mat) {
  for (const auto& e : mat.entries)
    for (const Int& c : e)
      if (c > LLONG_MAX || c < LLONG_MIN) return false;
  return true;
}

size_t exact_rank_subset(const ExactMatrix& mat, const std::vector<int>& idx) {
  if (fits_backend64(mat)) {
    try {
      RingOps<Backend64> ops(mat.m);
      return elimination_rank(ops, mat, idx, idx);
    } catch (const CoeffOverflow&) {
      // fall through to the GMP lane
    }
  }
  RingOps<BackendInt> ops(mat.m);
  return elimination_rank(ops, mat, idx, idx);
}

size_t exact_rank(const ExactMatrix& mat) {
  std::vector<int> ri(mat.n_rows), ci(mat.n_cols);
  std::iota(ri.begin(), ri.end(), 0);
  std::iota(ci.begin(), ci.end(), 0);
  if (fits_backend64(mat)) {
    try {
      RingOps<Backend64> ops(mat.m);
      return elimination_rank(ops, mat, ri, ci);
    } catch (const CoeffOverflow&) {
    }
  }
  RingOps<BackendInt> ops(mat.m);
  return elimination_rank(ops, mat, ri, ci);
}

}  // namespace etf
