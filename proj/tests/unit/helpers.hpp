#pragma once

#include <random>

#include "pmlcnls/model.hpp"

namespace pmlcnls::test_util {

inline void fill_random(ComplexState& u, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : u.data()) v = {dist(rng), dist(rng)};
}

inline ComplexState random_state(const DomainLayout& layout, const GridSpec& grid, int n,
                                 unsigned seed) {
  ComplexState u(layout, grid, n);
  fill_random(u, seed);
  return u;
}

/// Zeroes the outer boundary rows and columns (the Dirichlet points).
inline void zero_boundary(ComplexState& u) {
  const auto& g = u.grid();
  for (int j = 0; j < u.n_components(); ++j) {
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int iy = 0; iy < g.ny; ++iy) {
        if (ix == 0 || iy == 0 || ix == g.nx - 1 || iy == g.ny - 1) u.at(j, ix, iy) = 0.0;
      }
    }
  }
}

}  // namespace pmlcnls::test_util
