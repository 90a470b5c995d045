#pragma once

#include "strengthlab/family.hpp"

namespace strengthlab {

// Structured generator families built from sums of maximal minors.
//
// Variable flattening conventions are frozen so certificates and reports stay
// portable:
//   gen_F(n, s):              y^t_i -> x_{(t-1)n + i}        (row-major)
//   gen_F_block(n, s, m, i):  y^t_{b,i} -> x_{((t-1)m + (b-1))n + i}
//   gen_G(t, s, degrees):     w^{i,x}_r -> x_{offset(i) + rank(x) t + r}
// with offset(i) = t * sum_{i' < i} binom(e, d'_{i'}) and rank(x) the
// lexicographic rank of the d'_i-subset x of [e].

// F^n_s = sum over 1 <= i_1 < ... < i_s <= n of det(y^1_{i_1}, ..., y^s_{i_s}),
// in s*n variables; degree s, multilinear and antisymmetric in the rows.
Polynomial gen_F(FieldPtr field, uint32_t n, uint32_t s);

// F^n_{i,s}: F^n_s applied to block i of m; depends only on block-i variables,
// in s*n*m variables total.
Polynomial gen_F_block(FieldPtr field, uint32_t n, uint32_t s, uint32_t m, uint32_t i);

// G^n_s with coordinate range t: variables w^{i,x_i}_r for labels i in [s],
// sets x_i of size d_i - 1 in [e], coordinates r in [t]; the sum runs over
// ordered set tuples covering [e] (their sizes force disjointness).
Polynomial gen_G(FieldPtr field, uint32_t t, uint32_t s, std::span<const uint32_t> degrees);

// Human-readable variable names for the flattening, index 0 = x1.
std::vector<std::string> gen_F_names(uint32_t n, uint32_t s);
std::vector<std::string> gen_F_block_names(uint32_t n, uint32_t s, uint32_t m);
std::vector<std::string> gen_G_names(uint32_t t, uint32_t s, std::span<const uint32_t> degrees);

// The composite family {P^1, ..., P^s} + {F^t_s on the delta rows of block i}:
// member s+i composes F^t_s with rows y^j = (delta_{w_{(i-1)t+1}} P^j, ...,
// delta_{w_{it}} P^j). Requires |shifts| = t*m and every input degree >= 2.
PolyFamily build_theorem_m_family(const PolyFamily& inputs,
                                  std::span<const std::vector<uint32_t>> shifts, uint32_t t, uint32_t m);

}  // namespace strengthlab
