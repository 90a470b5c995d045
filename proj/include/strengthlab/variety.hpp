#pragma once

#include <optional>

#include "strengthlab/family.hpp"

namespace strengthlab {

struct PointCountRow {
    uint32_t s = 0;
    uint64_t q_s = 0;
    uint64_t n_variety = 0;
    std::optional<uint64_t> n_singular;
    double elapsed_ms = 0.0;
};

struct PointCountTable {
    uint64_t base_p = 0;
    uint32_t base_s = 1;
    std::vector<PointCountRow> rows;
};

// Number of common zeros of the family over F_{p^s}; the base field must be
// prime for s >= 2 (coefficients lift via the prime-subfield embedding).
uint64_t count_points(const PolyFamily& fam, uint32_t s, const ExecConfig& cfg = {});

enum class SingularMethod { minors, pairing };

// Points of X where every c x c minor of the Jacobian vanishes. `minors`
// evaluates precomputed symbolic minors; `pairing` evaluates the Jacobian
// entries pointwise and takes determinants over standard-basis column
// c-subsets. Both enumerate the same minor set and must agree.
uint64_t singular_points(const PolyFamily& fam, uint32_t s, SingularMethod method,
                         const ExecConfig& cfg = {});

enum class DimWhich { variety, singular };

struct DimEstimate {
    bool empty = false;  // zero count at every s
    int value = 0;
    bool low_confidence = false;
    double residual = 0.0;  // |log_q N / s* - value| at the largest s*
};

// Growth-rate dimension estimate round(log_q N_{s*} / s*) from the largest
// row; flags disagreement across rows or a large residual.
DimEstimate dim_estimate(const PointCountTable& table, DimWhich which);

struct VarietyReport {
    DimEstimate dim_x;
    DimEstimate dim_sing;
    bool smooth = false;              // empty singular locus at every measured s
    std::optional<int> kappa;         // dim X - dim X^sing, absent when smooth
    PointCountTable table;
    std::vector<std::string> warnings;
};

// Full table for s = 1..s_max plus dimension estimates and the codimension of
// the singular locus. Emits a char-degenerate warning when some member has a
// variable appearing only with exponents divisible by p.
VarietyReport codim_singular(const PolyFamily& fam, uint32_t s_max, const ExecConfig& cfg = {},
                             SingularMethod method = SingularMethod::minors);

}  // namespace strengthlab
