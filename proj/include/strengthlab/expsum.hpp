#pragma once

#include <complex>
#include <optional>

#include "strengthlab/cyclotomic.hpp"
#include "strengthlab/exec.hpp"
#include "strengthlab/poly.hpp"

namespace strengthlab {

enum class BiasMode { exact, monte_carlo };

struct McParams {
    uint64_t samples = 100000;
    double delta = 0.01;  // two-sided failure probability for the Hoeffding radius
    uint64_t seed = 0;
};

struct BiasReport {
    BiasMode mode = BiasMode::exact;
    std::complex<double> value;  // normalized E_v psi(P(v))
    double magnitude = 0.0;
    std::optional<CyclotomicSum> exact;  // exact mode only
    double ci_radius = 0.0;              // per real/imaginary part
    uint64_t samples = 0;
    uint64_t seed = 0;
    uint64_t q = 0;
    uint32_t n = 0;
    int threads = 1;
    double elapsed_ms = 0.0;
};

// Exact histogram of Tr(P(v)) over all q^n points. Deterministic and
// independent of the thread count.
CyclotomicSum char_sum_exact(const Polynomial& p, const ExecConfig& cfg = {});

// Histogram of the values P(v) themselves (size q), for character-change
// arguments psi -> psi_a.
std::vector<uint64_t> value_histogram(const Polynomial& p, const ExecConfig& cfg = {});

BiasReport bias(const Polynomial& p, BiasMode mode, const McParams& mc = {}, const ExecConfig& cfg = {});

// Exact character sum of a multilinear form over its full domain q^{blocks*width},
// computed with character orthogonality over the first block. Equal to
// char_sum_exact of the base polynomial (cross-checked in the test suite) but
// costs q^{(blocks-1)*width} instead of q^{blocks*width}.
CyclotomicSum tensor_char_sum(const Tensor& t, const ExecConfig& cfg = {});

struct ArankResult {
    BiasMode mode = BiasMode::exact;
    bool infinite = false;  // exact bias of the multilinear form is 0
    double value = 0.0;     // exact mode point value
    double lo = 0.0, hi = 0.0;  // monte carlo interval
    uint64_t tensor_bias_numerator = 0;  // exact mode: b(P~) = numerator / q^{n d}
    uint32_t domain_vars = 0;
};

// Analytic rank -log_q b(P~) where P~ = multilinearize(P).
ArankResult analytic_rank(const Polynomial& p, BiasMode mode, const McParams& mc = {},
                          const ExecConfig& cfg = {});

enum class GowersPath { definition, tensor };

struct GowersResult {
    double norm = 0.0;
    CyclotomicSum sum;      // exact unnormalized sum underlying norm^{2^d}
    uint32_t domain_vars = 0;  // the sum ranges over q^{domain_vars}
};

// ||psi o P||_{U_d}. The definition path enumerates (x, v_1..v_d) and
// multiplies out the 2^d-fold product; the tensor path requires deg(P) = d and
// enumerates the multilinear form directly.
GowersResult gowers_norm(const Polynomial& p, uint32_t d, GowersPath path, const ExecConfig& cfg = {});

// Joint value distribution of a family over F_q^c.
struct FiberDistribution {
    FieldPtr field;
    uint32_t c = 0;
    uint32_t n = 0;
    std::vector<uint64_t> fibers;  // dense, indexed by sum lambda_i q^i
    uint64_t total = 0;

    double f(uint64_t rank) const { return double(fibers[rank]) / double(total); }
};

FiberDistribution joint_distribution(std::span<const Polynomial> family, const ExecConfig& cfg = {});

// Ceil(-log_q(numerator / q^D)) for a positive numerator; used for the
// analytic lower bound on the partition rank.
uint32_t ceil_neg_log_q(uint64_t numerator, uint32_t domain_vars, uint64_t q);

}  // namespace strengthlab
