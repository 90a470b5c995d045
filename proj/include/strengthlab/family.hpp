#pragma once

#include <functional>
#include <map>

#include "strengthlab/expsum.hpp"

namespace strengthlab {

// Ordered tuple of polynomials over a common space. Members are linearly
// independent over F_q unless constructed with allow_dependent.
class PolyFamily {
  public:
    static PolyFamily make(std::vector<Polynomial> members, bool allow_dependent = false);

    const std::vector<Polynomial>& members() const { return members_; }
    const Polynomial& operator[](size_t i) const { return members_[i]; }
    uint32_t size() const { return uint32_t(members_.size()); }
    uint32_t nvars() const { return members_[0].nvars(); }
    const Field& field() const { return members_[0].field(); }
    const FieldPtr& field_ptr() const { return members_[0].field_ptr(); }
    std::vector<uint32_t> degrees() const;

  private:
    explicit PolyFamily(std::vector<Polynomial> m) : members_(std::move(m)) {}
    std::vector<Polynomial> members_;
};

// True iff the members are linearly independent over F_q (by Gaussian
// elimination on coefficient vectors).
bool linearly_independent(std::span<const Polynomial> members);

// One representative per projective class of the span minus zero: the first
// nonzero coefficient is normalized to 1; (q^c - 1)/(q - 1) of them, in
// deterministic rank order of the coefficient tuple.
void for_each_span_representative(
    const PolyFamily& fam,
    const std::function<void(const Polynomial&, const std::vector<uint32_t>&)>& fn);
std::vector<Polynomial> span_representatives(const PolyFamily& fam);

struct MinArankResult {
    bool infinite = false;  // every representative has zero tensor bias
    double value = 0.0;
    std::vector<uint32_t> argmin_coeffs;
    std::optional<Polynomial> argmin;
    BiasMode mode = BiasMode::exact;
};

// Minimum analytic rank over the span representatives. Infinite sentinels sort
// above every finite value; ties break by representative order. The exact mode
// batches representatives of equal combo degree through one joint enumeration
// of the member difference forms (a Fourier coefficient of that joint
// distribution is the tensor bias of the combo).
MinArankResult family_min_arank(const PolyFamily& fam, BiasMode mode, const McParams& mc = {},
                                const ExecConfig& cfg = {});

// Basis of the span graded by exact degree, via elimination on the degree
// filtration; keys are degrees, descending iteration gives the filtration.
std::map<uint32_t, std::vector<Polynomial>, std::greater<uint32_t>> graded_basis(const PolyFamily& fam);

// Fourier transform of a fiber distribution: f_hat(l) = sum_lambda
// psi(<lambda, l>) f(lambda). Exact variant returns the unnormalized
// cyclotomic sum (divide by q^n).
std::vector<std::complex<double>> fiber_fourier(const FiberDistribution& dist);
CyclotomicSum fiber_fourier_exact(const FiberDistribution& dist, std::span<const uint32_t> l);

struct EquidistReport {
    double max_deviation = 0.0;  // max over pairs of |f(l)/f(m) - 1|; inf with an empty fiber
    bool has_empty_fiber = false;
    bool satisfied = false;  // max_deviation <= 1/2, decided on exact counts
    // hypothesis side: min over nonzero combos of -log_q |f_hat(l)| =
    // -log_q max_l |bias(sum l_i P_i)|, measured from the same pass
    bool hypothesis_rank_infinite = false;
    double hypothesis_rank = 0.0;
    uint32_t dim_span = 0;
};

EquidistReport equidistribution_check(const PolyFamily& fam, const ExecConfig& cfg = {});

// L(W): the family {P} + {delta_w P, w in W}, dependent members dropped.
PolyFamily derivative_span(const Polynomial& p, std::span<const std::vector<uint32_t>> shifts);

struct ShiftSearchResult {
    std::vector<std::vector<uint32_t>> shifts;  // the best m-tuple
    bool score_infinite = false;
    double score = 0.0;
    std::string scorer;
    uint32_t trials = 0;
    uint64_t seed = 0;
    bool baseline_included = true;
};

// Uniform i.i.d. search over shift tuples, scored by the min analytic rank of
// {P, P_h1, ..., P_hm}. Deterministic in (seed, trials); the zero tuple is
// always scored as a baseline.
ShiftSearchResult search_shifts(const Polynomial& p, uint32_t m, uint32_t trials, uint64_t seed,
                                BiasMode scorer, const McParams& mc = {}, const ExecConfig& cfg = {});

struct ThresholdConsts {
    double a_d = 1.0;
    double b_d = 1.0;
    double c_d = 1.0;
};

struct Threshold {
    double value = 0.0;
    bool degenerate = false;  // T <= 0
};

// T(r, m, d) = [(r / A_d)^{1/B_d} - m] / (2 C_d); the constants are
// user-supplied (the source leaves them existential).
Threshold threshold_T(double r, double m, const ThresholdConsts& consts);

}  // namespace strengthlab
