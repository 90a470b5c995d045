#pragma once

#include <optional>

#include "strengthlab/exec.hpp"
#include "strengthlab/poly.hpp"

namespace strengthlab {

// One summand of a partition-rank decomposition: T += Q * R with Q supported
// on the blocks in J and R on the complement, each multilinear across its own
// blocks. Both factors live in the tensor's full variable space.
struct CertSummand {
    std::vector<uint32_t> blocks;  // J, 1-based, sorted, proper nonempty
    Polynomial q_factor;
    Polynomial r_factor;
};

struct PartitionCertificate {
    uint32_t blocks = 0;  // d
    std::vector<CertSummand> summands;

    uint32_t size() const { return uint32_t(summands.size()); }
};

// True iff the summands are well-formed for T's block structure and their sum
// equals T as canonical polynomials.
bool verify_certificate(const Tensor& t, const PartitionCertificate& cert);

// d = 2: partition rank is the matrix rank of the coefficient matrix; also
// produces a matching outer-product certificate.
uint32_t prank_bilinear(const Tensor& t, PartitionCertificate* cert_out = nullptr);

// Analytic lower bound ceil(-log_q b(T)), guaranteed <= pr(T).
uint32_t prank_lower(const Tensor& t, const ExecConfig& cfg = {});

// Heuristic certificate search: flattening-rank peels per split, a greedy
// mixed-split peel with seeded restarts, and a budgeted exhaustive phase.
// Never claims minimality; a returned certificate always verifies.
std::optional<PartitionCertificate> prank_upper_search(const Tensor& t, uint64_t budget = 20000,
                                                       uint64_t seed = 0);

struct RankBounds {
    uint32_t lower = 0;                // floor on r_nc via ceil(prank_lower / C_d)
    std::optional<uint32_t> upper;     // best certificate size for P~, when found
    uint32_t prank_lower_value = 0;    // the analytic bound on pr(P~) itself
    uint64_t c_d = 1;                  // constant used in the sandwich
    std::string method;
};

// Sandwich around the nc-rank via Remark-style constants: C_d defaults to 4^d
// and collapses to 1 when char > d.
RankBounds ncrank_bounds(const Polynomial& p, std::optional<uint64_t> c_d_override = {},
                         uint64_t search_budget = 20000, const ExecConfig& cfg = {});

// True iff P = sum Q_i R_i with every factor of degree < deg(P).
bool strength_verify(const Polynomial& p,
                     std::span<const std::pair<Polynomial, Polynomial>> summands);

}  // namespace strengthlab
