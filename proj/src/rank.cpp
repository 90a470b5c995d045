#include "strengthlab/rank.hpp"

#include <algorithm>

#include "strengthlab/expsum.hpp"
#include "strengthlab/rng.hpp"

namespace strengthlab {

namespace {

// Multilinear across exactly the given blocks: every monomial takes one
// variable from each block in the set and nothing else.
bool multilinear_on(const Polynomial& p, const std::vector<uint32_t>& blocks1, uint32_t width) {
    for (auto& [m, c] : p.terms()) {
        if (m.vars.size() != blocks1.size()) return false;
        size_t k = 0;
        for (uint32_t b : blocks1) {
            auto [v, e] = m.vars[k++];
            if (e != 1 || v / width != b - 1) return false;
        }
    }
    return true;
}

// ---- flattening of a tensor along a block split ----

struct Flattening {
    std::vector<uint32_t> row_blocks;  // 1-based block ids (J)
    std::vector<uint32_t> col_blocks;  // complement
    uint64_t rows = 0, cols = 0;
    std::vector<uint32_t> m;  // dense rows x cols, coefficient ids

    uint32_t& at(uint64_t r, uint64_t c) { return m[r * cols + c]; }
    uint32_t at(uint64_t r, uint64_t c) const { return m[r * cols + c]; }
};

uint64_t side_size(size_t nblocks, uint32_t width) {
    uint64_t s = 1;
    for (size_t i = 0; i < nblocks; ++i) s *= width;
    return s;
}

// Decodes a mixed-radix side index into a monomial over the given blocks.
Monomial side_monomial(uint64_t idx, const std::vector<uint32_t>& blocks1, uint32_t width) {
    Monomial m;
    for (uint32_t b : blocks1) {
        uint32_t off = uint32_t(idx % width);
        idx /= width;
        m.vars.emplace_back(uint16_t((b - 1) * width + off), 1);
    }
    std::sort(m.vars.begin(), m.vars.end());
    return m;
}

std::optional<Flattening> flatten(const Tensor& t, const std::vector<uint32_t>& row_blocks,
                                  uint64_t size_cap = 1u << 22) {
    Flattening fl;
    fl.row_blocks = row_blocks;
    for (uint32_t b = 1; b <= t.blocks; ++b)
        if (std::find(row_blocks.begin(), row_blocks.end(), b) == row_blocks.end())
            fl.col_blocks.push_back(b);
    fl.rows = side_size(fl.row_blocks.size(), t.width);
    fl.cols = side_size(fl.col_blocks.size(), t.width);
    if (fl.rows * fl.cols > size_cap) return std::nullopt;
    fl.m.assign(fl.rows * fl.cols, 0);
    for (auto& [mono, c] : t.base.terms()) {
        uint64_t r = 0, cl = 0;
        // vars are sorted by index = sorted by block
        for (size_t i = fl.row_blocks.size(); i-- > 0;) {
            uint32_t b = fl.row_blocks[i];
            r = r * t.width + mono.vars[b - 1].first % t.width;
        }
        for (size_t i = fl.col_blocks.size(); i-- > 0;) {
            uint32_t b = fl.col_blocks[i];
            cl = cl * t.width + mono.vars[b - 1].first % t.width;
        }
        fl.at(r, cl) = c;
    }
    return fl;
}

// Rank-1 peeling of a flattening into an exact certificate.
PartitionCertificate peel_certificate(const Tensor& t, Flattening fl) {
    const Field& f = t.base.field();
    PartitionCertificate cert;
    cert.blocks = t.blocks;
    for (;;) {
        uint64_t pr = fl.rows, pc = fl.cols;
        bool found = false;
        for (uint64_t r = 0; r < fl.rows && !found; ++r)
            for (uint64_t c = 0; c < fl.cols && !found; ++c)
                if (fl.at(r, c) != 0) {
                    pr = r;
                    pc = c;
                    found = true;
                }
        if (!found) break;
        uint32_t pivot = fl.at(pr, pc);
        uint32_t pivot_inv = f.inv(pivot);
        Polynomial q(t.base.field_ptr(), t.base.nvars()), rp(t.base.field_ptr(), t.base.nvars());
        for (uint64_t r = 0; r < fl.rows; ++r)
            if (fl.at(r, pc) != 0) q.add_term(side_monomial(r, fl.row_blocks, t.width), fl.at(r, pc));
        for (uint64_t c = 0; c < fl.cols; ++c)
            if (fl.at(pr, c) != 0)
                rp.add_term(side_monomial(c, fl.col_blocks, t.width), f.mul(fl.at(pr, c), pivot_inv));
        // subtract the outer product
        std::vector<uint32_t> colv(fl.rows), rowv(fl.cols);
        for (uint64_t r = 0; r < fl.rows; ++r) colv[r] = fl.at(r, pc);
        for (uint64_t c = 0; c < fl.cols; ++c) rowv[c] = f.mul(fl.at(pr, c), pivot_inv);
        for (uint64_t r = 0; r < fl.rows; ++r) {
            if (colv[r] == 0) continue;
            for (uint64_t c = 0; c < fl.cols; ++c) {
                if (rowv[c] == 0) continue;
                fl.at(r, c) = f.sub(fl.at(r, c), f.mul(colv[r], rowv[c]));
            }
        }
        cert.summands.push_back(CertSummand{fl.row_blocks, std::move(q), std::move(rp)});
    }
    return cert;
}

std::vector<std::vector<uint32_t>> proper_splits_containing_block1(uint32_t d) {
    std::vector<std::vector<uint32_t>> out;
    for (uint32_t mask = 1; mask < (1u << d); ++mask) {
        if (!(mask & 1)) continue;            // block 1 on the row side, dedupes complements
        if (mask == (1u << d) - 1) continue;  // proper
        std::vector<uint32_t> blocks;
        for (uint32_t b = 0; b < d; ++b)
            if (mask & (1u << b)) blocks.push_back(b + 1);
        out.push_back(std::move(blocks));
    }
    return out;
}

uint64_t matrix_rank_field(const Field& f, std::vector<uint32_t> m, uint64_t rows, uint64_t cols) {
    uint64_t rank = 0;
    for (uint64_t c = 0; c < cols && rank < rows; ++c) {
        uint64_t piv = rows;
        for (uint64_t r = rank; r < rows; ++r)
            if (m[r * cols + c] != 0) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        for (uint64_t k = 0; k < cols; ++k) std::swap(m[rank * cols + k], m[piv * cols + k]);
        uint32_t inv = f.inv(m[rank * cols + c]);
        for (uint64_t r = 0; r < rows; ++r) {
            if (r == rank || m[r * cols + c] == 0) continue;
            uint32_t factor = f.mul(m[r * cols + c], inv);
            for (uint64_t k = c; k < cols; ++k)
                m[r * cols + k] = f.sub(m[r * cols + k], f.mul(factor, m[rank * cols + k]));
        }
        ++rank;
    }
    return rank;
}

// Budgeted exhaustive search for a certificate with exactly `r` summands:
// enumerate split choices and projective Q coefficient vectors, then solve a
// linear system for the R factors.
std::optional<PartitionCertificate> exhaustive_search(const Tensor& t, uint32_t r, uint64_t& budget) {
    const Field& f = t.base.field();
    const uint32_t width = t.width;
    auto splits = proper_splits_containing_block1(t.blocks);
    if (splits.empty() || r == 0) return std::nullopt;

    // dense coefficient table of T over the full monomial space width^d
    uint64_t full = side_size(t.blocks, width);
    if (full > 4096) return std::nullopt;
    std::vector<uint32_t> target(full, 0);
    std::vector<uint32_t> all_blocks(t.blocks);
    for (uint32_t b = 0; b < t.blocks; ++b) all_blocks[b] = b + 1;
    for (auto& [m, c] : t.base.terms()) {
        uint64_t idx = 0;
        for (uint32_t b = t.blocks; b-- > 0;) idx = idx * width + m.vars[b].first % width;
        target[idx] = c;
    }

    // projective vectors over F_q^dim (first nonzero coordinate = 1)
    auto projective_count = [&](uint64_t dim) {
        uint64_t qd = 1;
        for (uint64_t i = 0; i < dim; ++i) qd *= f.q();
        return (qd - 1) / (f.q() - 1);
    };
    auto projective_vec = [&](uint64_t dim, uint64_t rank_idx) {
        // enumerate: leading position k = first nonzero (value 1), then free tail
        std::vector<uint32_t> v(dim, 0);
        uint64_t tail = 1;
        for (uint64_t k = dim; k-- > 0;) {
            uint64_t count_k = tail;  // q^{dim-1-k}
            if (rank_idx < count_k) {
                v[k] = 1;
                uint64_t rest = rank_idx;
                for (uint64_t j = k + 1; j < dim; ++j) {
                    v[j] = uint32_t(rest % f.q());
                    rest /= f.q();
                }
                return v;
            }
            rank_idx -= count_k;
            tail *= f.q();
        }
        return v;
    };

    std::vector<uint32_t> split_choice(r, 0);
    for (;;) {
        // count assignments for this split combination
        uint64_t assignments = 1;
        bool ok = true;
        std::vector<uint64_t> qdims(r), pcounts(r);
        for (uint32_t i = 0; i < r; ++i) {
            qdims[i] = side_size(splits[split_choice[i]].size(), width);
            pcounts[i] = projective_count(qdims[i]);
            if (assignments > budget / std::max<uint64_t>(pcounts[i], 1)) {
                ok = false;
                break;
            }
            assignments *= pcounts[i];
        }
        if (ok && assignments <= budget) {
            budget -= assignments;
            std::vector<uint64_t> qidx(r, 0);
            for (uint64_t a = 0; a < assignments; ++a) {
                uint64_t rest = a;
                for (uint32_t i = 0; i < r; ++i) {
                    qidx[i] = rest % pcounts[i];
                    rest /= pcounts[i];
                }
                // unknowns: R_i coefficients over the complement spaces
                std::vector<uint64_t> rdims(r), roff(r + 1, 0);
                for (uint32_t i = 0; i < r; ++i) {
                    rdims[i] = full / qdims[i];
                    roff[i + 1] = roff[i] + rdims[i];
                }
                uint64_t unknowns = roff[r];
                std::vector<uint32_t> a_mat(full * (unknowns + 1), 0);
                std::vector<std::vector<uint32_t>> qvecs(r);
                for (uint32_t i = 0; i < r; ++i) qvecs[i] = projective_vec(qdims[i], qidx[i]);
                // each full monomial index decomposes per split into (row, col)
                for (uint64_t mi = 0; mi < full; ++mi) {
                    for (uint32_t i = 0; i < r; ++i) {
                        const auto& row_blocks = splits[split_choice[i]];
                        uint64_t ridx = 0, cidx = 0, rmul = 1, cmul = 1;
                        uint64_t rest2 = mi;
                        for (uint32_t b = 0; b < t.blocks; ++b) {
                            uint32_t off = uint32_t(rest2 % width);
                            rest2 /= width;
                            if (std::find(row_blocks.begin(), row_blocks.end(), b + 1) != row_blocks.end()) {
                                ridx += rmul * off;
                                rmul *= width;
                            } else {
                                cidx += cmul * off;
                                cmul *= width;
                            }
                        }
                        if (qvecs[i][ridx] != 0)
                            a_mat[mi * (unknowns + 1) + roff[i] + cidx] =
                                f.add(a_mat[mi * (unknowns + 1) + roff[i] + cidx], qvecs[i][ridx]);
                    }
                    a_mat[mi * (unknowns + 1) + unknowns] = target[mi];
                }
                // Gaussian elimination, consistency + solution
                uint64_t rank_rows = 0;
                std::vector<uint64_t> pivot_col;
                for (uint64_t c = 0; c < unknowns && rank_rows < full; ++c) {
                    uint64_t piv = full;
                    for (uint64_t rr = rank_rows; rr < full; ++rr)
                        if (a_mat[rr * (unknowns + 1) + c] != 0) {
                            piv = rr;
                            break;
                        }
                    if (piv == full) continue;
                    for (uint64_t k = 0; k <= unknowns; ++k)
                        std::swap(a_mat[rank_rows * (unknowns + 1) + k], a_mat[piv * (unknowns + 1) + k]);
                    uint32_t inv = f.inv(a_mat[rank_rows * (unknowns + 1) + c]);
                    for (uint64_t rr = 0; rr < full; ++rr) {
                        if (rr == rank_rows) continue;
                        uint32_t v = a_mat[rr * (unknowns + 1) + c];
                        if (v == 0) continue;
                        uint32_t factor = f.mul(v, inv);
                        for (uint64_t k = c; k <= unknowns; ++k)
                            a_mat[rr * (unknowns + 1) + k] = f.sub(
                                a_mat[rr * (unknowns + 1) + k],
                                f.mul(factor, a_mat[rank_rows * (unknowns + 1) + k]));
                    }
                    pivot_col.push_back(c);
                    ++rank_rows;
                }
                bool consistent = true;
                for (uint64_t rr = rank_rows; rr < full && consistent; ++rr)
                    if (a_mat[rr * (unknowns + 1) + unknowns] != 0) consistent = false;
                if (!consistent) continue;
                // read off a particular solution (free unknowns = 0)
                std::vector<uint32_t> sol(unknowns, 0);
                for (uint64_t rr = 0; rr < rank_rows; ++rr) {
                    uint64_t c = pivot_col[rr];
                    uint32_t inv = f.inv(a_mat[rr * (unknowns + 1) + c]);
                    sol[c] = f.mul(a_mat[rr * (unknowns + 1) + unknowns], inv);
                }
                PartitionCertificate cert;
                cert.blocks = t.blocks;
                for (uint32_t i = 0; i < r; ++i) {
                    const auto& row_blocks = splits[split_choice[i]];
                    std::vector<uint32_t> col_blocks;
                    for (uint32_t b = 1; b <= t.blocks; ++b)
                        if (std::find(row_blocks.begin(), row_blocks.end(), b) == row_blocks.end())
                            col_blocks.push_back(b);
                    Polynomial q(t.base.field_ptr(), t.base.nvars());
                    Polynomial rp(t.base.field_ptr(), t.base.nvars());
                    for (uint64_t k = 0; k < qdims[i]; ++k)
                        if (qvecs[i][k] != 0) q.add_term(side_monomial(k, row_blocks, width), qvecs[i][k]);
                    for (uint64_t k = 0; k < rdims[i]; ++k)
                        if (sol[roff[i] + k] != 0)
                            rp.add_term(side_monomial(k, col_blocks, width), sol[roff[i] + k]);
                    if (rp.is_zero() || q.is_zero()) continue;  // degenerate summand, drop
                    cert.summands.push_back(CertSummand{row_blocks, std::move(q), std::move(rp)});
                }
                if (verify_certificate(t, cert)) return cert;
            }
        }
        // next split combination (nondecreasing to avoid permutations)
        uint32_t i = r;
        while (i-- > 0) {
            if (++split_choice[i] < splits.size()) {
                for (uint32_t j = i + 1; j < r; ++j) split_choice[j] = split_choice[i];
                break;
            }
            if (i == 0) return std::nullopt;
        }
        if (budget == 0) return std::nullopt;
    }
}

}  // namespace

bool verify_certificate(const Tensor& t, const PartitionCertificate& cert) {
    if (cert.blocks != t.blocks) fail(errc::block_mismatch, "certificate block count != tensor");
    Polynomial acc(t.base.field_ptr(), t.base.nvars());
    for (const auto& s : cert.summands) {
        if (s.blocks.empty() || s.blocks.size() >= t.blocks) return false;
        for (uint32_t b : s.blocks)
            if (b < 1 || b > t.blocks) fail(errc::block_mismatch, "block index out of range");
        if (s.q_factor.nvars() != t.base.nvars() || s.r_factor.nvars() != t.base.nvars())
            fail(errc::block_mismatch, "certificate factors over a different space");
        std::vector<uint32_t> comp;
        for (uint32_t b = 1; b <= t.blocks; ++b)
            if (std::find(s.blocks.begin(), s.blocks.end(), b) == s.blocks.end()) comp.push_back(b);
        if (!multilinear_on(s.q_factor, s.blocks, t.width)) return false;
        if (!multilinear_on(s.r_factor, comp, t.width)) return false;
        acc = acc + s.q_factor * s.r_factor;
    }
    return acc == t.base;
}

uint32_t prank_bilinear(const Tensor& t, PartitionCertificate* cert_out) {
    if (t.blocks != 2) fail(errc::block_mismatch, "prank_bilinear requires d = 2");
    auto fl = flatten(t, {1});
    if (!fl) fail(errc::budget_exceeded, "flattening too large");
    uint64_t r = matrix_rank_field(t.base.field(), fl->m, fl->rows, fl->cols);
    if (cert_out) *cert_out = peel_certificate(t, *fl);
    return uint32_t(r);
}

uint32_t prank_lower(const Tensor& t, const ExecConfig& cfg) {
    CyclotomicSum sum = tensor_char_sum(t, cfg);
    auto numer = sum.as_nonneg_integer();
    if (!numer) fail(errc::internal_overflow, "tensor bias not a nonnegative integer");
    if (*numer == 0) fail(errc::zero_bias, "tensor bias is zero; lower bound unbounded");
    return ceil_neg_log_q(*numer, t.blocks * t.width, t.base.field().q());
}

std::optional<PartitionCertificate> prank_upper_search(const Tensor& t, uint64_t budget, uint64_t seed) {
    if (t.base.is_zero()) return PartitionCertificate{t.blocks, {}};
    if (t.blocks < 2) return std::nullopt;  // no proper split exists

    std::optional<PartitionCertificate> best;
    auto consider = [&](PartitionCertificate cand) {
        if (!verify_certificate(t, cand)) return;
        if (!best || cand.size() < best->size()) best = std::move(cand);
    };

    auto splits = proper_splits_containing_block1(t.blocks);

    // (a) single-split peels: certificate size = flattening rank
    for (const auto& sp : splits) {
        if (auto fl = flatten(t, sp)) consider(peel_certificate(t, *fl));
    }

    // (b) greedy mixed-split peeling with seeded random pivot choices
    const Field& f = t.base.field();
    for (uint64_t restart = 0; restart < 4; ++restart) {
        Polynomial cur = t.base;
        PartitionCertificate cert;
        cert.blocks = t.blocks;
        uint32_t cap = best ? best->size() : uint32_t(t.base.term_count()) + 1;
        bool dead = false;
        uint64_t ctr = 0;
        while (!cur.is_zero() && !dead) {
            if (cert.size() + 1 >= cap) {
                dead = true;
                break;
            }
            Tensor rem{cur, t.blocks, t.width};
            // best rank-1 subtraction over all splits by term-count reduction
            std::optional<std::tuple<long, size_t, uint64_t, uint64_t>> pick;  // (-reduction, split, r, c)
            for (size_t si = 0; si < splits.size(); ++si) {
                auto fl = flatten(rem, splits[si]);
                if (!fl) continue;
                // candidate pivots: seeded sample plus the first nonzero
                std::vector<std::pair<uint64_t, uint64_t>> pivots;
                for (uint64_t r = 0; r < fl->rows && pivots.size() < 4; ++r)
                    for (uint64_t c = 0; c < fl->cols && pivots.size() < 4; ++c)
                        if (fl->at(r, c) != 0) pivots.emplace_back(r, c);
                if (pivots.empty()) continue;
                uint64_t jitter = ctr_value(seed, restart, ctr++);
                auto [pr, pc] = pivots[size_t(bounded(jitter, pivots.size()))];
                // evaluate the term-count reduction of subtracting the outer product
                long before = long(cur.term_count());
                uint32_t pivot_inv = f.inv(fl->at(pr, pc));
                Polynomial q(t.base.field_ptr(), t.base.nvars()), rp(t.base.field_ptr(), t.base.nvars());
                for (uint64_t r = 0; r < fl->rows; ++r)
                    if (fl->at(r, pc) != 0)
                        q.add_term(side_monomial(r, fl->row_blocks, t.width), fl->at(r, pc));
                for (uint64_t c = 0; c < fl->cols; ++c)
                    if (fl->at(pr, c) != 0)
                        rp.add_term(side_monomial(c, fl->col_blocks, t.width),
                                    f.mul(fl->at(pr, c), pivot_inv));
                Polynomial next = cur - q * rp;
                long red = before - long(next.term_count());
                if (!pick || -red < std::get<0>(*pick)) pick = std::make_tuple(-red, si, pr, pc);
            }
            if (!pick) {
                dead = true;
                break;
            }
            auto [negred, si, pr, pc] = *pick;
            auto fl = flatten(rem, splits[si]);
            uint32_t pivot_inv = f.inv(fl->at(pr, pc));
            Polynomial q(t.base.field_ptr(), t.base.nvars()), rp(t.base.field_ptr(), t.base.nvars());
            for (uint64_t r = 0; r < fl->rows; ++r)
                if (fl->at(r, pc) != 0) q.add_term(side_monomial(r, fl->row_blocks, t.width), fl->at(r, pc));
            for (uint64_t c = 0; c < fl->cols; ++c)
                if (fl->at(pr, c) != 0)
                    rp.add_term(side_monomial(c, fl->col_blocks, t.width), f.mul(fl->at(pr, c), pivot_inv));
            cur = cur - q * rp;
            cert.summands.push_back(CertSummand{splits[si], std::move(q), std::move(rp)});
        }
        if (!dead && cur.is_zero()) consider(std::move(cert));
    }

    // (c) budgeted exhaustive improvement below the best found size
    if (best && best->size() >= 2) {
        uint64_t remaining = budget;
        for (uint32_t r = 1; r < best->size() && remaining > 0; ++r) {
            if (auto cand = exhaustive_search(t, r, remaining)) {
                consider(std::move(*cand));
                break;
            }
        }
    }
    return best;
}

RankBounds ncrank_bounds(const Polynomial& p, std::optional<uint64_t> c_d_override, uint64_t search_budget,
                         const ExecConfig& cfg) {
    if (p.degree() < 2)
        fail(errc::degree_zero,
             "nc-rank bounds need deg >= 2 (degree-1 rank is infinite, degree-0 rank is 0)");
    const uint32_t d = p.degree();
    Tensor t = multilinearize(p);
    RankBounds out;
    out.prank_lower_value = prank_lower(t, cfg);
    uint64_t c_d;
    if (p.field().p() > d) {
        c_d = 1;
        out.method = "char > d, C_d = 1";
    } else if (c_d_override) {
        c_d = *c_d_override;
        out.method = "user C_d";
    } else {
        if (d > 30) fail(errc::bad_parameters, "default C_d = 4^d overflows for d > 30");
        c_d = uint64_t(1) << (2 * d);
        out.method = "default C_d = 4^d";
    }
    if (c_d == 0) fail(errc::nonpositive_constant, "C_d must be positive");
    out.c_d = c_d;
    out.lower = uint32_t((out.prank_lower_value + c_d - 1) / c_d);
    if (auto cert = prank_upper_search(t, search_budget, 0)) out.upper = cert->size();
    if (out.upper && out.lower > *out.upper) fail(errc::internal_overflow, "rank sandwich inverted");
    return out;
}

bool strength_verify(const Polynomial& p,
                     std::span<const std::pair<Polynomial, Polynomial>> summands) {
    Polynomial acc(p.field_ptr(), p.nvars());
    for (auto& [q, r] : summands) {
        if (q.degree() >= p.degree() || r.degree() >= p.degree()) return false;
        acc = acc + q * r;
    }
    return acc == p;
}

}  // namespace strengthlab
