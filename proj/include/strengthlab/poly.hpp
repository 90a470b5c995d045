#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strengthlab/gf.hpp"

namespace strengthlab {

// Sparse exponent vector; no zero exponents stored, entries sorted by variable.
struct Monomial {
    std::vector<std::pair<uint16_t, uint16_t>> vars;  // (0-based variable, exponent)

    uint32_t total_degree() const {
        uint32_t d = 0;
        for (auto& [v, e] : vars) d += e;
        return d;
    }
    bool operator==(const Monomial&) const = default;

    // graded lexicographic: higher total degree first, ties broken by the
    // first variable where the exponents differ (earlier variable dominates)
    bool operator<(const Monomial& o) const;

    Monomial merged(const Monomial& o) const;  // product of monomials
};

// Sparse multivariate polynomial over a finite field. Canonical by
// construction: no zero coefficients, graded-lex ordered term map, cached
// degree (0 for the zero polynomial). Immutable in spirit; all operations
// return new values.
class Polynomial {
  public:
    Polynomial(FieldPtr field, uint32_t nvars) : field_(std::move(field)), nvars_(nvars) {}

    static Polynomial zero(FieldPtr f, uint32_t nvars) { return Polynomial(std::move(f), nvars); }
    static Polynomial constant(FieldPtr f, uint32_t nvars, uint32_t coeff_id);
    static Polynomial variable(FieldPtr f, uint32_t nvars, uint32_t var0);  // 0-based

    const Field& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }
    uint32_t nvars() const { return nvars_; }
    uint32_t degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, uint32_t>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, uint32_t coeff_id);  // accumulates, canonicalizes

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(uint32_t coeff_id) const;
    Polynomial pow(uint32_t e) const;
    bool operator==(const Polynomial& o) const;

    uint32_t evaluate(std::span<const uint32_t> point) const;

    // Same terms viewed in a space with more variables.
    Polynomial with_nvars(uint32_t n) const;
    // Substitute a constant for one variable.
    Polynomial assign(uint32_t var0, uint32_t value_id) const;
    // Relabel variables; perm[old] = new, injective.
    Polynomial rename_vars(std::span<const uint32_t> perm, uint32_t new_nvars) const;
    // Reinterpret over another field with the same element encoding (used for
    // lifting prime-field coefficients into an extension).
    Polynomial lift(FieldPtr target) const;

    std::string str() const;

  private:
    void check_compat(const Polynomial& o) const;
    void recompute_degree();

    FieldPtr field_;
    uint32_t nvars_;
    std::map<Monomial, uint32_t> terms_;
    uint32_t degree_ = 0;
};

// Multilinear form in `blocks` blocks of `width` variables each; variable j of
// block i (1-based) is base variable (i-1)*width + j.
struct Tensor {
    Polynomial base;
    uint32_t blocks = 0;
    uint32_t width = 0;

    // Validates multilinearity (every monomial takes exactly one variable from
    // each block). Symmetry is checked separately.
    static Tensor from_polynomial(Polynomial base, uint32_t blocks, uint32_t width);

    bool is_symmetric() const;
};

// ---- operations ----

// P(x + h) - P(x); the degree drops strictly for deg(P) >= 1.
Polynomial delta(const Polynomial& p, std::span<const uint32_t> h);

// The multilinear symmetric form: inclusion-exclusion over subsets of the d
// difference directions. Requires deg(P) >= 1.
Tensor multilinearize(const Polynomial& p);

// Same expansion evaluated at base point 0 without the degree-d requirement:
// sum_{S subset [d]} (-1)^{d-|S|} P(sum_{i in S} h_i). For deg(P) = d this is
// the multilinear form; linear in P either way.
Polynomial difference_form(const Polynomial& p, uint32_t d);

Polynomial partial_derivative(const Polynomial& p, uint32_t var0);

// c x n matrix of formal partials.
std::vector<std::vector<Polynomial>> formal_jacobian(std::span<const Polynomial> family);

// Homogenization; the fresh variable is appended as the last one (index n,
// 0-based) so existing variable names are preserved.
Polynomial homogenize(const Polynomial& p);

Polynomial compose(const Polynomial& outer, std::span<const Polynomial> inners);

Polynomial random_poly(FieldPtr field, uint32_t nvars, uint32_t degree, uint32_t terms, uint64_t seed);

// ---- parsing / printing ----

// Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := coefficient | var | '(' expr ')' | factor '^' posint;
// var := 'x' posint (1-based); coefficient := integer | element in `t`.
// Whitespace insignificant. A leading '-' is accepted.
Polynomial parse_polynomial(const std::string& text, FieldPtr field, std::optional<uint32_t> nvars = {});

// One polynomial per line; '#' starts a comment line, blank lines skipped.
std::vector<Polynomial> parse_polynomial_lines(const std::string& text, FieldPtr field,
                                               std::optional<uint32_t> nvars = {});

// Parses a single field element ("4", "t+1", "2*t^2+1").
uint32_t parse_element(const std::string& text, const FieldPtr& field);

// Comma-separated field elements.
std::vector<uint32_t> parse_point(const std::string& text, const FieldPtr& field);
std::string point_string(const Field& f, std::span<const uint32_t> point);

}  // namespace strengthlab
