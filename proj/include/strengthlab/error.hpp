#pragma once

#include <stdexcept>
#include <string>

namespace strengthlab {

enum class errc {
    not_prime,
    degree_zero,
    field_too_large,
    division_by_zero,
    field_mismatch,
    syntax_error,
    unknown_variable,
    dimension_mismatch,
    arity_mismatch,
    budget_exceeded,
    zero_samples,
    block_mismatch,
    constant_in_span,
    nonpositive_constant,
    non_prime_base,
    more_equations_than_variables,
    bad_parameters,
    degree_too_low,
    empty_table,
    zero_bias,
    internal_overflow,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::degree_zero: return "DegreeZero";
        case errc::field_too_large: return "FieldTooLarge";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::syntax_error: return "SyntaxError";
        case errc::unknown_variable: return "UnknownVariable";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::zero_samples: return "ZeroSamples";
        case errc::block_mismatch: return "BlockMismatch";
        case errc::constant_in_span: return "ConstantInSpan";
        case errc::nonpositive_constant: return "NonpositiveConstant";
        case errc::non_prime_base: return "NonPrimeBase";
        case errc::more_equations_than_variables: return "MoreEquationsThanVariables";
        case errc::bad_parameters: return "BadParameters";
        case errc::degree_too_low: return "DegreeTooLow";
        case errc::empty_table: return "EmptyTable";
        case errc::zero_bias: return "ZeroBias";
        case errc::internal_overflow: return "InternalOverflow";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace strengthlab
