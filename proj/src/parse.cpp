#include <cctype>
#include <sstream>

#include "strengthlab/poly.hpp"

namespace strengthlab {

namespace {

// Recursive-descent parser for the polynomial grammar. Builds Polynomial
// values directly, so extension coefficients in `t` and char-p identities fall
// out of ordinary arithmetic.
class Parser {
  public:
    Parser(const std::string& src, FieldPtr field, std::optional<uint32_t> nvars)
        : src_(src), field_(std::move(field)), declared_(nvars) {
        // with a declared variable count we can build polynomials in place;
        // in infer mode we parse over a generous bound and shrink at the end
        work_n_ = declared_ ? *declared_ : kInferCap;
    }

    Polynomial run() {
        skip_ws();
        Polynomial e = expr();
        skip_ws();
        if (pos_ != src_.size()) err("unexpected trailing input");
        if (declared_) return e;
        uint32_t n = max_var_;  // inferred count = highest 1-based index used
        Polynomial out(field_, n);
        for (auto& [m, c] : e.terms()) out.add_term(m, c);
        return out;
    }

  private:
    static constexpr uint32_t kInferCap = 16384;

    [[noreturn]] void err(const std::string& what) {
        fail(errc::syntax_error, what + " at position " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(uint8_t(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    uint64_t number() {
        skip_ws();
        if (pos_ >= src_.size() || !std::isdigit(uint8_t(src_[pos_]))) err("expected a number");
        uint64_t v = 0;
        while (pos_ < src_.size() && std::isdigit(uint8_t(src_[pos_]))) {
            v = v * 10 + uint64_t(src_[pos_] - '0');
            if (v > (uint64_t(1) << 62)) err("number too large");
            ++pos_;
        }
        return v;
    }

    Polynomial expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            (void)eat('+');
        Polynomial acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial base = primary();
        while (eat('^')) {
            size_t at = pos_;
            uint64_t e = number();
            if (e == 0) {
                pos_ = at;
                err("exponent must be positive");
            }
            if (e > 4096) err("exponent too large");
            base = base.pow(uint32_t(e));
        }
        return base;
    }

    Polynomial primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            eat('(');
            Polynomial e = expr();
            if (!eat(')')) err("expected ')'");
            return e;
        }
        if (c == 'x') {
            size_t at = pos_;
            ++pos_;
            uint64_t idx = number();
            if (idx == 0) {
                pos_ = at;
                err("variable indices are 1-based");
            }
            if (declared_ && idx > *declared_)
                fail(errc::unknown_variable,
                     "x" + std::to_string(idx) + " exceeds declared n = " + std::to_string(*declared_));
            if (idx > kInferCap) err("variable index too large");
            max_var_ = std::max(max_var_, uint32_t(idx));
            return Polynomial::variable(field_, work_n_, uint32_t(idx - 1));
        }
        if (c == 't') {
            ++pos_;
            if (field_->s() == 1)
                fail(errc::field_mismatch, "`t` used over a prime field (s = 1)");
            return Polynomial::constant(field_, work_n_, field_->from_coeffs(std::array<uint32_t, 2>{0, 1}));
        }
        if (std::isdigit(uint8_t(c))) {
            uint64_t v = number();
            return Polynomial::constant(field_, work_n_, field_->from_integer((long long)(v % field_->p())));
        }
        err("expected a coefficient, variable or '('");
    }

    const std::string& src_;
    FieldPtr field_;
    std::optional<uint32_t> declared_;
    uint32_t work_n_ = 0;
    uint32_t max_var_ = 0;
    size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, FieldPtr field, std::optional<uint32_t> nvars) {
    return Parser(text, std::move(field), nvars).run();
}

std::vector<Polynomial> parse_polynomial_lines(const std::string& text, FieldPtr field,
                                               std::optional<uint32_t> nvars) {
    std::vector<Polynomial> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t i = 0;
        while (i < line.size() && std::isspace(uint8_t(line[i]))) ++i;
        if (i == line.size() || line[i] == '#') continue;
        out.push_back(parse_polynomial(line, field, nvars));
    }
    if (!nvars) {
        // align inferred variable counts across lines
        uint32_t n = 0;
        for (auto& p : out) n = std::max(n, p.nvars());
        for (auto& p : out) p = p.with_nvars(n);
    }
    return out;
}

uint32_t parse_element(const std::string& text, const FieldPtr& field) {
    Polynomial p = parse_polynomial(text, field, 0u);
    if (p.is_zero()) return 0;
    return p.terms().begin()->second;
}

std::vector<uint32_t> parse_point(const std::string& text, const FieldPtr& field) {
    std::vector<uint32_t> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_element(piece, field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string point_string(const Field& f, std::span<const uint32_t> point) {
    std::string out;
    for (size_t i = 0; i < point.size(); ++i) {
        if (i) out += ",";
        out += f.element_string(point[i]);
    }
    return out;
}

}  // namespace strengthlab
