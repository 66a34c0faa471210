#include "rcx/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

namespace rcx {

ExpressionError::ExpressionError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_space();
        return pos >= text.size();
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) throw ExpressionError(std::string("expected ") + what, pos);
    }

    bool number_ahead() {
        skip_space();
        if (pos >= text.size()) return false;
        char c = text[pos];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    double read_number() {
        skip_space();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc() || ptr == text.data() + pos)
            throw ExpressionError("expected a number", pos);
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    bool identifier_ahead() {
        skip_space();
        return pos < text.size() &&
               (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_');
    }

    std::string read_identifier() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw ExpressionError("expected an identifier", pos);
        return std::string(text.substr(start, pos - start));
    }
};

struct TermBuilder {
    double coefficient = 1.0;
    std::optional<double> power;
    std::optional<std::pair<double, double>> log_factor; // (base, exponent)
    std::optional<double> exp_base;
    std::optional<std::pair<double, bool>> gamma_factor; // (exponent, shifted)

    Term build(std::size_t pos) const {
        Term t;
        t.coefficient = coefficient;
        if (t.coefficient <= 0.0)
            throw ExpressionError("coefficients must be positive", pos);
        if (power) t.power = *power;
        if (log_factor) {
            t.log_base = log_factor->first;
            t.log_exponent = log_factor->second;
        }
        if (exp_base) t.exp_base = *exp_base;
        if (gamma_factor) {
            t.gamma_exponent = gamma_factor->first;
            t.gamma_shifted = gamma_factor->second;
        }
        return t;
    }
};

class Parser {
  public:
    explicit Parser(std::string_view text) : lex_{text} {}

    ComplexityFunction parse() {
        if (lex_.at_end()) throw ExpressionError("empty expression", 0);
        std::vector<Term> terms;
        terms.push_back(parse_term());
        while (lex_.consume('+')) terms.push_back(parse_term());
        if (!lex_.at_end()) throw ExpressionError("unexpected trailing input", lex_.pos);
        try {
            return ComplexityFunction(std::move(terms), variable_.value_or("n"));
        } catch (const std::invalid_argument& e) {
            throw ExpressionError(e.what(), lex_.pos);
        }
    }

  private:
    Lexer lex_;
    std::optional<std::string> variable_;

    void bind_variable(const std::string& name, std::size_t pos) {
        if (!variable_) {
            variable_ = name;
        } else if (*variable_ != name) {
            throw ExpressionError("only one variable is allowed, saw '" + name + "' after '" +
                                      *variable_ + "'",
                                  pos);
        }
    }

    Term parse_term() {
        TermBuilder builder;
        parse_factor(builder);
        while (lex_.consume('*')) parse_factor(builder);
        return builder.build(lex_.pos);
    }

    void parse_factor(TermBuilder& builder) {
        std::size_t start = lex_.pos;
        if (lex_.number_ahead()) {
            double value = lex_.read_number();
            if (lex_.consume('^')) {
                // b^n exponential factor
                std::size_t var_pos = lex_.pos;
                std::string name = lex_.read_identifier();
                if (name == "log" || name == "gamma")
                    throw ExpressionError("expected the variable after '^'", var_pos);
                bind_variable(name, var_pos);
                if (builder.exp_base)
                    throw ExpressionError("duplicate exponential factor", start);
                if (!(value > 1.0))
                    throw ExpressionError("exponential base must be > 1", start);
                builder.exp_base = value;
            } else {
                builder.coefficient *= value;
            }
            return;
        }
        if (!lex_.identifier_ahead())
            throw ExpressionError("expected a factor", lex_.pos);
        std::string name = lex_.read_identifier();
        if (name == "log") {
            parse_log(builder, start);
        } else if (name == "gamma") {
            parse_gamma(builder, start);
        } else {
            bind_variable(name, start);
            if (builder.power) throw ExpressionError("duplicate power factor", start);
            double p = 1.0;
            if (lex_.consume('^')) p = lex_.read_number();
            builder.power = p;
        }
    }

    void parse_log(TermBuilder& builder, std::size_t start) {
        if (builder.log_factor) throw ExpressionError("duplicate log factor", start);
        double base = 2.0;
        if (lex_.consume('[')) {
            base = lex_.read_number();
            lex_.expect(']', "']' after the log base");
        }
        double exponent = 1.0;
        if (lex_.consume('^')) exponent = lex_.read_number();
        lex_.expect('(', "'(' after log");
        std::size_t var_pos = lex_.pos;
        bind_variable(lex_.read_identifier(), var_pos);
        lex_.expect(')', "')' after the log argument");
        builder.log_factor = {base, exponent};
    }

    void parse_gamma(TermBuilder& builder, std::size_t start) {
        if (builder.gamma_factor) throw ExpressionError("duplicate gamma factor", start);
        lex_.expect('(', "'(' after gamma");
        std::size_t var_pos = lex_.pos;
        bind_variable(lex_.read_identifier(), var_pos);
        bool shifted = false;
        if (lex_.consume('+')) {
            std::size_t one_pos = lex_.pos;
            if (lex_.read_number() != 1.0)
                throw ExpressionError("only gamma(n+1) shifts are supported", one_pos);
            shifted = true;
        }
        lex_.expect(')', "')' after the gamma argument");
        double exponent = 1.0;
        if (lex_.consume('^')) exponent = lex_.read_number();
        builder.gamma_factor = {exponent, shifted};
    }
};

} // namespace

ComplexityFunction parse_complexity_expression(std::string_view text) {
    return Parser(text).parse();
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

std::string render_term(const Term& t, const std::string& var) {
    std::vector<std::string> factors;
    bool constant = t.power == 0.0 && t.log_exponent == 0.0 && t.exp_base == 1.0 &&
                    t.gamma_exponent == 0.0;
    if (t.coefficient != 1.0 || constant) factors.push_back(format_double(t.coefficient));
    if (t.power != 0.0)
        factors.push_back(t.power == 1.0 ? var : var + "^" + format_double(t.power));
    if (t.log_exponent != 0.0) {
        std::string f = "log[" + format_double(t.log_base) + "]";
        if (t.log_exponent != 1.0) f += "^" + format_double(t.log_exponent);
        factors.push_back(f + "(" + var + ")");
    }
    if (t.exp_base != 1.0) factors.push_back(format_double(t.exp_base) + "^" + var);
    if (t.gamma_exponent != 0.0) {
        std::string f = "gamma(" + var + (t.gamma_shifted ? "+1" : "") + ")";
        if (t.gamma_exponent != 1.0) f += "^" + format_double(t.gamma_exponent);
        factors.push_back(f);
    }
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += " * ";
        out += factors[i];
    }
    return out;
}

} // namespace

std::string render(const ComplexityFunction& f) {
    std::string out;
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += " + ";
        out += render_term(f.terms()[i], f.variable_name());
    }
    return out;
}

} // namespace rcx
