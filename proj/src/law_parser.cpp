#include "gaspower/law_parser.hpp"

#include "gaspower/error.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

namespace gaspower {
namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    PressureLaw parse() {
        std::vector<PressureLaw> laws;
        std::vector<double> weights;
        do {
            double w = 1.0;
            skip();
            if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                w = number();
                expect('*');
            }
            laws.push_back(term());
            weights.push_back(w);
            skip();
        } while (accept('+'));
        if (pos_ != s_.size()) fail("unexpected '" + std::string(s_.substr(pos_, 1)) + "'");
        if (laws.size() == 1 && weights[0] == 1.0) return laws[0];
        return combine(laws, weights);
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCategory::config,
                    "pressure law '" + std::string(s_) + "': " + what + " at column " + std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    double scalar() {
        skip();
        double v = 0.0;
        const char* begin = s_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
        if (ec != std::errc{}) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    // scalar or scalar/scalar
    double number() {
        double v = scalar();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            const double d = scalar();
            if (d == 0.0) fail("division by zero");
            v /= d;
        }
        return v;
    }

    std::string identifier() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected a law name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::vector<double> arguments() {
        std::vector<double> args;
        if (!accept('(')) return args;
        if (accept(')')) return args;
        do {
            args.push_back(number());
        } while (accept(','));
        expect(')');
        return args;
    }

    // linear_combination([law, ...], [weight, ...]), the form printed by combine().
    PressureLaw linear_combination() {
        std::vector<PressureLaw> laws;
        std::vector<double> weights;
        expect('(');
        expect('[');
        do {
            laws.push_back(term());
        } while (accept(','));
        expect(']');
        expect(',');
        expect('[');
        do {
            weights.push_back(number());
        } while (accept(','));
        expect(']');
        expect(')');
        if (laws.size() != weights.size()) fail("linear_combination needs one weight per law");
        return combine(laws, weights);
    }

    PressureLaw term() {
        const std::string name = identifier();
        if (name == "linear_combination") return linear_combination();
        const std::vector<double> a = arguments();
        auto arity = [&](std::size_t n) {
            if (a.size() != n) fail(name + " takes " + std::to_string(n) + " argument(s)");
        };
        if (name == "gamma") {
            arity(2);
            return gamma_law(a[0], a[1]);
        }
        if (name == "isothermal") {
            arity(1);
            return isothermal_law(a[0]);
        }
        if (name == "inverse") {
            arity(0);
            return inverse_law();
        }
        if (name == "log") {
            arity(0);
            return log_law();
        }
        if (name == "generalized") {
            arity(2);
            return generalized_gamma_law(a[0], a[1]);
        }
        if (name == "sum_gamma") {
            arity(0);
            return sum_gamma_law();
        }
        if (name == "integral_gamma") {
            if (a.empty()) return integral_gamma_law();
            arity(2);
            return integral_gamma_law(a[0], a[1]);
        }
        fail("unknown law '" + name + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

PressureLaw parse_law(std::string_view text) {
    return Parser(text).parse();
}

}  // namespace gaspower
