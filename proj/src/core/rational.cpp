#include "rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace pnsurf {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw Error(ErrorCode::parse, "empty number literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty())
            throw Error(ErrorCode::parse, "malformed fraction '" + text + "'");
        std::string nbody = (num[0] == '+' || num[0] == '-') ? num.substr(1) : num;
        if (!all_digits(nbody) || !all_digits(den))
            throw Error(ErrorCode::parse, "malformed fraction '" + text + "'");
        // base 10 explicitly: auto-detection would read leading zeros as octal
        mpz_class n(num[0] == '+' ? nbody : num, 10), d(den, 10);
        if (d == 0) throw Error(ErrorCode::parse, "zero denominator in '" + text + "'");
        Rational q(n, d);
        q.canonicalize();
        return q;
    }

    // integer / decimal / scientific, rationalized by place value
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    std::string int_part, frac_part, exp_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part.push_back(s[i++]);
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part.push_back(s[i++]);
    }
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        exp_part = s.substr(i);
        if (exp_part.empty())
            throw Error(ErrorCode::parse, "malformed exponent in '" + text + "'");
        char* end = nullptr;
        exponent = std::strtol(exp_part.c_str(), &end, 10);
        if (end == nullptr || *end != '\0')
            throw Error(ErrorCode::parse, "malformed exponent in '" + text + "'");
        i = s.size();
    }
    if (i != s.size() || (int_part.empty() && frac_part.empty()))
        throw Error(ErrorCode::parse, "malformed number '" + text + "'");

    mpz_class mantissa((int_part.empty() ? "0" : int_part) + frac_part, 10);
    if (neg) mantissa = -mantissa;
    long shift = exponent - static_cast<long>(frac_part.size());

    Rational q;
    if (shift >= 0) {
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        q = Rational(mantissa * p10);
    } else {
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
        q = Rational(mantissa, p10);
    }
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

Rational rationalize(double x, double tol) {
    if (!std::isfinite(x)) throw Error(ErrorCode::parse, "cannot rationalize non-finite value");
    bool neg = x < 0;
    double a = std::fabs(x);

    // continued-fraction convergents h/k until within tol
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double frac = a;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9e18) break;
        mpz_class ai(static_cast<long>(fl));
        mpz_class h2 = ai * h1 + h0;
        mpz_class k2 = ai * k1 + k0;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Rational cand(h1, k1);
        cand.canonicalize();
        if (std::fabs(cand.get_d() - a) <= tol) {
            if (neg) cand = -cand;
            return cand;
        }
        double rem = frac - fl;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
    }
    Rational cand(h1, k1 == 0 ? mpz_class(1) : k1);
    cand.canonicalize();
    if (neg) cand = -cand;
    return cand;
}

} // namespace pnsurf
