#include "ratfn.hpp"

#include <algorithm>
#include <climits>

namespace pnsurf {

RatFn::RatFn(BivariatePoly num, BivariatePoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw Error(ErrorCode::singular_matrix, "rational function with zero denominator");
    normalize_sign();
}

void RatFn::normalize_sign() {
    if (num_.is_zero()) {
        den_ = BivariatePoly(Rational(1));
        return;
    }
    if (den_.leading_coeff_lex() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RatFn RatFn::operator-() const {
    RatFn r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
    return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFn operator-(const RatFn& a, const RatFn& b) {
    if (a.den_ == b.den_) return RatFn(a.num_ - b.num_, a.den_);
    return RatFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFn operator*(const RatFn& a, const RatFn& b) {
    return RatFn(a.num_ * b.num_, a.den_ * b.den_);
}

RatFn operator/(const RatFn& a, const RatFn& b) {
    if (b.num_.is_zero())
        throw Error(ErrorCode::singular_matrix, "division by the zero rational function");
    return RatFn(a.num_ * b.den_, a.den_ * b.num_);
}

RatFn operator*(const Rational& s, const RatFn& a) {
    RatFn r = a;
    r.num_ *= s;
    if (s == 0) r.den_ = BivariatePoly(Rational(1));
    return r;
}

RatFn RatFn::diff_u() const {
    return RatFn(num_.diff_u() * den_ - num_ * den_.diff_u(), den_ * den_);
}

RatFn RatFn::diff_v() const {
    return RatFn(num_.diff_v() * den_ - num_ * den_.diff_v(), den_ * den_);
}

Rational RatFn::eval(const Rational& u, const Rational& v) const {
    Rational d = den_.eval(u, v);
    if (d == 0)
        throw Error(ErrorCode::pole_eval,
                    "rational function pole at (" + rational_to_string(u) + ", " +
                        rational_to_string(v) + ")");
    return num_.eval(u, v) / d;
}

double RatFn::eval_double(double u, double v) const {
    return num_.eval_double(u, v) / den_.eval_double(u, v);
}

RatFn RatFn::reduced() const {
    if (num_.is_zero()) return *this;

    // common monomial factor
    int mu = INT_MAX, mv = INT_MAX;
    for (const auto& [m, c] : num_.terms()) {
        mu = std::min(mu, m.u);
        mv = std::min(mv, m.v);
    }
    for (const auto& [m, c] : den_.terms()) {
        mu = std::min(mu, m.u);
        mv = std::min(mv, m.v);
    }
    BivariatePoly n, d;
    for (const auto& [m, c] : num_.terms()) n.set_coeff(m.u - mu, m.v - mv, c);
    for (const auto& [m, c] : den_.terms()) d.set_coeff(m.u - mu, m.v - mv, c);

    // exact polynomial quotient collapses to a polynomial
    if (auto q = n.divide_exact(d)) return RatFn(*q);

    // rational content of the denominator
    Rational lead = d.leading_coeff_lex();
    BivariatePoly n2, d2;
    for (const auto& [m, c] : n.terms()) n2.set_coeff(m.u, m.v, c / lead);
    for (const auto& [m, c] : d.terms()) d2.set_coeff(m.u, m.v, c / lead);
    return RatFn(n2, d2);
}

} // namespace pnsurf
