#include "poly.hpp"

#include <algorithm>
#include <cmath>

namespace pnsurf {

std::pair<int, int> BivariatePoly::bidegree() const {
    if (terms_.empty()) return {-1, -1};
    int du = -1, dv = -1;
    for (const auto& [m, c] : terms_) {
        du = std::max(du, m.u);
        dv = std::max(dv, m.v);
    }
    return {du, dv};
}

int BivariatePoly::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.u + m.v);
    return d;
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& o) {
    for (const auto& [m, c] : o.terms_) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

BivariatePoly& BivariatePoly::operator-=(const BivariatePoly& o) {
    for (const auto& [m, c] : o.terms_) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, -c);
        } else {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

BivariatePoly BivariatePoly::operator-() const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

BivariatePoly& BivariatePoly::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly r;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    Rational tmp;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Mono m{ma.u + mb.u, ma.v + mb.v};
            tmp = ca * cb;
            auto it = r.terms_.find(m);
            if (it == r.terms_.end()) {
                r.terms_.emplace(m, tmp);
            } else {
                it->second += tmp;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

BivariatePoly BivariatePoly::diff_u() const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_)
        if (m.u > 0) r.terms_.emplace(Mono{m.u - 1, m.v}, Rational(m.u) * c);
    return r;
}

BivariatePoly BivariatePoly::diff_v() const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_)
        if (m.v > 0) r.terms_.emplace(Mono{m.u, m.v - 1}, Rational(m.v) * c);
    return r;
}

BivariatePoly BivariatePoly::integrate_u() const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_)
        r.terms_.emplace(Mono{m.u + 1, m.v}, c / Rational(m.u + 1));
    return r;
}

BivariatePoly BivariatePoly::integrate_v() const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_)
        r.terms_.emplace(Mono{m.u, m.v + 1}, c / Rational(m.v + 1));
    return r;
}

Rational BivariatePoly::eval(const Rational& u, const Rational& v) const {
    // terms are sorted by (u asc, v asc): sparse Horner in v per u-row,
    // then sparse Horner in u over the rows
    std::vector<std::pair<int, Rational>> rows;
    auto it = terms_.begin();
    while (it != terms_.end()) {
        int ui = it->first.u;
        std::vector<std::pair<int, const Rational*>> rowterms;
        while (it != terms_.end() && it->first.u == ui) {
            rowterms.emplace_back(it->first.v, &it->second);
            ++it;
        }
        Rational acc(0);
        int prev_e = -1;
        for (auto rit = rowterms.rbegin(); rit != rowterms.rend(); ++rit) {
            int e = rit->first;
            if (prev_e < 0) {
                acc = *rit->second;
            } else {
                for (int k = 0; k < prev_e - e; ++k) acc *= v;
                acc += *rit->second;
            }
            prev_e = e;
        }
        if (prev_e > 0)
            for (int k = 0; k < prev_e; ++k) acc *= v;
        rows.emplace_back(ui, std::move(acc));
    }
    Rational acc(0);
    int prev_e = -1;
    for (auto rit = rows.rbegin(); rit != rows.rend(); ++rit) {
        int e = rit->first;
        if (prev_e < 0) {
            acc = std::move(rit->second);
        } else {
            for (int k = 0; k < prev_e - e; ++k) acc *= u;
            acc += rit->second;
        }
        prev_e = e;
    }
    if (prev_e < 0) return Rational(0);
    if (prev_e > 0)
        for (int k = 0; k < prev_e; ++k) acc *= u;
    return acc;
}

double BivariatePoly::eval_double(double u, double v) const {
    double result = 0;
    auto it = terms_.begin();
    while (it != terms_.end()) {
        int ui = it->first.u;
        double row = 0;
        int prev_e = -1;
        // collect ascending, evaluate with powers (rows are short)
        std::vector<std::pair<int, double>> rowterms;
        while (it != terms_.end() && it->first.u == ui) {
            rowterms.emplace_back(it->first.v, it->second.get_d());
            ++it;
        }
        for (auto rit = rowterms.rbegin(); rit != rowterms.rend(); ++rit) {
            if (prev_e < 0) {
                row = rit->second;
            } else {
                row = row * std::pow(v, prev_e - rit->first) + rit->second;
            }
            prev_e = rit->first;
        }
        if (prev_e > 0) row *= std::pow(v, prev_e);
        result += row * std::pow(u, ui);
    }
    return result;
}

BivariatePoly BivariatePoly::eval_partial_u(const Rational& u0) const {
    BivariatePoly r;
    Rational upow(1);
    int cur = 0;
    // iterate by ascending u exponent, reusing powers
    for (const auto& [m, c] : terms_) {
        while (cur < m.u) {
            upow *= u0;
            ++cur;
        }
        auto it = r.terms_.find({0, m.v});
        Rational add = c * upow;
        if (it == r.terms_.end()) {
            if (add != 0) r.terms_.emplace(Mono{0, m.v}, add);
        } else {
            it->second += add;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

BivariatePoly BivariatePoly::eval_partial_v(const Rational& v0) const {
    BivariatePoly r;
    for (const auto& [m, c] : terms_) {
        Rational vpow(1);
        for (int k = 0; k < m.v; ++k) vpow *= v0;
        auto it = r.terms_.find({m.u, 0});
        Rational add = c * vpow;
        if (it == r.terms_.end()) {
            if (add != 0) r.terms_.emplace(Mono{m.u, 0}, add);
        } else {
            it->second += add;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

Mono BivariatePoly::leading_mono_grlex() const {
    Mono best{-1, -1};
    int bestdeg = -1;
    for (const auto& [m, c] : terms_) {
        int d = m.u + m.v;
        if (d > bestdeg || (d == bestdeg && m.u > best.u)) {
            best = m;
            bestdeg = d;
        }
    }
    return best;
}

Rational BivariatePoly::leading_coeff_lex() const {
    if (terms_.empty()) return Rational(0);
    return terms_.rbegin()->second;
}

std::optional<BivariatePoly> BivariatePoly::divide_exact(const BivariatePoly& divisor) const {
    if (divisor.is_zero()) return std::nullopt;
    if (is_zero()) return BivariatePoly();
    BivariatePoly r = *this;
    BivariatePoly q;
    Mono dlm = divisor.leading_mono_grlex();
    Rational dlc = divisor.terms_.at(dlm);
    // single-divisor division in graded-lex; a lone divisor is a Groebner
    // basis of its ideal, so zero remainder <=> exact divisibility
    while (!r.is_zero()) {
        Mono rlm = r.leading_mono_grlex();
        if (rlm.u < dlm.u || rlm.v < dlm.v) return std::nullopt;
        Mono qm{rlm.u - dlm.u, rlm.v - dlm.v};
        Rational qc = r.terms_.at(rlm) / dlc;
        BivariatePoly t = monomial(qm, qc);
        q += t;
        r -= t * divisor;
    }
    return q;
}

std::optional<BivariatePoly> BivariatePoly::sqrt() const {
    if (is_zero()) return BivariatePoly();
    Mono lm = leading_mono_grlex();
    if (lm.u % 2 != 0 || lm.v % 2 != 0) return std::nullopt;
    auto lc_root = rational_sqrt(terms_.at(lm));
    if (!lc_root) return std::nullopt;

    Mono half{lm.u / 2, lm.v / 2};
    BivariatePoly root = monomial(half, *lc_root);
    Rational twice_lc = 2 * (*lc_root);
    BivariatePoly rem = *this - root * root;
    while (!rem.is_zero()) {
        Mono rm = rem.leading_mono_grlex();
        if (rm.u < half.u || rm.v < half.v) return std::nullopt;
        Mono tm{rm.u - half.u, rm.v - half.v};
        // next term must be strictly below the current leading term,
        // otherwise the candidate cannot be a square root
        int tdeg = tm.u + tm.v, hdeg = half.u + half.v;
        if (tdeg > hdeg || (tdeg == hdeg && tm.u >= half.u)) return std::nullopt;
        BivariatePoly t = monomial(tm, rem.terms_.at(rm) / twice_lc);
        rem -= (Rational(2) * (root * t)) + t * t;
        root += t;
    }
    return root;
}

} // namespace pnsurf
