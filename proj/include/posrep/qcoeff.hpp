#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "posrep/rational.hpp"

namespace posrep {

/// Laurent polynomial in the formal parameter q with rational exponents and
/// integer coefficients, i.e. an element of Z[q^(1/N), q^(-1/N)].  Rational
/// exponents show up because multi-lacing rescales q to q^(1/2) or q^(1/3)
/// and lattice pairings live in (1/2)Z.
class QCoefficient {
public:
    using Map = std::map<Rational, long long>;

    QCoefficient() = default;
    QCoefficient(long long c) {
        if (c != 0) terms_[Rational(0)] = c;
    }

    static QCoefficient q_power(const Rational& r, long long c = 1) {
        QCoefficient x;
        if (c != 0) x.terms_[r] = c;
        return x;
    }

    /// Quantum integer [k] in base q^d:  q^{d(k-1)} + q^{d(k-3)} + ... + q^{-d(k-1)}.
    static QCoefficient q_integer(long long k, const Rational& d = Rational(1)) {
        if (k < 0) return QCoefficient(0) - q_integer(-k, d);
        QCoefficient x;
        for (long long j = 0; j < k; ++j)
            x += q_power(d * Rational(k - 1 - 2 * j));
        return x;
    }

    static QCoefficient q_factorial(long long k, const Rational& d = Rational(1)) {
        QCoefficient x(1);
        for (long long j = 1; j <= k; ++j) x *= q_integer(j, d);
        return x;
    }

    /// Quantum binomial coefficient [n choose k] in base q^d.
    static QCoefficient q_binomial(long long n, long long k, const Rational& d = Rational(1)) {
        if (k < 0 || k > n) return QCoefficient();
        QCoefficient num(1);
        for (long long j = 0; j < k; ++j) num *= q_integer(n - j, d);
        return num.divide_exact(q_factorial(k, d));
    }

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }

    /// True iff this is a single monomial c*q^r.
    bool is_monomial() const { return terms_.size() == 1; }

    QCoefficient operator-() const {
        QCoefficient x;
        for (auto& [e, c] : terms_) x.terms_[e] = -c;
        return x;
    }

    QCoefficient& operator+=(const QCoefficient& o) {
        for (auto& [e, c] : o.terms_) {
            auto it = terms_.find(e);
            if (it == terms_.end()) {
                terms_[e] = c;
            } else {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }
    QCoefficient& operator-=(const QCoefficient& o) { return *this += -o; }

    QCoefficient operator+(const QCoefficient& o) const { QCoefficient x = *this; return x += o; }
    QCoefficient operator-(const QCoefficient& o) const { QCoefficient x = *this; return x -= o; }

    QCoefficient operator*(const QCoefficient& o) const {
        QCoefficient x;
        for (auto& [e1, c1] : terms_)
            for (auto& [e2, c2] : o.terms_) {
                Rational e = e1 + e2;
                auto it = x.terms_.find(e);
                if (it == x.terms_.end()) {
                    long long p = c1 * c2;
                    if (c1 != 0 && p / c1 != c2) throw std::overflow_error("QCoefficient: overflow");
                    if (p != 0) x.terms_[e] = p;
                } else {
                    it->second += c1 * c2;
                    if (it->second == 0) x.terms_.erase(it);
                }
            }
        return x;
    }
    QCoefficient& operator*=(const QCoefficient& o) { return *this = *this * o; }

    bool operator==(const QCoefficient& o) const { return terms_ == o.terms_; }
    bool operator!=(const QCoefficient& o) const { return !(*this == o); }
    bool operator<(const QCoefficient& o) const { return terms_ < o.terms_; }

    /// Bar involution q -> q^{-1}.
    QCoefficient bar() const {
        QCoefficient x;
        for (auto& [e, c] : terms_) x.terms_[-e] = c;
        return x;
    }

    /// Exact Laurent division; throws std::domain_error if the division
    /// leaves a remainder (callers rely on this to detect non-Laurent results).
    QCoefficient divide_exact(const QCoefficient& div) const {
        if (div.is_zero()) throw std::domain_error("QCoefficient: division by zero");
        QCoefficient rem = *this, quot;
        auto lead = *div.terms_.rbegin();
        if (rem.is_zero()) return quot;
        // an exact quotient bottoms out at low(num) - low(div); stepping past
        // that bound means the division only closes as an infinite series
        Rational qlow = terms_.begin()->first - div.terms_.begin()->first;
        while (!rem.is_zero()) {
            auto rl = *rem.terms_.rbegin();
            Rational texp = rl.first - lead.first;
            if (rl.second % lead.second != 0 || texp < qlow)
                throw std::domain_error("QCoefficient: inexact division");
            QCoefficient t = q_power(texp, rl.second / lead.second);
            quot += t;
            rem -= t * div;
            if (!rem.is_zero() && !(rem.terms_.rbegin()->first < rl.first))
                throw std::domain_error("QCoefficient: inexact division");
        }
        return quot;
    }

    double eval(double q) const {
        double s = 0;
        for (auto& [e, c] : terms_) s += double(c) * std::pow(q, e.to_double());
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            long long c = it->second;
            const Rational& e = it->first;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            long long ac = c < 0 ? -c : c;
            if (e.is_zero()) {
                os << ac;
            } else {
                if (ac != 1) os << ac << "*";
                os << "q";
                if (!(e == Rational(1))) {
                    os << "^";
                    if (!e.is_integer()) os << "(" << e.str() << ")";
                    else os << e.str();
                }
            }
        }
        return os.str();
    }

private:
    Map terms_;
};

inline QCoefficient operator*(long long a, const QCoefficient& b) { return QCoefficient(a) * b; }
inline std::ostream& operator<<(std::ostream& os, const QCoefficient& x) { return os << x.str(); }

} // namespace posrep
