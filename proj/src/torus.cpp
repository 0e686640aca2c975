#include "posrep/torus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace posrep {

LatticeVector lattice_unit(VertexId v) {
    LatticeVector a;
    a[v] = Rational(1);
    return a;
}

void lattice_add(LatticeVector& a, VertexId v, const Rational& c) {
    if (c.is_zero()) return;
    auto it = a.find(v);
    if (it == a.end()) {
        a.emplace(v, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) a.erase(it);
    }
}

LatticeVector lattice_sum(const LatticeVector& a, const LatticeVector& b) {
    LatticeVector out = a;
    for (const auto& [v, c] : b) lattice_add(out, v, c);
    return out;
}

LatticeVector lattice_scale(const LatticeVector& a, const Rational& c) {
    LatticeVector out;
    if (c.is_zero()) return out;
    for (const auto& [v, x] : a) out[v] = x * c;
    return out;
}

Rational lattice_pairing(const ClusterSeed& s, const LatticeVector& a, const LatticeVector& b) {
    Rational sum(0);
    for (const auto& [u, cu] : a) {
        const auto& row = s.row(u);
        for (const auto& [v, cv] : b) {
            auto it = row.find(v);
            if (it != row.end()) sum = sum + cu * cv * it->second;
        }
    }
    return sum;
}

static long long as_int(const Rational& r, const char* what) {
    if (!r.is_integer())
        throw std::invalid_argument(std::string("expected an integer ") + what + ", got " + r.str());
    return r.num();
}

static std::string lattice_str(const ClusterSeed* s, const LatticeVector& lam) {
    if (lam.empty()) return "1";
    std::ostringstream os;
    os << "X{";
    bool first = true;
    for (const auto& [v, n] : lam) {
        if (!first) os << " ";
        first = false;
        if (s && s->has_vertex(v)) os << s->label(v).str();
        else os << "#" << v;
        if (!(n == Rational(1))) os << "^" << n.str();
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// TorusElement
// ---------------------------------------------------------------------------

TorusElement TorusElement::scalar(SeedPtr seed, const QCoefficient& c) {
    TorusElement x(std::move(seed));
    x.insert(LatticeVector{}, c);
    return x;
}

TorusElement TorusElement::monomial(SeedPtr seed, const LatticeVector& lam, const QCoefficient& c) {
    TorusElement x(std::move(seed));
    x.insert(lam, c);
    return x;
}

TorusElement TorusElement::generator(SeedPtr seed, VertexId v) {
    if (!seed || !seed->has_vertex(v))
        throw std::invalid_argument("TorusElement::generator: unknown vertex");
    return monomial(std::move(seed), lattice_unit(v));
}

TorusElement TorusElement::from_vertices(SeedPtr seed, const std::vector<VertexId>& vs) {
    LatticeVector lam;
    for (VertexId v : vs) {
        if (!seed || !seed->has_vertex(v))
            throw std::invalid_argument("TorusElement::from_vertices: unknown vertex");
        lattice_add(lam, v, Rational(1));
    }
    return monomial(std::move(seed), lam);
}

TorusElement TorusElement::from_powers(SeedPtr seed,
                                       const std::vector<std::pair<VertexId, Rational>>& ps) {
    LatticeVector lam;
    for (const auto& [v, n] : ps) {
        if (!seed || !seed->has_vertex(v))
            throw std::invalid_argument("TorusElement::from_powers: unknown vertex");
        lattice_add(lam, v, n);
    }
    return monomial(std::move(seed), lam);
}

const std::pair<const LatticeVector, QCoefficient>& TorusElement::single_term() const {
    if (terms_.size() != 1)
        throw std::logic_error("TorusElement::single_term: element has " +
                               std::to_string(terms_.size()) + " terms");
    return *terms_.begin();
}

void TorusElement::insert(const LatticeVector& lam, const QCoefficient& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(lam);
    if (it == terms_.end()) {
        terms_.emplace(lam, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TorusElement TorusElement::operator-() const {
    TorusElement x(seed_);
    for (const auto& [lam, c] : terms_) x.terms_.emplace(lam, -c);
    return x;
}

TorusElement& TorusElement::operator+=(const TorusElement& o) {
    if (!seed_) {
        *this = o;
        return *this;
    }
    if (o.seed_ && o.seed_.get() != seed_.get())
        throw std::invalid_argument("TorusElement: seed mismatch in addition");
    for (const auto& [lam, c] : o.terms_) insert(lam, c);
    return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& o) { return *this += -o; }

TorusElement TorusElement::operator+(const TorusElement& o) const {
    TorusElement x = *this;
    return x += o;
}

TorusElement TorusElement::operator-(const TorusElement& o) const {
    TorusElement x = *this;
    return x -= o;
}

TorusElement TorusElement::operator*(const TorusElement& o) const {
    if (!seed_ || !o.seed_ || seed_.get() != o.seed_.get())
        throw std::invalid_argument("TorusElement: seed mismatch in product");
    TorusElement x(seed_);
    for (const auto& [la, ca] : terms_) {
        for (const auto& [lb, cb] : o.terms_) {
            Rational p = lattice_pairing(*seed_, la, lb);
            QCoefficient c = ca * cb;
            if (!p.is_zero()) c *= QCoefficient::q_power(-p);
            x.insert(lattice_sum(la, lb), c);
        }
    }
    return x;
}

TorusElement TorusElement::operator*(const QCoefficient& c) const {
    TorusElement x(seed_);
    for (const auto& [lam, cc] : terms_) x.insert(lam, cc * c);
    return x;
}

TorusElement TorusElement::inverse() const {
    const auto& [lam, c] = single_term();
    if (!c.is_monomial())
        throw std::domain_error("TorusElement::inverse: coefficient is not a q-power");
    auto [e, cc] = *c.terms().begin();
    if (cc != 1 && cc != -1)
        throw std::domain_error("TorusElement::inverse: coefficient is not a unit");
    return monomial(seed_, lattice_scale(lam, Rational(-1)), QCoefficient::q_power(-e, cc));
}

TorusElement TorusElement::pow(long long n) const {
    if (!seed_) throw std::logic_error("TorusElement::pow: no seed");
    if (n == 0) return scalar(seed_, QCoefficient(1));
    if (n < 0) return inverse().pow(-n);
    if (is_monomial()) {
        const auto& [lam, c] = single_term();
        QCoefficient cp(1);
        for (long long i = 0; i < n; ++i) cp *= c;
        return monomial(seed_, lattice_scale(lam, Rational(n)), cp);
    }
    TorusElement x = *this;
    for (long long i = 1; i < n; ++i) x = x * *this;
    return x;
}

TorusElement TorusElement::bar() const {
    TorusElement x(seed_);
    for (const auto& [lam, c] : terms_) x.terms_.emplace(lam, c.bar());
    return x;
}

std::string TorusElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [lam, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        if (lam.empty()) {
            os << cs;
            continue;
        }
        if (cs != "1") {
            if (c.is_monomial() && c.terms().begin()->second > 0) os << cs << "*";
            else os << "(" << cs << ")*";
        }
        os << lattice_str(seed_.get(), lam);
    }
    return os.str();
}

static nlohmann::json rational_json(const Rational& r) {
    return nlohmann::json{{"num", r.num()}, {"den", r.den()}};
}

static Rational rational_from_json(const nlohmann::json& j) {
    return Rational(j.at("num").get<long long>(), j.at("den").get<long long>());
}

nlohmann::json TorusElement::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [lam, c] : terms_) {
        nlohmann::json lat = nlohmann::json::object();
        for (const auto& [v, n] : lam) lat[std::to_string(v)] = rational_json(n);
        nlohmann::json coeff = nlohmann::json::array();
        for (const auto& [e, cc] : c.terms())
            coeff.push_back(nlohmann::json{{"qexp", rational_json(e)}, {"int", cc}});
        arr.push_back(nlohmann::json{{"lattice", lat}, {"coeff", coeff}});
    }
    return arr;
}

TorusElement TorusElement::from_json(SeedPtr seed, const nlohmann::json& j) {
    TorusElement x(seed);
    for (const auto& term : j) {
        LatticeVector lam;
        for (const auto& [key, val] : term.at("lattice").items()) {
            VertexId v = std::stoi(key);
            if (!seed || !seed->has_vertex(v))
                throw std::invalid_argument("TorusElement::from_json: unknown vertex " + key);
            lattice_add(lam, v, rational_from_json(val));
        }
        QCoefficient c;
        for (const auto& mono : term.at("coeff"))
            c += QCoefficient::q_power(rational_from_json(mono.at("qexp")),
                                       mono.at("int").get<long long>());
        x.insert(lam, c);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Commutators
// ---------------------------------------------------------------------------

TorusElement commutator(const TorusElement& a, const TorusElement& b) {
    return a * b - b * a;
}

TorusElement commutator_div(const TorusElement& a, const TorusElement& b, const Rational& d) {
    TorusElement com = commutator(a, b);
    QCoefficient div = QCoefficient::q_power(d) - QCoefficient::q_power(-d);
    TorusElement out(a.seed());
    for (const auto& [lam, c] : com.terms()) {
        try {
            out.insert(lam, c.divide_exact(div));
        } catch (const std::domain_error&) {
            throw NotDivisibleError("commutator_div: coefficient " + c.str() + " of " +
                                    lattice_str(a.seed().get(), lam) +
                                    " is not divisible by q^(" + d.str() + ") - q^(-" + d.str() +
                                    ")");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binomial factors
// ---------------------------------------------------------------------------

std::string TorusFraction::str() const {
    std::ostringstream os;
    os << "(" << numerator.str() << ")";
    const ClusterSeed* s = numerator.seed().get();
    for (const auto& f : factors) {
        std::string xk = s && s->has_vertex(f.k) ? s->label(f.k).str() : "#" + std::to_string(f.k);
        os << " * (1 + q^(" << f.qexp.str() << ")*X{" << xk << "})";
        if (f.sigma < 0) os << "^-1";
    }
    return os.str();
}

TorusElement multiply_binomial(const TorusElement& a, VertexId k, const Rational& qexp) {
    const auto& seed = a.seed();
    if (!seed || !seed->has_vertex(k))
        throw std::invalid_argument("multiply_binomial: unknown vertex");
    LatticeVector ek = lattice_unit(k);
    TorusElement out = a;
    for (const auto& [lam, c] : a.terms()) {
        Rational p = lattice_pairing(*seed, lam, ek);
        out.insert(lattice_sum(lam, ek), c * QCoefficient::q_power(qexp - p));
    }
    return out;
}

TorusElement divide_binomial(const TorusElement& a, VertexId k, const Rational& qexp) {
    const auto& seed = a.seed();
    if (!seed || !seed->has_vertex(k))
        throw std::invalid_argument("divide_binomial: unknown vertex");
    if (a.is_zero()) return a;
    const ClusterSeed& S = *seed;
    LatticeVector ek = lattice_unit(k);

    // Slice off the k-coordinate: a = sum_m A_m X_{m e_k}, grouped by the
    // fractional part of m since the factor only couples slices one apart.
    auto frac_part = [](const Rational& r) {
        long long num = r.num() % r.den();
        if (num < 0) num += r.den();
        return Rational(num, r.den());
    };
    std::map<Rational, std::map<Rational, TorusElement>> classes;
    for (const auto& [lam, c] : a.terms()) {
        Rational m(0);
        LatticeVector mu = lam;
        auto it = lam.find(k);
        if (it != lam.end()) {
            m = it->second;
            mu.erase(k);
        }
        auto& slot = classes[frac_part(m)];
        auto el = slot.find(m);
        if (el == slot.end()) el = slot.emplace(m, TorusElement(seed)).first;
        Rational pk = lattice_pairing(S, mu, ek);
        el->second.insert(mu, c * QCoefficient::q_power(m * pk));
    }

    QCoefficient qx = QCoefficient::q_power(qexp);
    TorusElement out(seed);
    for (auto& [fp, slices] : classes) {
        Rational mmax = slices.rbegin()->first;
        TorusElement prev(seed);
        for (Rational m = slices.begin()->first; !(mmax < m); m = m + Rational(1)) {
            TorusElement Am(seed);
            auto it = slices.find(m);
            if (it != slices.end()) Am = it->second;
            TorusElement Qm = Am - prev * qx;
            if (!(m < mmax)) {
                if (!Qm.is_zero())
                    throw NotLaurentError("divide_binomial: remainder " + Qm.str() +
                                          " at X_k-degree " + m.str());
                break;
            }
            for (const auto& [mu, c] : Qm.terms()) {
                Rational pk = lattice_pairing(S, mu, ek);
                LatticeVector lam = mu;
                lattice_add(lam, k, m);
                out.insert(lam, c * QCoefficient::q_power(-(m * pk)));
            }
            prev = Qm;
        }
    }
    return out;
}

TorusElement normalize(const TorusFraction& f) {
    TorusElement acc = f.numerator;
    for (const auto& fac : f.factors) {
        if (fac.sigma > 0) acc = multiply_binomial(acc, fac.k, fac.qexp);
        else acc = divide_binomial(acc, fac.k, fac.qexp);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Quantum mutation
// ---------------------------------------------------------------------------

// Variable substitution between the two charts of a mutation at k, written
// over the chart of `codomain`:  X_v goes to X_v decorated with binomial
// factors in X_k according to the codomain exchange entry B = b(k, v).  The
// B > 0 case is stored in the positive-argument normal form
//   X_v (1+q_k X_k^{-1})^{-1}... = q^{-d_k B^2 - B w(v,k)} X_{v + B k}
//                                  prod_r (1 + q_k^{-(2r-1)} X_k)^{-1}.
static TorusFraction variable_image(const TorusElement::SeedPtr& codomain, VertexId k,
                                    VertexId v) {
    const ClusterSeed& s = *codomain;
    if (v == k) {
        LatticeVector lam;
        lattice_add(lam, k, Rational(-1));
        return {TorusElement::monomial(codomain, lam), {}};
    }
    long long B = as_int(s.b(k, v), "exchange entry of the mutation row");
    Rational dk = s.multiplier(k);
    TorusFraction f;
    if (B <= 0) {
        f.numerator = TorusElement::generator(codomain, v);
        for (long long r = 1; r <= -B; ++r)
            f.factors.push_back({k, dk * Rational(2 * r - 1), +1});
    } else {
        LatticeVector lam = lattice_unit(v);
        lattice_add(lam, k, Rational(B));
        Rational ex = Rational(0) - dk * Rational(B * B) - Rational(B) * s.w(v, k);
        f.numerator = TorusElement::monomial(codomain, lam, QCoefficient::q_power(ex));
        for (long long r = 1; r <= B; ++r)
            f.factors.push_back({k, Rational(0) - dk * Rational(2 * r - 1), -1});
    }
    return f;
}

QuantumMutation quantum_mutation(const TorusElement::SeedPtr& seed, VertexId k) {
    if (!seed || !seed->has_vertex(k))
        throw std::invalid_argument("quantum_mutation: unknown vertex");
    if (seed->is_frozen(k))
        throw std::invalid_argument("quantum_mutation: vertex " + seed->label(k).str() +
                                    " is frozen");
    auto target = std::make_shared<ClusterSeed>(*seed);
    target->mutate(k);
    QuantumMutation qm;
    qm.source = seed;
    qm.target = target;
    qm.k = k;
    for (VertexId v : seed->vertices()) {
        qm.new_to_old.emplace(v, variable_image(seed, k, v));
        qm.old_to_new.emplace(v, variable_image(target, k, v));
    }
    return qm;
}

static bool same_pairing(const ClusterSeed& a, const ClusterSeed& b) {
    if (a.vertices() != b.vertices()) return false;
    for (VertexId u : a.vertices()) {
        if (!(a.multiplier(u) == b.multiplier(u))) return false;
        if (a.row(u) != b.row(u)) return false;
    }
    return true;
}

TorusElement transport_mutation(const TorusElement& a, const TorusElement::SeedPtr& target,
                                VertexId k) {
    if (!a.seed() || !target)
        throw std::invalid_argument("transport_mutation: missing seed");
    const ClusterSeed& S = *a.seed();
    const ClusterSeed& T = *target;
    if (!S.has_vertex(k) || S.is_frozen(k))
        throw std::invalid_argument("transport_mutation: k must be an unfrozen vertex");
    {
        ClusterSeed chk = S;
        chk.mutate(k);
        if (!same_pairing(chk, T))
            throw std::invalid_argument(
                "transport_mutation: target seed is not the mutation of the source at k");
    }
    if (a.is_zero()) return TorusElement(target);

    Rational dk = S.multiplier(k);
    LatticeVector ek = lattice_unit(k);

    // Each source monomial becomes (numerator monomial) * (binomial factors
    // in X'_k); factors commute among themselves, so only their multiset
    // matters once assembled.
    struct Part {
        LatticeVector lam;
        QCoefficient coeff;
        std::vector<Rational> num;
        std::map<Rational, int> den;
    };
    std::vector<Part> parts;
    std::map<Rational, int> denmax;

    for (const auto& [lam0, c0] : a.terms()) {
        std::vector<std::pair<VertexId, Rational>> seq;
        Rational lamk(0);
        for (const auto& [v, n] : lam0) {
            if (v == k) lamk = n;
            else seq.emplace_back(v, n);
        }
        // split X_lam into ordered per-vertex powers (k last) inside the
        // source torus; corr is the resulting q-exponent
        Rational corr(0);
        for (size_t i = 0; i < seq.size(); ++i)
            for (size_t j = i + 1; j < seq.size(); ++j)
                corr = corr + seq[i].second * seq[j].second * S.w(seq[i].first, seq[j].first);
        if (!lamk.is_zero())
            for (const auto& [v, n] : seq) corr = corr + n * lamk * S.w(v, k);

        Part P;
        P.coeff = c0 * QCoefficient::q_power(corr);
        std::vector<std::pair<Rational, int>> facs;

        // Merge X'_nu onto the right end of the accumulated monomial: the
        // pending factors move right past it (argument X'_k picks up the
        // commutation twist), then the lattice parts combine.
        auto append_monomial = [&](const LatticeVector& nu) {
            Rational tw = Rational(-2) * lattice_pairing(T, ek, nu);
            if (!tw.is_zero())
                for (auto& f : facs) f.first = f.first + tw;
            Rational m = lattice_pairing(T, P.lam, nu);
            if (!m.is_zero()) P.coeff *= QCoefficient::q_power(Rational(0) - m);
            for (const auto& [u, c] : nu) lattice_add(P.lam, u, c);
        };

        for (const auto& [v, n] : seq) {
            long long B = as_int(T.b(k, v), "exchange entry of the mutation row");
            if (B == 0) {
                append_monomial(lattice_scale(lattice_unit(v), n));
                continue;
            }
            long long ni = as_int(n, "exponent at a vertex adjacent to the mutation vertex");
            LatticeVector nu = lattice_unit(v);
            Rational cvx(0);
            std::vector<Rational> fx;
            int fsig = +1;
            if (B < 0) {
                for (long long r = 1; r <= -B; ++r) fx.push_back(dk * Rational(2 * r - 1));
            } else {
                lattice_add(nu, k, Rational(B));
                cvx = Rational(0) - dk * Rational(B * B) - Rational(B) * T.w(v, k);
                for (long long r = 1; r <= B; ++r) fx.push_back(Rational(0) - dk * Rational(2 * r - 1));
                fsig = -1;
            }
            Rational wkv = T.w(k, v);
            append_monomial(lattice_scale(nu, Rational(ni)));
            if (!cvx.is_zero()) P.coeff *= QCoefficient::q_power(Rational(ni) * cvx);
            int sig = ni > 0 ? fsig : -fsig;
            if (ni > 0) {
                for (long long t = 0; t < ni; ++t)
                    for (const Rational& x : fx)
                        facs.emplace_back(x - Rational(2 * t) * wkv, sig);
            } else {
                for (long long t = -1; t >= ni; --t)
                    for (const Rational& x : fx)
                        facs.emplace_back(x - Rational(2 * t) * wkv, sig);
            }
        }
        if (!lamk.is_zero()) append_monomial(lattice_scale(ek, Rational(0) - lamk));

        for (const auto& [x, s] : facs) {
            if (s > 0) P.num.push_back(x);
            else P.den[x] += 1;
        }
        for (const auto& [x, c] : P.den) {
            int& m = denmax[x];
            if (c > m) m = c;
        }
        parts.push_back(std::move(P));
    }

    // Put every monomial over the common denominator, sum, divide back out.
    TorusElement sum(target);
    for (const Part& P : parts) {
        TorusElement N = TorusElement::monomial(target, P.lam, P.coeff);
        for (const Rational& x : P.num) N = multiply_binomial(N, k, x);
        for (const auto& [x, cnt] : denmax) {
            auto it = P.den.find(x);
            int have = it == P.den.end() ? 0 : it->second;
            for (int r = have; r < cnt; ++r) N = multiply_binomial(N, k, x);
        }
        sum += N;
    }
    for (const auto& [x, cnt] : denmax)
        for (int r = 0; r < cnt; ++r) sum = divide_binomial(sum, k, x);
    return sum;
}

TorusElement rehost(const TorusElement& a, const TorusElement::SeedPtr& seed) {
    if (!a.seed() || !seed) throw std::invalid_argument("rehost: missing seed");
    if (!same_pairing(*a.seed(), *seed))
        throw std::invalid_argument("rehost: seeds differ beyond labels");
    TorusElement out(seed);
    for (const auto& [lam, c] : a.terms()) out.insert(lam, c);
    return out;
}

TorusElement map_lattice(const TorusElement& a, const TorusElement::SeedPtr& target,
                         const std::map<VertexId, LatticeVector>& images, bool check_pairings) {
    if (!a.seed() || !target) throw std::invalid_argument("map_lattice: missing seed");
    std::set<VertexId> used;
    for (const auto& [lam, c] : a.terms())
        for (const auto& [v, n] : lam) used.insert(v);
    for (VertexId v : used)
        if (!images.count(v))
            throw std::invalid_argument("map_lattice: no image for vertex " +
                                        a.seed()->label(v).str());
    if (check_pairings) {
        for (VertexId u : used)
            for (VertexId v : used) {
                if (!(u < v)) continue;
                Rational lhs = lattice_pairing(*target, images.at(u), images.at(v));
                if (!(lhs == a.seed()->w(u, v)))
                    throw std::invalid_argument("map_lattice: pairing of " +
                                                a.seed()->label(u).str() + ", " +
                                                a.seed()->label(v).str() + " not preserved");
            }
    }
    TorusElement out(target);
    for (const auto& [lam, c] : a.terms()) {
        LatticeVector im;
        for (const auto& [v, n] : lam)
            for (const auto& [tv, tc] : images.at(v)) lattice_add(im, tv, n * tc);
        out.insert(im, c);
    }
    return out;
}

std::vector<std::string> nonpolynomial_terms(const TorusElement& a) {
    std::vector<std::string> out;
    const ClusterSeed* s = a.seed().get();
    if (!s) return out;
    for (const auto& [lam, c] : a.terms())
        for (const auto& [v, n] : lam)
            if (n < Rational(0) && !s->is_frozen(v))
                out.push_back(lattice_str(s, lam) + " has negative exponent at unfrozen " +
                              s->label(v).str());
    return out;
}

TorusMove transport_braid_move(const RootDatum& rd, const TorusElement::SeedPtr& seed,
                               Word& word, const CoxMove& mv,
                               std::vector<TorusElement> elements,
                               std::vector<std::string>* warnings) {
    if (!seed) throw std::invalid_argument("transport_braid_move: missing seed");
    for (const auto& e : elements)
        if (e.seed().get() != seed.get())
            throw std::invalid_argument("transport_braid_move: element not hosted on the seed");
    SeedMove sm = apply_braid_move(rd, *seed, word, mv);
    TorusElement::SeedPtr cur = seed;
    for (VertexId m : sm.mutated) {
        auto next = std::make_shared<ClusterSeed>(*cur);
        next->mutate(m);
        for (auto& e : elements) e = transport_mutation(e, next, m);
        cur = next;
    }
    auto fin = std::make_shared<ClusterSeed>(std::move(sm.seed));
    TorusMove out;
    out.seed = fin;
    out.mutated = sm.mutated;
    for (auto& e : elements) {
        TorusElement moved = rehost(e, out.seed);
        if (warnings) {
            for (const std::string& msg : nonpolynomial_terms(moved))
                warnings->push_back("braid move at " + std::to_string(mv.pos) + ": " + msg);
        }
        out.elements.push_back(std::move(moved));
    }
    return out;
}

TorusRoute transport_route(const RootDatum& rd, TorusElement::SeedPtr seed, Word word,
                           const std::vector<CoxMove>& route,
                           std::vector<TorusElement> elements,
                           std::vector<std::string>* warnings) {
    for (const CoxMove& mv : route) {
        TorusMove step = transport_braid_move(rd, seed, word, mv, std::move(elements), warnings);
        seed = step.seed;
        elements = std::move(step.elements);
    }
    return {std::move(seed), std::move(word), std::move(elements)};
}

} // namespace posrep
