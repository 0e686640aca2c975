#include "posrep/polarize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace posrep {

// ---------------------------------------------------------------------------
// LinForm
// ---------------------------------------------------------------------------

static void add_scaled(std::map<int, Rational>& dst, const std::map<int, Rational>& src,
                       const Rational& f) {
    for (const auto& [k, v] : src) {
        Rational nv = v * f;
        if (nv.is_zero()) continue;
        auto it = dst.find(k);
        if (it == dst.end()) {
            dst.emplace(k, nv);
        } else {
            it->second = it->second + nv;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

LinForm LinForm::operator-() const { return scaled(Rational(-1)); }

LinForm LinForm::operator+(const LinForm& o) const {
    LinForm x = *this;
    add_scaled(x.u, o.u, Rational(1));
    add_scaled(x.p, o.p, Rational(1));
    add_scaled(x.lam, o.lam, Rational(1));
    x.c = x.c + o.c;
    return x;
}

LinForm LinForm::operator-(const LinForm& o) const { return *this + (-o); }

LinForm LinForm::scaled(const Rational& r) const {
    LinForm x;
    if (r.is_zero()) return x;
    add_scaled(x.u, u, r);
    add_scaled(x.p, p, r);
    add_scaled(x.lam, lam, r);
    x.c = c * r;
    return x;
}

bool LinForm::operator<(const LinForm& o) const {
    if (u != o.u) return u < o.u;
    if (p != o.p) return p < o.p;
    if (lam != o.lam) return lam < o.lam;
    return c < o.c;
}

static void append_term(std::ostringstream& os, bool& first, const Rational& coeff,
                        const std::string& base) {
    if (coeff.is_zero()) return;
    Rational a = coeff;
    bool neg = a < Rational(0);
    if (neg) a = -a;
    if (!first)
        os << (neg ? " - " : " + ");
    else if (neg)
        os << "-";
    first = false;
    if (base.empty()) {
        os << a.str();
        return;
    }
    if (!(a == Rational(1))) os << a.str() << "*";
    os << base;
}

std::string LinForm::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : u) append_term(os, first, v, "u" + std::to_string(k));
    for (const auto& [k, v] : p) append_term(os, first, v, "p" + std::to_string(k));
    for (const auto& [k, v] : lam) append_term(os, first, v, "lam" + std::to_string(k));
    append_term(os, first, c, "");
    return os.str();
}

static nlohmann::json rational_json(const Rational& r) {
    return nlohmann::json{{"num", r.num()}, {"den", r.den()}};
}

static Rational rational_from_json(const nlohmann::json& j) {
    return Rational(j.at("num").get<long long>(), j.at("den").get<long long>());
}

static nlohmann::json section_json(const std::map<int, Rational>& m) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [k, v] : m) o[std::to_string(k)] = rational_json(v);
    return o;
}

static std::map<int, Rational> section_from_json(const nlohmann::json& j) {
    std::map<int, Rational> m;
    for (const auto& [key, val] : j.items()) {
        Rational v = rational_from_json(val);
        if (!v.is_zero()) m.emplace(std::stoi(key), v);
    }
    return m;
}

nlohmann::json LinForm::to_json() const {
    return nlohmann::json{{"u", section_json(u)},
                          {"p", section_json(p)},
                          {"lambda", section_json(lam)},
                          {"const", rational_json(c)}};
}

LinForm LinForm::from_json(const nlohmann::json& j) {
    LinForm L;
    L.u = section_from_json(j.at("u"));
    L.p = section_from_json(j.at("p"));
    L.lam = section_from_json(j.at("lambda"));
    L.c = rational_from_json(j.at("const"));
    return L;
}

LinForm u_sym(int k, const Rational& c) {
    LinForm L;
    if (!c.is_zero()) L.u.emplace(k, c);
    return L;
}

LinForm p_sym(int k, const Rational& c) {
    LinForm L;
    if (!c.is_zero()) L.p.emplace(k, c);
    return L;
}

LinForm lam_sym(int j, const Rational& c) {
    LinForm L;
    if (!c.is_zero()) L.lam.emplace(j, c);
    return L;
}

Rational symplectic_pairing(const LinForm& a, const LinForm& b) {
    Rational s(0);
    for (const auto& [k, av] : a.u) {
        auto it = b.p.find(k);
        if (it != b.p.end()) s = s + av * it->second;
    }
    for (const auto& [k, av] : a.p) {
        auto it = b.u.find(k);
        if (it != b.u.end()) s = s - av * it->second;
    }
    return s;
}

// ---------------------------------------------------------------------------
// OpElement
// ---------------------------------------------------------------------------

OpElement OpElement::exponential(const LinForm& L, const QCoefficient& c) {
    OpElement x;
    if (!c.is_zero()) x.terms_.emplace(L, c);
    return x;
}

OpElement OpElement::scalar(const QCoefficient& c) { return exponential(LinForm{}, c); }

const std::pair<const LinForm, QCoefficient>& OpElement::single_term() const {
    if (terms_.size() != 1) throw std::logic_error("OpElement: not a single term");
    return *terms_.begin();
}

void OpElement::insert(const LinForm& L, const QCoefficient& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(L);
    if (it == terms_.end()) {
        terms_.emplace(L, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

OpElement OpElement::operator-() const {
    OpElement x;
    for (const auto& [L, c] : terms_) x.terms_.emplace(L, -c);
    return x;
}

OpElement& OpElement::operator+=(const OpElement& o) {
    for (const auto& [L, c] : o.terms_) insert(L, c);
    return *this;
}

OpElement& OpElement::operator-=(const OpElement& o) {
    for (const auto& [L, c] : o.terms_) insert(L, -c);
    return *this;
}

OpElement OpElement::operator+(const OpElement& o) const {
    OpElement x = *this;
    return x += o;
}

OpElement OpElement::operator-(const OpElement& o) const {
    OpElement x = *this;
    return x -= o;
}

OpElement OpElement::operator*(const OpElement& o) const {
    OpElement x;
    for (const auto& [L1, c1] : terms_)
        for (const auto& [L2, c2] : o.terms_) {
            Rational s = symplectic_pairing(L1, L2);
            x.insert(L1 + L2, c1 * c2 * QCoefficient::q_power(s * Rational(1, 4)));
        }
    return x;
}

OpElement OpElement::operator*(const QCoefficient& c) const {
    OpElement x;
    if (c.is_zero()) return x;
    for (const auto& [L, cc] : terms_) x.terms_.emplace(L, cc * c);
    return x;
}

OpElement OpElement::inverse() const {
    const auto& [L, c] = single_term();
    if (!c.is_monomial()) throw std::domain_error("OpElement: coefficient is not a unit");
    auto [exp, cc] = *c.terms().begin();
    if (cc != 1 && cc != -1) throw std::domain_error("OpElement: coefficient is not a unit");
    return exponential(-L, QCoefficient::q_power(-exp, cc));
}

OpElement OpElement::pow(long long n) const {
    if (n < 0) return inverse().pow(-n);
    OpElement x = scalar(QCoefficient(1));
    for (long long j = 0; j < n; ++j) x = x * *this;
    return x;
}

OpElement OpElement::pow(const Rational& r) const {
    if (r.is_integer()) return pow(r.num());
    const auto& [L, c] = single_term();
    if (!c.is_monomial()) throw std::domain_error("OpElement: fractional power of a sum coefficient");
    auto [exp, cc] = *c.terms().begin();
    if (cc != 1) throw std::domain_error("OpElement: fractional power needs coefficient q^r");
    return exponential(L.scaled(r), QCoefficient::q_power(exp * r));
}

std::string OpElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [L, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        bool unit = (c == QCoefficient(1));
        if (!unit) {
            if (c.is_monomial())
                os << c.str() << " ";
            else
                os << "(" << c.str() << ") ";
        }
        if (L.is_zero() && unit)
            os << "1";
        else if (!L.is_zero())
            os << "e(" << L.str() << ")";
        else
            os << "1";
    }
    return os.str();
}

nlohmann::json OpElement::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [L, c] : terms_) {
        nlohmann::json coeff = nlohmann::json::array();
        for (const auto& [e, cc] : c.terms())
            coeff.push_back(nlohmann::json{{"qexp", rational_json(e)}, {"int", cc}});
        arr.push_back(nlohmann::json{{"form", L.to_json()}, {"coeff", coeff}});
    }
    return arr;
}

OpElement OpElement::from_json(const nlohmann::json& j) {
    OpElement x;
    for (const auto& term : j) {
        QCoefficient c;
        for (const auto& mono : term.at("coeff"))
            c += QCoefficient::q_power(rational_from_json(mono.at("qexp")),
                                       mono.at("int").get<long long>());
        x.insert(LinForm::from_json(term.at("form")), c);
    }
    return x;
}

OpElement op_commutator(const OpElement& a, const OpElement& b) { return a * b - b * a; }

OpElement braket(const LinForm& L1, const LinForm& L2) {
    return OpElement::exponential(L1 + L2) + OpElement::exponential(-L1 + L2);
}

// ---------------------------------------------------------------------------
// Polarizations
// ---------------------------------------------------------------------------

static LinForm pairing_row(const ClusterSeed& seed, VertexId v) {
    LinForm L;
    for (VertexId j : seed.vertices()) {
        Rational wv = seed.w(v, j);
        if (!wv.is_zero()) L += u_sym(j, wv);
    }
    return L;
}

Polarization standard_polarization(const ClusterSeed& seed) {
    Polarization pol;
    for (VertexId v : seed.vertices())
        pol.forms.emplace(v, pairing_row(seed, v) + p_sym(v, Rational(-2)));
    return pol;
}

Polarization double_polarization(const ClusterSeed& doubled, const ClusterSeed& basic) {
    Polarization pol;
    for (VertexId v : doubled.vertices()) {
        VertexLabel lab = doubled.label(v);
        bool glued = (lab.kind == 'e') || (lab.index == 0);
        int idx = lab.index < 0 ? -lab.index : lab.index;
        VertexId b = basic.require(lab.kind, lab.level, idx);
        LinForm row = pairing_row(basic, b);
        if (glued)
            pol.forms.emplace(v, row.scaled(Rational(2)));
        else if (lab.index > 0)
            pol.forms.emplace(v, row + p_sym(b, Rational(-2)));
        else
            pol.forms.emplace(v, row + p_sym(b, Rational(2)));
    }
    return pol;
}

static std::string label_str(const ClusterSeed& seed, VertexId v) {
    VertexLabel lab = seed.label(v);
    std::ostringstream os;
    os << lab.kind << "_" << lab.level << "^" << lab.index;
    return os.str();
}

Polarization grouplike_polarization(const RootDatum& rd, const Word& word,
                                    const GeneratorSet& g,
                                    const std::map<int, LinForm>& lambda) {
    const int N = static_cast<int>(word.size());
    if (N == 0) throw std::invalid_argument("grouplike_polarization: empty word");
    if (!g.chart) throw std::invalid_argument("grouplike_polarization: generator set has no chart");
    const ClusterSeed& chart = *g.chart;

    auto lam_of = [&](int i) -> LinForm {
        auto it = lambda.find(i);
        return it != lambda.end() ? it->second : lam_sym(i);
    };
    // half the exponent of the strand term at position k: the momentum-free
    // part grows by d_i a_{i, i_j} u_j per earlier letter
    auto body = [&](int i, int k) {
        LinForm L = lam_of(i).scaled(Rational(2));
        Rational di(rd.d(i));
        for (int j = 1; j < k; ++j) L += u_sym(j, di * Rational(rd.a(i, word[j - 1])));
        L += u_sym(k, di);
        return L;
    };
    auto kk_form = [&](int i) {
        LinForm L = lam_of(i).scaled(Rational(-2));
        Rational di(rd.d(i));
        for (int j = 1; j <= N; ++j) L -= u_sym(j, di * Rational(rd.a(i, word[j - 1])));
        return L;
    };

    Polarization pol;
    auto assign = [&](VertexId v, const LinForm& L, const std::string& who) {
        auto it = pol.forms.find(v);
        if (it == pol.forms.end())
            pol.forms.emplace(v, L);
        else if (!(it->second == L))
            throw std::logic_error("grouplike_polarization: conflicting forms for " +
                                   label_str(chart, v) + " via " + who);
    };

    // phase 1: successive ratios of the telescoping sum of each f_i pin the
    // strand vertices; term r matches the minus-side form of the r-th
    // occurrence from the end, then the plus side in word order
    for (const auto& [i, fi] : g.f) {
        std::vector<int> ks;
        for (int j = 1; j <= N; ++j)
            if (word[j - 1] == i) ks.push_back(j);
        std::string who = "f_" + std::to_string(i);
        if (ks.empty())
            throw std::invalid_argument("grouplike_polarization: index " + std::to_string(i) +
                                        " does not occur in the word");
        int m = static_cast<int>(ks.size());
        if (fi.term_count() != 2 * m)
            throw std::logic_error("grouplike_polarization: " + who + " has " +
                                   std::to_string(fi.term_count()) + " terms, expected " +
                                   std::to_string(2 * m));
        std::vector<const LatticeVector*> pref;
        for (const auto& [lat, coeff] : fi.terms()) {
            if (!(coeff == QCoefficient(1)))
                throw std::logic_error("grouplike_polarization: " + who +
                                       " has a nontrivial term coefficient");
            pref.push_back(&lat);
        }
        std::sort(pref.begin(), pref.end(),
                  [](const LatticeVector* a, const LatticeVector* b) { return a->size() < b->size(); });

        std::vector<LinForm> T;
        for (int r = m - 1; r >= 0; --r) T.push_back(-body(i, ks[r]) + p_sym(ks[r], Rational(2)));
        for (int r = 0; r < m; ++r) T.push_back(body(i, ks[r]) + p_sym(ks[r], Rational(2)));

        if (pref[0]->size() != 1 || !(pref[0]->begin()->second == Rational(1)))
            throw std::logic_error("grouplike_polarization: " + who +
                                   " does not start from a single vertex");
        assign(pref[0]->begin()->first, T[0], who);
        for (int r = 1; r < 2 * m; ++r) {
            LatticeVector d = *pref[r];
            for (const auto& [v, cv] : *pref[r - 1]) {
                auto it = d.find(v);
                if (it == d.end())
                    throw std::logic_error("grouplike_polarization: " + who +
                                           " terms are not nested");
                it->second = it->second - cv;
                if (it->second.is_zero()) d.erase(it);
            }
            if (d.size() != 1 || !(d.begin()->second == Rational(1)))
                throw std::logic_error("grouplike_polarization: " + who +
                                       " step " + std::to_string(r) + " is not a single vertex");
            assign(d.begin()->first, T[r] - T[r - 1], who);
        }
    }

    // phase 2: Cartan images pin whatever the strands left open, one new
    // vertex per monomial; fully assigned monomials are consistency checks
    struct PinEq {
        std::string name;
        const TorusElement* op;
        LinForm target;
    };
    std::vector<PinEq> eqs;
    for (const auto& [i, Kp] : g.Kp) eqs.push_back({"K'_" + std::to_string(i), &Kp, -kk_form(i)});
    for (const auto& [i, K] : g.K) eqs.push_back({"K_" + std::to_string(i), &K, kk_form(i)});

    std::vector<bool> done(eqs.size(), false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t idx = 0; idx < eqs.size(); ++idx) {
            if (done[idx]) continue;
            const PinEq& eq = eqs[idx];
            if (!eq.op->is_monomial())
                throw std::logic_error("grouplike_polarization: " + eq.name + " is not a monomial");
            const auto& [lat, coeff] = eq.op->single_term();
            if (!(coeff == QCoefficient(1)))
                throw std::logic_error("grouplike_polarization: " + eq.name +
                                       " has a nontrivial coefficient");
            LinForm acc;
            VertexId open = -1;
            Rational open_c;
            int missing = 0;
            for (const auto& [v, cv] : lat) {
                auto it = pol.forms.find(v);
                if (it == pol.forms.end()) {
                    ++missing;
                    open = v;
                    open_c = cv;
                } else {
                    acc += it->second.scaled(cv);
                }
            }
            if (missing > 1) continue;
            if (missing == 1)
                assign(open, (eq.target - acc).scaled(Rational(1) / open_c), eq.name);
            else if (!(acc == eq.target))
                throw std::logic_error("grouplike_polarization: " + eq.name +
                                       " does not match the pinned forms");
            done[idx] = true;
            progress = true;
        }
    }
    for (size_t idx = 0; idx < eqs.size(); ++idx)
        if (!done[idx])
            throw std::logic_error("grouplike_polarization: " + eqs[idx].name +
                                   " leaves more than one vertex open");

    for (VertexId v : chart.vertices())
        if (!pol.forms.count(v))
            throw std::logic_error("grouplike_polarization: vertex " + label_str(chart, v) +
                                   " is not pinned by any generator");
    return pol;
}

std::string PolarizationReport::summary() const {
    std::ostringstream os;
    if (ok) {
        os << "polarization consistent, sign " << sign;
    } else {
        os << "polarization INCONSISTENT";
        for (const auto& n : notes) os << "\n  " << n;
    }
    return os.str();
}

PolarizationReport validate(const Polarization& pol, const ClusterSeed& seed) {
    PolarizationReport rep;
    rep.ok = true;
    auto vs = seed.vertices();
    for (VertexId v : vs)
        if (!pol.forms.count(v)) {
            rep.ok = false;
            rep.notes.push_back("missing form for vertex " + std::to_string(v));
        }
    if (!rep.ok) return rep;
    Rational eps(0);
    for (size_t a = 0; a < vs.size(); ++a)
        for (size_t b = a + 1; b < vs.size(); ++b) {
            Rational sig = symplectic_pairing(pol.forms.at(vs[a]), pol.forms.at(vs[b]));
            Rational w = seed.w(vs[a], vs[b]);
            std::string pair = "(" + std::to_string(vs[a]) + ", " + std::to_string(vs[b]) + ")";
            if (w.is_zero()) {
                if (!sig.is_zero()) {
                    rep.ok = false;
                    rep.notes.push_back("pair " + pair + ": pairing " + sig.str() +
                                        " with zero seed weight");
                }
                continue;
            }
            Rational e = sig / (Rational(4) * w);
            if (!(e == Rational(1)) && !(e == Rational(-1))) {
                rep.ok = false;
                rep.notes.push_back("pair " + pair + ": pairing " + sig.str() +
                                    " is not +-4 times weight " + w.str());
            } else if (eps.is_zero()) {
                eps = e;
            } else if (!(e == eps)) {
                rep.ok = false;
                rep.notes.push_back("pair " + pair + ": sign flips against earlier pairs");
            }
        }
    rep.sign = eps.is_zero() ? 0 : (eps == Rational(1) ? 1 : -1);
    return rep;
}

OpElement apply(const Polarization& pol, const TorusElement& a) {
    OpElement out;
    for (const auto& [lat, coeff] : a.terms()) {
        LinForm L;
        for (const auto& [v, cv] : lat) {
            auto it = pol.forms.find(v);
            if (it == pol.forms.end())
                throw std::invalid_argument("apply: no form for vertex " + std::to_string(v));
            L += it->second.scaled(cv);
        }
        out.insert(L, coeff);
    }
    return out;
}

MinimalRep minimal_rep(int n, const LinForm& lambda) {
    if (n < 1) throw std::invalid_argument("minimal_rep: n must be positive");
    MinimalRep m;
    m.n = n;
    for (int i = 1; i <= n; ++i) {
        LinForm ue = u_sym(i);
        if (i > 1) ue -= u_sym(i - 1);
        m.e[i] = braket(ue, p_sym(i, Rational(-2)));
        LinForm uf =
            i < n ? u_sym(i + 1) - u_sym(i) : lambda.scaled(Rational(2)) - u_sym(n);
        m.f[i] = braket(uf, p_sym(i, Rational(2)));
        LinForm k;
        for (int j = std::max(1, i - 1); j <= std::min(n, i + 1); ++j)
            k -= u_sym(j, Rational(j == i ? 2 : -1));
        if (i == n) k += lambda.scaled(Rational(2));
        m.K[i] = OpElement::exponential(k);
    }
    return m;
}

static std::map<int, Rational> rename_keys(const std::map<int, Rational>& src,
                                           const std::map<int, int>& km) {
    std::map<int, Rational> out;
    for (const auto& [k, v] : src) {
        auto it = km.find(k);
        int nk = it == km.end() ? k : it->second;
        auto jt = out.find(nk);
        if (jt == out.end()) {
            out.emplace(nk, v);
        } else {
            jt->second = jt->second + v;
            if (jt->second.is_zero()) out.erase(jt);
        }
    }
    return out;
}

LinForm rename_coordinates(const LinForm& L, const std::map<int, int>& umap,
                           const std::map<int, int>& pmap) {
    LinForm out = L;
    out.u = rename_keys(L.u, umap);
    out.p = rename_keys(L.p, pmap);
    return out;
}

OpElement rename_coordinates(const OpElement& a, const std::map<int, int>& umap,
                             const std::map<int, int>& pmap) {
    OpElement out;
    for (const auto& [L, c] : a.terms()) out.insert(rename_coordinates(L, umap, pmap), c);
    return out;
}

} // namespace posrep
