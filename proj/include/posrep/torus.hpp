#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "posrep/qcoeff.hpp"
#include "posrep/seed.hpp"

namespace posrep {

/// Exponent vector in the seed lattice.  Zero entries are never stored, so
/// std::map comparison gives a canonical (lexicographic by vertex id) order.
using LatticeVector = std::map<VertexId, Rational>;

LatticeVector lattice_unit(VertexId v);
/// a += c * e_v, erasing the entry when it cancels to zero.
void lattice_add(LatticeVector& a, VertexId v, const Rational& c);
LatticeVector lattice_sum(const LatticeVector& a, const LatticeVector& b);
LatticeVector lattice_scale(const LatticeVector& a, const Rational& c);

/// Skew pairing (a, b) = sum a_u b_v w(u, v) over the seed form.
Rational lattice_pairing(const ClusterSeed& s, const LatticeVector& a, const LatticeVector& b);

/// Normalization of a fraction hit a factor that does not divide exactly.
struct NotLaurentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// A commutator was not divisible by the requested q_i - q_i^{-1}.
struct NotDivisibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of the quantum torus algebra over a seed: a finite sum of terms
/// c(q) X_lam with the product rule X_lam X_mu = q^{-(lam,mu)} X_{lam+mu}.
/// Values are immutable in spirit; all operations return new elements.
class TorusElement {
public:
    using SeedPtr = std::shared_ptr<const ClusterSeed>;
    using TermMap = std::map<LatticeVector, QCoefficient>;

    TorusElement() = default;
    explicit TorusElement(SeedPtr seed) : seed_(std::move(seed)) {}

    static TorusElement scalar(SeedPtr seed, const QCoefficient& c);
    static TorusElement monomial(SeedPtr seed, const LatticeVector& lam,
                                 const QCoefficient& c = QCoefficient(1));
    static TorusElement generator(SeedPtr seed, VertexId v);
    /// X_{v_1,...,v_m}: coefficient-one monomial of e_{v_1}+...+e_{v_m};
    /// repeated ids add up.
    static TorusElement from_vertices(SeedPtr seed, const std::vector<VertexId>& vs);
    /// X of sum n_j e_{v_j} from (vertex, exponent) pairs.
    static TorusElement from_powers(SeedPtr seed,
                                    const std::vector<std::pair<VertexId, Rational>>& ps);

    const SeedPtr& seed() const { return seed_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int term_count() const { return static_cast<int>(terms_.size()); }
    bool is_monomial() const { return terms_.size() == 1; }
    /// The unique term of a monomial element; throws otherwise.
    const std::pair<const LatticeVector, QCoefficient>& single_term() const;

    TorusElement operator-() const;
    TorusElement& operator+=(const TorusElement& o);
    TorusElement& operator-=(const TorusElement& o);
    TorusElement operator+(const TorusElement& o) const;
    TorusElement operator-(const TorusElement& o) const;
    /// Noncommutative product via the lattice rule; requires the same host seed.
    TorusElement operator*(const TorusElement& o) const;
    TorusElement operator*(const QCoefficient& c) const;
    /// Inverse of a monomial whose coefficient is a unit (+-q^r).
    TorusElement inverse() const;
    /// n-th power; n < 0 requires a monomial.
    TorusElement pow(long long n) const;
    /// q -> q^{-1} on every coefficient (lattice part untouched).
    TorusElement bar() const;

    bool operator==(const TorusElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const TorusElement& o) const { return !(*this == o); }

    std::string str() const;
    nlohmann::json to_json() const;
    static TorusElement from_json(SeedPtr seed, const nlohmann::json& j);

    /// Accumulate c X_lam into this element (used by the free operations).
    void insert(const LatticeVector& lam, const QCoefficient& c);

private:
    SeedPtr seed_;
    TermMap terms_;
};

inline TorusElement operator*(const QCoefficient& c, const TorusElement& a) { return a * c; }

/// ab - ba.
TorusElement commutator(const TorusElement& a, const TorusElement& b);
/// [a, b] / (q^d - q^{-d}); throws NotDivisibleError naming the first
/// offending monomial when a coefficient does not divide exactly.
TorusElement commutator_div(const TorusElement& a, const TorusElement& b, const Rational& d);

/// One binomial factor (1 + q^{qexp} X_k)^{sigma} with sigma in {+1, -1}.
struct BinomialFactor {
    VertexId k = -1;
    Rational qexp;
    int sigma = 1;
};

/// numerator * F_1^{s_1} * ... * F_m^{s_m} with the factors kept in order to
/// the right of the numerator.  Inverse factors are cleared by exact division
/// with the quotient as a left cofactor (solve Q * F = N).
struct TorusFraction {
    TorusElement numerator;
    std::vector<BinomialFactor> factors;

    std::string str() const;
};

/// a * (1 + q^{qexp} X_k).
TorusElement multiply_binomial(const TorusElement& a, VertexId k, const Rational& qexp);
/// Solve Q * (1 + q^{qexp} X_k) = a exactly; throws NotLaurentError otherwise.
TorusElement divide_binomial(const TorusElement& a, VertexId k, const Rational& qexp);
/// Clear all factors of the fraction left to right.
TorusElement normalize(const TorusFraction& f);

/// Seed mutation at k together with the induced variable substitutions in
/// both directions, each given as a fraction over its codomain chart.
struct QuantumMutation {
    TorusElement::SeedPtr source;
    TorusElement::SeedPtr target;
    VertexId k = -1;
    /// Variable X'_v of the mutated chart written over the source torus.
    std::map<VertexId, TorusFraction> new_to_old;
    /// Variable X_v of the source chart written over the mutated torus.
    std::map<VertexId, TorusFraction> old_to_new;
};
QuantumMutation quantum_mutation(const TorusElement::SeedPtr& seed, VertexId k);

/// Push a whole element through the mutation at k into the chart of
/// `target`, which must equal the mutation of a's seed at k.  Expands the
/// variable substitutions monomial by monomial over a common denominator and
/// divides back out, so the result is again Laurent (or NotLaurentError).
TorusElement transport_mutation(const TorusElement& a, const TorusElement::SeedPtr& target,
                                VertexId k);

/// Swap the host seed for another with identical ids, multipliers and
/// pairings (labels and frozen flags may differ, e.g. after a braid relabel).
TorusElement rehost(const TorusElement& a, const TorusElement::SeedPtr& seed);

/// Apply a linear lattice map to every term; `images` sends each used source
/// vertex to its image vector.  With check_pairings the map is verified to
/// preserve the skew form on the support, which keeps coefficients intact.
TorusElement map_lattice(const TorusElement& a, const TorusElement::SeedPtr& target,
                         const std::map<VertexId, LatticeVector>& images,
                         bool check_pairings = true);

/// Terms with a negative exponent at some unfrozen vertex, one description
/// per offender.  Empty means the element is polynomial in the unfrozen
/// cluster directions (soft positivity expectation for generator images).
std::vector<std::string> nonpolynomial_terms(const TorusElement& a);

/// Result of transporting torus elements along one braid move resp. a route
/// of braid moves: the final seed (relabeled like the new word's quiver), the
/// vertices mutated on the way, and the transported elements.
struct TorusMove {
    std::shared_ptr<const ClusterSeed> seed;
    std::vector<VertexId> mutated;
    std::vector<TorusElement> elements;
};
TorusMove transport_braid_move(const RootDatum& rd, const TorusElement::SeedPtr& seed,
                               Word& word, const CoxMove& mv,
                               std::vector<TorusElement> elements,
                               std::vector<std::string>* warnings = nullptr);

struct TorusRoute {
    std::shared_ptr<const ClusterSeed> seed;
    Word word;
    std::vector<TorusElement> elements;
};
TorusRoute transport_route(const RootDatum& rd, TorusElement::SeedPtr seed, Word word,
                           const std::vector<CoxMove>& route,
                           std::vector<TorusElement> elements,
                           std::vector<std::string>* warnings = nullptr);

} // namespace posrep
