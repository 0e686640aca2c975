#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "posrep/embed.hpp"

namespace posrep {

/// Linear form in position symbols u_k, momentum symbols p_k, parameter
/// symbols lam_j, and a rational constant.  Zero coefficients are never
/// stored, so map comparison is canonical.
struct LinForm {
    std::map<int, Rational> u, p, lam;
    Rational c;

    bool is_zero() const { return u.empty() && p.empty() && lam.empty() && c.is_zero(); }
    /// No position or momentum part, i.e. pairs to zero with everything.
    bool is_central() const { return u.empty() && p.empty(); }

    LinForm operator-() const;
    LinForm operator+(const LinForm& o) const;
    LinForm operator-(const LinForm& o) const;
    LinForm scaled(const Rational& r) const;
    LinForm& operator+=(const LinForm& o) { return *this = *this + o; }
    LinForm& operator-=(const LinForm& o) { return *this = *this - o; }

    bool operator==(const LinForm& o) const {
        return u == o.u && p == o.p && lam == o.lam && c == o.c;
    }
    bool operator!=(const LinForm& o) const { return !(*this == o); }
    bool operator<(const LinForm& o) const;

    std::string str() const;
    nlohmann::json to_json() const;
    static LinForm from_json(const nlohmann::json& j);
};

LinForm u_sym(int k, const Rational& c = Rational(1));
LinForm p_sym(int k, const Rational& c = Rational(1));
LinForm lam_sym(int j, const Rational& c = Rational(1));

/// 2 pi i [a, b] under [u_j, p_k] = delta_jk / (2 pi i); parameter symbols
/// and constants are central.
Rational symplectic_pairing(const LinForm& a, const LinForm& b);

/// Finite sum of coefficients times formal exponentials e(L) of linear
/// forms, multiplied by e(L1) e(L2) = q^{s/4} e(L1 + L2) where s is the
/// symplectic pairing of L1 with L2.  In particular e(X) e(Y) =
/// q^{1/2} e(Y) e(X) whenever the pairing of X with Y is 1.
class OpElement {
public:
    using TermMap = std::map<LinForm, QCoefficient>;

    OpElement() = default;
    static OpElement exponential(const LinForm& L, const QCoefficient& c = QCoefficient(1));
    static OpElement scalar(const QCoefficient& c);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int term_count() const { return static_cast<int>(terms_.size()); }
    bool is_monomial() const { return terms_.size() == 1; }
    /// The unique term of a one-term element; throws otherwise.
    const std::pair<const LinForm, QCoefficient>& single_term() const;

    OpElement operator-() const;
    OpElement& operator+=(const OpElement& o);
    OpElement& operator-=(const OpElement& o);
    OpElement operator+(const OpElement& o) const;
    OpElement operator-(const OpElement& o) const;
    OpElement operator*(const OpElement& o) const;
    OpElement operator*(const QCoefficient& c) const;
    /// Inverse of a single exponential whose coefficient is a unit +-q^r.
    OpElement inverse() const;
    /// n-th power; n < 0 requires a single exponential.
    OpElement pow(long long n) const;
    /// Rational power of a single exponential with coefficient q^r: scales
    /// the form and the q-exponent.
    OpElement pow(const Rational& r) const;

    bool operator==(const OpElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const OpElement& o) const { return !(*this == o); }

    std::string str() const;
    nlohmann::json to_json() const;
    static OpElement from_json(const nlohmann::json& j);

    /// Accumulate c e(L) into this element.
    void insert(const LinForm& L, const QCoefficient& c);

private:
    TermMap terms_;
};

inline OpElement operator*(const QCoefficient& c, const OpElement& a) { return a * c; }

OpElement op_commutator(const OpElement& a, const OpElement& b);

/// Two-term bracket sum [L1] e(L2) = e(L1 + L2) + e(-L1 + L2).
OpElement braket(const LinForm& L1, const LinForm& L2);

/// Exponential-of-linear-form assignment for the vertices of a seed: the
/// generator of vertex v acts as e(M_v).  `sign` is the global epsilon
/// relating the symplectic pairing of the forms to the seed's skew form,
/// sigma(M_u, M_v) = 4 epsilon w(u, v); every chart built here lands on -1.
struct Polarization {
    std::map<VertexId, LinForm> forms;
    int sign = -1;
};

struct PolarizationReport {
    bool ok = false;
    /// Fitted epsilon; 0 when every pairing is zero and nothing pins it.
    int sign = 0;
    std::vector<std::string> notes;

    std::string summary() const;
};

/// X_v -> e(-2 p_v + sum_j w(v, j) u_j) with one (u, p) pair per vertex,
/// coordinates keyed by vertex id.
Polarization standard_polarization(const ClusterSeed& seed);

/// Three-case assignment on a doubled chart: a strand vertex of positive
/// index takes the basic row of its partner with momentum -2p, a negative
/// index the same row with +2p, and a glued vertex (index 0 or an e-node)
/// twice its row with no momentum.  Coordinates are keyed by basic vertex
/// id; partners are matched through labels.
Polarization double_polarization(const ClusterSeed& doubled, const ClusterSeed& basic);

/// Representation-carrying polarization of a word chart, reconstructed from
/// the generator images.  Coordinates (u_k, p_k) are indexed by the
/// positions 1..N of `word`.  The 2 m_i telescoping terms of f_i are
/// matched with the two-sided strand forms
///   e(+-(d_i sum_{j<k} a_{i, i_j} u_j + d_i u_k + 2 lambda_i) + 2 p_k),
/// minus terms with k descending then plus terms ascending, so successive
/// ratios pin the strand vertices; the Cartan images pin the remainder via
/// K_i -> e(-2 lambda_i - d_i sum_j a_{i, i_j} u_j) with K_i' its inverse.
/// `lambda` overrides the parameter form of an index (absent entries
/// default to the symbol lam_i; the empty form switches one off).  Throws
/// std::logic_error when the ratio system does not pin the chart or pins
/// it inconsistently, which signals a malformed generator set.
Polarization grouplike_polarization(const RootDatum& rd, const Word& word,
                                    const GeneratorSet& g,
                                    const std::map<int, LinForm>& lambda = {});

/// Check sigma(M_u, M_v) = 4 epsilon w(u, v) over all vertex pairs for one
/// global epsilon; missing forms and mismatched pairs are reported.
PolarizationReport validate(const Polarization& pol, const ClusterSeed& seed);

/// Homomorphic image: c X_lam -> c e(sum_v lam_v M_v).  Requires a form for
/// every vertex in the support.
OpElement apply(const Polarization& pol, const TorusElement& a);

/// Closed operator table of the type A_n tail-parabolic family on n
/// coordinate pairs and one parameter form:
///   e_1 = [u_1] e(-2p_1),            e_i = [u_i - u_{i-1}] e(-2p_i),
///   f_i = [u_{i+1} - u_i] e(2p_i),   f_n = [2 lambda - u_n] e(2p_n),
///   K_i = e(-sum_j a_ij u_j), K_n picking up + 2 lambda.
/// Equals apply(grouplike_polarization) on the chart of the word
/// (n, ..., 1) after renaming coordinates k -> n + 1 - k.
struct MinimalRep {
    int n = 0;
    std::map<int, OpElement> e, f, K;
};
MinimalRep minimal_rep(int n, const LinForm& lambda);

/// Rewrite u / p coordinate keys; entries absent from a map keep their key.
LinForm rename_coordinates(const LinForm& L, const std::map<int, int>& umap,
                           const std::map<int, int>& pmap);
OpElement rename_coordinates(const OpElement& a, const std::map<int, int>& umap,
                             const std::map<int, int>& pmap);

} // namespace posrep
