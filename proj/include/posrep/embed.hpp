#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "posrep/torus.hpp"

namespace posrep {

/// Borel-half generator family hosted on the basic quiver of one reduced
/// word.  f_i / Kp_i exist for every level; e_i / K_i only for indices that
/// occur as a right descent reachable by braid moves (all of them when the
/// word spells the longest element, the parabolic indices for a w_J word).
/// omega stores the defect of the Heisenberg relation on this chart,
///   [e_i, f_j] = (q_i - q_i^{-1}) (delta_ij Kp_j - omega_ij K_i),
/// zero entries omitted.
struct HalfFamily {
    TorusElement::SeedPtr chart;
    Word word;
    std::map<int, TorusElement> e, f, K, Kp;
    std::map<std::pair<int, int>, long long> omega;

    long long omega_at(int i, int j) const;
};

/// Build the half family on Q(word): f_i is the telescoping path sum over
/// the level-i strand, Kp_i the full strand monomial, and e_i / K_i are
/// constructed on a word ending in i and transported back by braid moves.
HalfFamily plus_generators(const RootDatum& rd, const Word& word);

/// Generator images e_i, f_i, K_i, Kp_i in the quantum torus of a double
/// chart, under the rescaled convention
///   [e_i, f_j] = delta_ij (q_i - q_i^{-1}) (Kp_i - K_i).
/// `word` is the underlying reduced word (empty for the affine wheel, where
/// `indices` runs 0..n instead of over Dynkin labels).
struct GeneratorSet {
    TorusElement::SeedPtr chart;
    std::string type;
    Word word;
    std::vector<int> indices;
    std::map<int, TorusElement> e, f, K, Kp;

    nlohmann::json to_json() const;
    static GeneratorSet from_json(const nlohmann::json& j);
};

/// Doubling step: host the half family on the two-block tensor chart, adjoin
/// the opposite copy through the lattice antiautomorphism, and combine.  The
/// combined images have matching coordinates on both copies of each glued
/// vertex, so they project onto the double chart.
GeneratorSet assemble_double(const RootDatum& rd, const HalfFamily& plus);

/// assemble_double(plus_generators(word)) on D(word).
GeneratorSet build_generators(const RootDatum& rd, const Word& word);

/// Outcome of one relation instance; `detail` holds the first offending
/// monomial of the defect when the check fails.
struct RelationReport {
    struct Item {
        std::string name;
        bool passed = false;
        std::string detail;
    };
    std::vector<Item> items;

    bool all_passed() const;
    int failed() const;
    std::string summary() const;
    const Item* find(const std::string& name) const;
};

/// Exact check of the defining relations: Cartan monomials commute, K / Kp
/// scale e / f by q^{+-d_i a_ij}, mixed e-f commutators are zero off the
/// diagonal and divide to Kp_i - K_i on it, and both Serre sums vanish with
/// balanced q-binomial coefficients.  `a` and `d` give the Cartan matrix and
/// the symmetrizers over g.indices.
RelationReport verify_relations(const GeneratorSet& g,
                                const std::function<long long(int, int)>& a,
                                const std::function<Rational(int)>& d);
RelationReport verify_relations(const GeneratorSet& g, const RootDatum& rd);
/// Cyclic affine Cartan matrix of sl(n+1)^ (n = 1 doubles the off-diagonal).
RelationReport verify_relations_affine(const GeneratorSet& g, int n);

/// One commuting half of a split generator system.
struct Family {
    std::map<int, TorusElement> e, f, K, Kp;
};

/// Split of a GeneratorSet over the two-block tensor chart refining its
/// double chart: e_i = e_i^+ + K_i^+ e_i^-, f_i = f_i^- + Kp_i^- f_i^+, and
/// the Cartan monomials factor blockwise.  Each half satisfies its own
/// Heisenberg relations up to the omega defect; `notes` records any scalar
/// that fails the integer pattern.
struct HeisenbergSplit {
    TorusElement::SeedPtr tensor;
    Family plus, minus;
    std::map<std::pair<int, int>, long long> omega_plus, omega_minus;
    std::vector<std::string> notes;
};

/// Classify the terms of each generator by block membership and verify the
/// split identities.  Throws when a term straddles the blocks in a way the
/// split form cannot host.
HeisenbergSplit heisenberg_split(const GeneratorSet& g, const RootDatum& rd);

/// Parabolic splitting of the half family on Q(word_J . word_bar): the
/// J-side family lives on Q(word_J), the bar family on Q(word_bar), and
/// on the two-block union chart the big generators recombine as
///   e_i = ebar_i + Kbar_i e^J_{i**},   f_i = f^J_i + Kp^J_i fbar_i,
///   K_i = K^J_{i**} Kbar_i,           Kp_i = Kp^J_i Kpbar_i.
/// `istar2` is the double Dynkin involution i -> i**; the bar family's
/// omega matrix realizes omega_ij = delta_{i**,j} on J-side indices.
struct ParabolicDecomposition {
    std::set<int> J;
    Word word_J, word_bar;
    HalfFamily Jside;
    HalfFamily bar;
    std::map<int, int> istar2;
    RelationReport checks;
};

ParabolicDecomposition decompose_parabolic(const RootDatum& rd, const std::set<int>& J,
                                           const Word& word);

/// Send the J-side images to 0 / 1: double the bar family on D(word_bar).
/// The result satisfies the full relation suite (verified, throws on
/// failure).
GeneratorSet truncate_parabolic(const RootDatum& rd, const ParabolicDecomposition& dec);

/// Braid-group action on generator images (simply-laced types):
///   T_i(e_i) = q^{-1} K_i^{-1} f_i,  T_i(f_i) = q^{-1} K_i e_i,
///   T_i(K_i) = K_i',  T_i(K_i') = K_i,
///   T_i(K_j) = K_j K_i^{-a_ij},  T_i(K_j') = K_j' K_i'^{-a_ij},
/// and for a_ij = -1
///   T_i(e_j) = (q^{1/2} e_j e_i - q^{-1/2} e_i e_j) / (q - q^{-1}),
/// with the same shape for f.  Returns the full image family on the same
/// chart (again a relation-satisfying generator set).  On the doubled chart
/// the braid relation holds exactly on the e images and up to central
/// Cartan monomials K_i K_i' on the rest; those factors die in the quotient
/// where K_i' is inverse to K_i.
GeneratorSet lusztig_T(const RootDatum& rd, const GeneratorSet& g, int i);

/// Images of the root-vector generators e_{i,j}, f_{i,j} (1 <= i < j <= n+1)
/// of type A_n on the minimal double chart D((n, ..., 1)): closed telescoping
/// formulas, consistent with e_{i,j} = T_i ... T_{j-2}(e_{j-1}).
struct NonsimpleGenerators {
    TorusElement::SeedPtr chart;
    std::map<std::pair<int, int>, TorusElement> e, f;
};
NonsimpleGenerators nonsimple_generators(const RootDatum& rd, const GeneratorSet& minimal);

/// Generator images of affine sl(n+1)^ on the wheel chart, indices 0..n:
/// the finite-type minimal formulas read cyclically mod n+1.
GeneratorSet affine_generators(int n);

/// Exact identities satisfied by the affine images and the wheel's central
/// monomials D_eps = prod_i X_{f_i^eps}:
///   (i)    f_0 = X_{f_0^-1} X_{f_0^1} D_1^{-1} e_{1,n}   (n >= 2)
///   (ii)   X_{f_0^-1, f_0^1} = prod_k K_k^{-(n+1-k)/(n+1)} Kp_k^{-k/(n+1)}
///                              . D_0^{n/(n+1)} D_-1 D_1
///   (iii)  D_-1 D_0 D_1 = K_0 ... K_n = Kp_0 ... Kp_n
///   (iv)   prod K_i Kp_i = prod D_eps^2
RelationReport evaluation_identities(int n);

} // namespace posrep
