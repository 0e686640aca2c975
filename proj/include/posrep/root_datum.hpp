#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "posrep/rational.hpp"

namespace posrep {

using Word = std::vector<int>;

/// One rewrite of a reduced word: flips the alternating pattern of length m
/// starting at position pos (0-based).  m = 2 swaps a commuting pair, m = 3
/// is the braid move (i,j,i) -> (j,i,j), m = 4 the length-4 braid move.
struct CoxMove {
    int pos = 0;
    int m = 2;
    bool operator==(const CoxMove& o) const { return pos == o.pos && m == o.m; }
};

/// Cartan datum of a finite-type simple Lie algebra together with the
/// symmetrizers d_i, plus the Weyl-group word combinatorics built on it.
/// Node labels are 1..rank for families A,B,C,D,F,G; families E use labels
/// 1..rank-1 for the chain plus label 0 attached to node 3.
class RootDatum {
public:
    static RootDatum create(char family, int rank);
    static RootDatum create(const std::string& type);  // e.g. "A3", "E6"

    char family() const { return family_; }
    int rank() const { return rank_; }
    const std::vector<int>& labels() const { return labels_; }

    long long a(int i, int j) const;     // Cartan entry by node label
    Rational d(int i) const;             // multiplier by node label
    Rational q_exp(int i) const { return d(i); }  // q_i = q^{d_i}

    /// Coxeter exponent m(i,j) in {2,3,4,6} for i != j.
    int m_exp(int i, int j) const;

    /// Simple reflection acting on a root-lattice vector (simple-root basis).
    std::vector<Rational> reflect(int i, std::vector<Rational> v) const;
    /// Word action w(v) = s_{i1}(s_{i2}(...s_{ik}(v)...)).
    std::vector<Rational> act(const Word& word, std::vector<Rational> v) const;

    std::vector<Rational> simple_root(int i) const;
    const std::vector<std::vector<Rational>>& positive_roots() const;

    long long length(const Word& word) const;
    bool is_reduced(const Word& word) const;
    long long longest_length() const { return (long long)positive_roots().size(); }

    /// Greedy canonical reduced word of w0: repeatedly append the smallest
    /// label that lengthens the word.
    Word longest_word() const;
    /// Greedy completion of a reduced prefix to a reduced word of w0.
    /// Throws std::invalid_argument if the prefix is not reduced.
    Word extend_to_longest(const Word& prefix) const;
    /// Greedy longest word of the parabolic subgroup W_J.
    Word longest_word_in(const std::set<int>& J) const;

    /// i* with w0 s_i w0 = s_{i*}.
    int dynkin_involution(int i) const;
    /// i** = (i^{*W})^{*W_J}, with the convention j^{*W_J} = j for j not in J.
    int double_dynkin_involution(int i, const std::set<int>& J) const;

    struct ParabolicFactorization {
        std::set<int> J;
        Word word_J;    // longest word of W_J
        Word word_bar;  // completion: word_J . word_bar reduced word of w0
    };
    ParabolicFactorization parabolic_factorize(const std::set<int>& J) const;

    /// Chain beta_j = s_{i_m}...s_{i_{j+1}}(alpha_{i_j}) for j = 1..m,
    /// with a flag telling whether beta_j is a simple root (and which one).
    struct RootChainEntry {
        std::vector<Rational> root;
        bool simple = false;
        int simple_index = 0;
    };
    std::vector<RootChainEntry> positive_root_chain(const Word& word) const;

    /// Validates the alternating pattern and applies the move.
    Word apply_move(const Word& word, const CoxMove& mv) const;

    /// Brings the reduced word to one starting with letter c; c must be a
    /// left descent of the word's element.  Returns the move list.
    std::vector<CoxMove> make_first(Word& word, int c) const;
    /// Move sequence transforming reduced word `from` into `to` (same element).
    std::vector<CoxMove> align(const Word& from, const Word& to) const;

    struct Route {
        std::vector<CoxMove> prep;   // moves never touching the sliding front
        std::vector<CoxMove> chain;  // overlapping moves sweeping left to right
        Word final_word;
    };
    /// Move sequence bringing a reduced word (i,...) to one ending with
    /// target j, split as prep moves followed by a consecutive chain
    /// anchored at position 0.  Requires w(alpha_j) = -alpha_i, equivalently
    /// l(w s_j) < l(w) and l(s_i w s_j) = l(w); throws otherwise.
    Route coxeter_route(const Word& word, int target) const;

    /// True iff l(w s_j) < l(w) and l(s_i w s_j) = l(w) for i = word[0].
    bool route_precondition(const Word& word, int target) const;

    std::string type_string() const;
    std::string to_json() const;

private:
    char family_ = 'A';
    int rank_ = 0;
    std::vector<int> labels_;
    std::map<int, int> idx_;                       // label -> index
    std::vector<std::vector<long long>> cartan_;   // by index
    std::vector<Rational> d_;                      // by index

    void add_edge(int i, int j, long long aij, long long aji);
    bool lengthens_right(const std::vector<std::vector<Rational>>& wmat, int i) const;
    static std::vector<std::vector<Rational>> identity_mat(int n);
    std::vector<std::vector<Rational>> word_matrix(const Word& word) const;
    mutable std::vector<std::vector<Rational>> pos_roots_;
};

std::string word_str(const Word& w);
Word parse_word(const std::string& s);

} // namespace posrep
