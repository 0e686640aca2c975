#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "posrep/rational.hpp"
#include "posrep/root_datum.hpp"

namespace posrep {

using VertexId = int;

/// Vertex name inside a word quiver: f-vertices carry (level, occurrence
/// index), where the index runs 0..n_i left to right and negative indices
/// live on the mirrored half of a double; e-vertices are the extra nodes
/// attached to simple reflections of the root chain and always have index 0.
struct VertexLabel {
    char kind = 'f';
    int level = 0;
    int index = 0;

    bool operator==(const VertexLabel& o) const {
        return kind == o.kind && level == o.level && index == o.index;
    }
    bool operator<(const VertexLabel& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (level != o.level) return level < o.level;
        return index < o.index;
    }
    std::string str() const {
        return std::string(1, kind) + std::to_string(level) + "^" + std::to_string(index);
    }
};

/// Skew-symmetrizable cluster seed.  We store the skew form
/// w(u,v) = d_u * b(u,v) directly (both orientations), since amalgamation
/// and rank/center computations are additive in w, while the exchange
/// matrix b and the drawing adjacency c are derived views.
class ClusterSeed {
public:
    VertexId add_vertex(const VertexLabel& lab, const Rational& mult, bool frozen);
    void remove_vertex(VertexId v);
    /// Sum the pairings of `absorb` into `keep` and delete `absorb`.
    void merge_vertices(VertexId keep, VertexId absorb);
    /// w(u,v) += delta, w(v,u) -= delta.
    void add_pairing(VertexId u, VertexId v, const Rational& delta);

    const std::vector<VertexId>& vertices() const { return verts_; }
    int size() const { return static_cast<int>(verts_.size()); }
    bool has_vertex(VertexId v) const { return label_.count(v) != 0; }
    const VertexLabel& label(VertexId v) const { return label_.at(v); }
    void set_label(VertexId v, const VertexLabel& lab);
    bool is_frozen(VertexId v) const { return frozen_.count(v) != 0; }
    void set_frozen(VertexId v, bool frozen);
    const Rational& multiplier(VertexId v) const { return mult_.at(v); }

    Rational w(VertexId u, VertexId v) const;
    /// Exchange matrix entry b(u,v) = w(u,v) / d_u.
    Rational b(VertexId u, VertexId v) const { return w(u, v) / mult_.at(u); }
    /// Drawing adjacency: b(u,v) between equal multipliers, w(u,v) otherwise.
    Rational c(VertexId u, VertexId v) const;
    const std::map<VertexId, Rational>& row(VertexId u) const { return w_.at(u); }

    std::optional<VertexId> find(char kind, int level, int index) const;
    VertexId require(char kind, int level, int index) const;

    /// Compare through labels: true iff the label -> (multiplier, frozen flag,
    /// pairing) data agree, regardless of vertex ids.
    bool same_labeled(const ClusterSeed& o, bool check_frozen = true) const;

    /// Quantum cluster mutation at an unfrozen vertex k (seed part only).
    void mutate(VertexId k);

    struct Center {
        int rank = 0;
        /// Primitive integer kernel vectors of the w-matrix.
        std::vector<std::map<VertexId, long long>> kernel;
    };
    Center rank_and_center() const;

    nlohmann::json to_json() const;
    static ClusterSeed from_json(const nlohmann::json& j);
    std::string to_dot() const;

private:
    std::vector<VertexId> verts_;
    VertexId next_id_ = 0;
    std::map<VertexId, VertexLabel> label_;
    std::map<VertexId, Rational> mult_;
    std::set<VertexId> frozen_;
    std::map<VertexId, std::map<VertexId, Rational>> w_;
};

/// One-letter building block: i_l = f_i^0, i_r = f_i^1, one vertex per other
/// level, optionally an extra e_k^0 closing a triangle with i_l, i_r.
/// Everything frozen; isolated companions are kept (basic_quiver prunes).
ClusterSeed elementary_quiver(const RootDatum& rd, int i, std::optional<int> extra_k);

/// Quiver on the extra vertices alone: one e-vertex per simple entry of the
/// root chain of `word`, with signed arrows between Cartan-adjacent levels
/// oriented from the later chain position to the earlier one.
ClusterSeed auxiliary_quiver(const RootDatum& rd, const Word& word);

/// Quiver of a reduced word: one strand of f-vertices per letter level, an
/// extra e-vertex wherever the induced root chain passes a simple root, and
/// the leftmost/rightmost vertex of each touched level frozen together with
/// the extras.
ClusterSeed basic_quiver(const RootDatum& rd, const Word& word);

/// Mirrored copy of a word quiver: labels f_i^j -> f_i^{-j}, extras kept,
/// pairing negated.  `to_op` maps each original vertex to its copy.
struct Mirrored {
    ClusterSeed seed;
    std::map<VertexId, VertexId> to_op;
};
Mirrored mirror_quiver(const ClusterSeed& q);

/// Symplectic double: glue the mirror onto the original along the f^0 row
/// and the extras.  Original vertex ids survive on the unmirrored half, so
/// torus elements over `q` embed coordinate-wise.  `mirror` maps every
/// vertex of `q` to its partner in the double (shared vertices to
/// themselves); `shared` lists the glued vertices.
struct DoubleSeed {
    ClusterSeed seed;
    std::map<VertexId, VertexId> mirror;
    std::set<VertexId> shared;
};
DoubleSeed double_quiver(const ClusterSeed& q);
inline DoubleSeed double_quiver(const RootDatum& rd, const Word& word) {
    return double_quiver(basic_quiver(rd, word));
}

/// Block-diagonal union of the mirror of `q` and `q` itself, with both
/// halves keeping their own copy of the would-be shared vertices.  The
/// double embeds here by splitting each shared coordinate onto both copies.
struct TensorSeed {
    ClusterSeed seed;
    /// Original vertex -> its op-side copy (defined for every vertex of q).
    std::map<VertexId, VertexId> op;
};
TensorSeed tensor_quiver(const ClusterSeed& q);

/// General amalgamation: disjoint union of `a` and `b` with the listed
/// vertex pairs (a-vertex, b-vertex) identified and their pairings summed.
/// Glued vertices must be frozen on both sides with equal multipliers and
/// become unfrozen in the result.  All vertices get fresh ids; `left` and
/// `right` give the id maps.
struct Amalgamation {
    ClusterSeed seed;
    std::map<VertexId, VertexId> left;
    std::map<VertexId, VertexId> right;
};
Amalgamation amalgamate(const ClusterSeed& a, const ClusterSeed& b,
                        const std::vector<std::pair<VertexId, VertexId>>& glue);

/// Affine wheel quiver on 3(n+1) vertices: the double of the type A_{n+1}
/// word (n+1, n, ..., 1) with levels shifted down by one, the lone extra
/// merged into f_n^0, and the two boundary columns closed up into cycles.
ClusterSeed affine_quiver(int n);

/// Followable record of how a braid move acts on a seed: the mutated
/// vertices in order, plus the label moves applied afterwards.
struct SeedMove {
    ClusterSeed seed;
    std::vector<VertexId> mutated;
};

/// Apply the seed-level transport of a braid move of `word` at `mv` and
/// return the new seed; `word` is updated to the flipped word.  The new
/// seed's labels again match basic_quiver of the new word; vertex ids are
/// preserved so torus elements transport by mutation alone.
SeedMove apply_braid_move(const RootDatum& rd, const ClusterSeed& seed, Word& word,
                          const CoxMove& mv);

} // namespace posrep
