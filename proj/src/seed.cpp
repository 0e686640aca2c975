#include "posrep/seed.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace posrep {

VertexId ClusterSeed::add_vertex(const VertexLabel& lab, const Rational& mult, bool frozen) {
    VertexId v = next_id_++;
    verts_.push_back(v);
    label_[v] = lab;
    mult_[v] = mult;
    if (frozen) frozen_.insert(v);
    w_[v];
    return v;
}

void ClusterSeed::remove_vertex(VertexId v) {
    if (!has_vertex(v)) throw std::invalid_argument("ClusterSeed: no such vertex");
    for (auto& [u, row] : w_) row.erase(v);
    w_.erase(v);
    label_.erase(v);
    mult_.erase(v);
    frozen_.erase(v);
    verts_.erase(std::find(verts_.begin(), verts_.end(), v));
}

void ClusterSeed::merge_vertices(VertexId keep, VertexId absorb) {
    if (keep == absorb) throw std::invalid_argument("ClusterSeed: merging vertex with itself");
    auto row = w_.at(absorb);
    for (auto& [u, val] : row)
        if (u != keep) add_pairing(keep, u, val);
    remove_vertex(absorb);
}

void ClusterSeed::add_pairing(VertexId u, VertexId v, const Rational& delta) {
    if (u == v) throw std::invalid_argument("ClusterSeed: self pairing");
    if (!has_vertex(u) || !has_vertex(v))
        throw std::invalid_argument("ClusterSeed: pairing on unknown vertex");
    if (delta.is_zero()) return;
    auto bump = [this](VertexId a, VertexId b, const Rational& d) {
        auto& row = w_[a];
        auto it = row.find(b);
        if (it == row.end()) {
            row[b] = d;
        } else {
            it->second += d;
            if (it->second.is_zero()) row.erase(it);
        }
    };
    bump(u, v, delta);
    bump(v, u, -delta);
}

void ClusterSeed::set_label(VertexId v, const VertexLabel& lab) {
    label_.at(v) = lab;
}

void ClusterSeed::set_frozen(VertexId v, bool frozen) {
    if (!has_vertex(v)) throw std::invalid_argument("ClusterSeed: no such vertex");
    if (frozen) frozen_.insert(v);
    else frozen_.erase(v);
}

Rational ClusterSeed::w(VertexId u, VertexId v) const {
    const auto& row = w_.at(u);
    auto it = row.find(v);
    return it == row.end() ? Rational(0) : it->second;
}

Rational ClusterSeed::c(VertexId u, VertexId v) const {
    if (mult_.at(u) == mult_.at(v)) return b(u, v);
    return w(u, v);
}

std::optional<VertexId> ClusterSeed::find(char kind, int level, int index) const {
    for (auto& [v, lab] : label_)
        if (lab.kind == kind && lab.level == level && lab.index == index) return v;
    return std::nullopt;
}

VertexId ClusterSeed::require(char kind, int level, int index) const {
    auto v = find(kind, level, index);
    if (!v)
        throw std::invalid_argument("ClusterSeed: missing vertex " +
                                    VertexLabel{kind, level, index}.str());
    return *v;
}

bool ClusterSeed::same_labeled(const ClusterSeed& o, bool check_frozen) const {
    if (size() != o.size()) return false;
    std::map<VertexLabel, VertexId> mine, theirs;
    for (auto& [v, lab] : label_)
        if (!mine.emplace(lab, v).second) return false;
    for (auto& [v, lab] : o.label_)
        if (!theirs.emplace(lab, v).second) return false;
    for (auto& [lab, v] : mine) {
        auto it = theirs.find(lab);
        if (it == theirs.end()) return false;
        VertexId u = it->second;
        if (!(mult_.at(v) == o.mult_.at(u))) return false;
        if (check_frozen && is_frozen(v) != o.is_frozen(u)) return false;
    }
    for (auto& [lab1, v1] : mine)
        for (auto& [lab2, v2] : mine) {
            if (!(lab1 < lab2)) continue;
            if (!(w(v1, v2) == o.w(theirs.at(lab1), theirs.at(lab2)))) return false;
        }
    return true;
}

void ClusterSeed::mutate(VertexId k) {
    if (!has_vertex(k)) throw std::invalid_argument("ClusterSeed: no such vertex");
    if (is_frozen(k)) throw std::invalid_argument("ClusterSeed: cannot mutate frozen vertex");
    // b'_ij = b_ij + (b_ik|b_kj| + |b_ik|b_kj)/2 for i,j != k; row/col k flip sign.
    auto krow = w_.at(k);
    std::vector<std::pair<VertexId, Rational>> into, outof; // b_ik resp. b_kj
    for (auto& [u, wku] : krow) {
        Rational bik = -wku / mult_.at(u); // w(u,k)/d_u
        Rational bku = wku / mult_.at(k);
        if (!bik.is_zero()) into.emplace_back(u, bik);
        if (!bku.is_zero()) outof.emplace_back(u, bku);
    }
    auto rabs = [](const Rational& r) { return r < Rational(0) ? -r : r; };
    for (auto& [i, bik] : into)
        for (auto& [j, bkj] : outof) {
            if (i >= j) continue; // each unordered pair once; skew handled by add_pairing
            Rational delta = (bik * rabs(bkj) + rabs(bik) * bkj) / Rational(2);
            if (!delta.is_zero()) add_pairing(i, j, mult_.at(i) * delta);
        }
    for (auto& [u, wku] : krow) {
        add_pairing(k, u, -wku - wku); // flip sign of w(k,u)
    }
}

ClusterSeed::Center ClusterSeed::rank_and_center() const {
    int n = size();
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = w(verts_[i], verts_[j]);

    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < n && r < n; ++col) {
        int sel = -1;
        for (int row = r; row < n; ++row)
            if (!M[row][col].is_zero()) { sel = row; break; }
        if (sel < 0) continue;
        std::swap(M[sel], M[r]);
        Rational inv = Rational(1) / M[r][col];
        for (int j = 0; j < n; ++j) M[r][j] *= inv;
        for (int row = 0; row < n; ++row) {
            if (row == r || M[row][col].is_zero()) continue;
            Rational f = M[row][col];
            for (int j = 0; j < n; ++j) M[row][j] -= f * M[r][j];
        }
        pivot_col.push_back(col);
        ++r;
    }

    Center out;
    out.rank = r;
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> vec(n);
        vec[free] = Rational(1);
        for (int p = 0; p < r; ++p) vec[pivot_col[p]] = -M[p][free];
        long long l = 1;
        for (auto& x : vec) l = std::lcm(l, x.den());
        long long g = 0;
        for (auto& x : vec) g = std::gcd(g, (x * Rational(l)).num());
        if (g == 0) g = 1;
        std::map<VertexId, long long> kv;
        long long lead = 0;
        for (int i = 0; i < n; ++i) {
            long long xi = (vec[i] * Rational(l)).num() / g;
            if (xi != 0) {
                if (lead == 0) lead = xi;
                kv[verts_[i]] = xi;
            }
        }
        if (lead < 0)
            for (auto& [vv, x] : kv) x = -x;
        out.kernel.push_back(std::move(kv));
    }
    return out;
}

nlohmann::json ClusterSeed::to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (VertexId v : verts_) {
        const auto& lab = label_.at(v);
        j["vertices"].push_back({{"id", v},
                                 {"label",
                                  {{"kind", std::string(1, lab.kind)},
                                   {"level", lab.level},
                                   {"index", lab.index}}},
                                 {"frozen", is_frozen(v)},
                                 {"multiplier",
                                  {{"num", mult_.at(v).num()}, {"den", mult_.at(v).den()}}}});
    }
    j["exchange"] = nlohmann::json::array();
    for (VertexId u : verts_)
        for (auto& [v, wuv] : w_.at(u)) {
            if (u >= v) continue;
            Rational buv = wuv / mult_.at(u);
            j["exchange"].push_back(
                {{"from", u}, {"to", v}, {"value", {{"num", buv.num()}, {"den", buv.den()}}}});
        }
    return j;
}

ClusterSeed ClusterSeed::from_json(const nlohmann::json& j) {
    ClusterSeed s;
    for (auto& jv : j.at("vertices")) {
        VertexId id = jv.at("id").get<int>();
        VertexLabel lab{jv.at("label").at("kind").get<std::string>().at(0),
                        jv.at("label").at("level").get<int>(),
                        jv.at("label").at("index").get<int>()};
        Rational mult(jv.at("multiplier").at("num").get<long long>(),
                      jv.at("multiplier").at("den").get<long long>());
        if (s.label_.count(id)) throw std::invalid_argument("seed json: duplicate vertex id");
        s.verts_.push_back(id);
        s.label_[id] = lab;
        s.mult_[id] = mult;
        if (jv.at("frozen").get<bool>()) s.frozen_.insert(id);
        s.w_[id];
        s.next_id_ = std::max(s.next_id_, id + 1);
    }
    for (auto& je : j.at("exchange")) {
        VertexId u = je.at("from").get<int>(), v = je.at("to").get<int>();
        Rational b(je.at("value").at("num").get<long long>(),
                   je.at("value").at("den").get<long long>());
        s.add_pairing(u, v, s.mult_.at(u) * b);
    }
    return s;
}

std::string ClusterSeed::to_dot() const {
    std::ostringstream os;
    os << "digraph seed {\n";
    for (VertexId v : verts_) {
        os << "  v" << v << " [label=\"" << label_.at(v).str();
        if (!(mult_.at(v) == Rational(1))) os << " d=" << mult_.at(v).str();
        os << "\", shape=" << (is_frozen(v) ? "box" : "ellipse") << "];\n";
    }
    for (VertexId u : verts_)
        for (auto& [v, wuv] : w_.at(u)) {
            if (u >= v) continue;
            Rational cuv = c(u, v);
            VertexId from = u, to = v;
            if (cuv < Rational(0)) { std::swap(from, to); cuv = -cuv; }
            std::vector<std::string> attrs;
            if (cuv == Rational(1, 2)) attrs.push_back("style=dashed");
            else if (!(cuv == Rational(1))) attrs.push_back("label=\"" + cuv.str() + "\"");
            if (mult_.at(u) < Rational(1) && mult_.at(v) < Rational(1))
                attrs.push_back("penwidth=0.6");
            os << "  v" << from << " -> v" << to;
            if (!attrs.empty()) {
                os << " [";
                for (size_t i = 0; i < attrs.size(); ++i)
                    os << (i ? "," : "") << attrs[i];
                os << "]";
            }
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

ClusterSeed elementary_quiver(const RootDatum& rd, int i, std::optional<int> extra_k) {
    ClusterSeed s;
    Rational di = rd.d(i);
    VertexId il = s.add_vertex({'f', i, 0}, di, true);
    VertexId ir = s.add_vertex({'f', i, 1}, di, true);
    s.add_pairing(il, ir, di); // c(i_l, i_r) = 1
    for (int j : rd.labels()) {
        if (j == i) continue;
        Rational dj = rd.d(j);
        VertexId vj = s.add_vertex({'f', j, 0}, dj, true);
        // c(i_l, j) = c(j, i_r) = d_i a_ij / 2
        Rational cval = di * Rational(rd.a(i, j)) / Rational(2);
        if (cval.is_zero()) continue;
        Rational wval = (di == dj) ? di * cval : cval;
        s.add_pairing(il, vj, wval);
        s.add_pairing(vj, ir, wval);
    }
    if (extra_k) {
        int k = *extra_k;
        if (!(rd.d(k) == di))
            throw std::invalid_argument("elementary_quiver: extra vertex multiplier mismatch");
        VertexId ke = s.add_vertex({'e', k, 0}, di, true);
        s.add_pairing(ir, ke, di);
        s.add_pairing(ke, il, di);
    }
    return s;
}

ClusterSeed auxiliary_quiver(const RootDatum& rd, const Word& word) {
    if (!rd.is_reduced(word)) throw std::invalid_argument("auxiliary_quiver: word not reduced");
    auto chain = rd.positive_root_chain(word);
    ClusterSeed s;
    std::vector<std::pair<int, VertexId>> simples; // (chain position, vertex)
    for (size_t j = 0; j < chain.size(); ++j) {
        if (!chain[j].simple) continue;
        int lbl = chain[j].simple_index;
        simples.emplace_back((int)j, s.add_vertex({'e', lbl, 0}, rd.d(lbl), true));
    }
    for (auto& [r, vb] : simples)
        for (auto& [ss, va] : simples) {
            if (ss <= r) continue; // ordered pairs: position s after position r
            int a = s.label(va).level, b = s.label(vb).level;
            if (rd.a(a, b) == 0) continue;
            // c(a_e, b_e) = d_a a_ab / 2, oriented later -> earlier
            Rational cval = rd.d(a) * Rational(rd.a(a, b)) / Rational(2);
            Rational wval = (rd.d(a) == rd.d(b)) ? rd.d(a) * cval : cval;
            s.add_pairing(va, vb, wval);
        }
    return s;
}

ClusterSeed basic_quiver(const RootDatum& rd, const Word& word) {
    if (!rd.is_reduced(word)) throw std::invalid_argument("basic_quiver: word not reduced");
    auto chain = rd.positive_root_chain(word);
    ClusterSeed s;
    std::map<int, int> count; // letter -> occurrences so far
    std::map<std::pair<int, int>, VertexId> fvert; // (level, index) -> id
    auto get_f = [&](int level, int index) {
        auto key = std::make_pair(level, index);
        auto it = fvert.find(key);
        if (it != fvert.end()) return it->second;
        VertexId v = s.add_vertex({'f', level, index}, rd.d(level), false);
        fvert[key] = v;
        return v;
    };
    std::vector<std::pair<int, VertexId>> extras; // (chain position, id)
    for (size_t j = 0; j < word.size(); ++j) {
        int i = word[j];
        Rational di = rd.d(i);
        int ki = count[i];
        VertexId left = get_f(i, ki), right = get_f(i, ki + 1);
        s.add_pairing(left, right, di);
        for (int l : rd.labels()) {
            if (l == i || rd.a(i, l) == 0) continue;
            Rational cval = di * Rational(rd.a(i, l)) / Rational(2);
            Rational wval = (di == rd.d(l)) ? di * cval : cval;
            VertexId vl = get_f(l, count[l]);
            s.add_pairing(left, vl, wval);
            s.add_pairing(vl, right, wval);
        }
        if (chain[j].simple) {
            int m = chain[j].simple_index;
            if (!(rd.d(m) == di))
                throw std::logic_error("basic_quiver: extra multiplier mismatch");
            VertexId e = s.add_vertex({'e', m, 0}, di, false);
            s.add_pairing(right, e, di);
            s.add_pairing(e, left, di);
            extras.emplace_back((int)j, e);
        }
        count[i] = ki + 1;
    }
    // auxiliary arrows between extras, oriented later chain position -> earlier
    for (auto& [r, vb] : extras)
        for (auto& [ss, va] : extras) {
            if (ss <= r) continue;
            int a = s.label(va).level, b = s.label(vb).level;
            if (rd.a(a, b) == 0) continue;
            Rational cval = rd.d(a) * Rational(rd.a(a, b)) / Rational(2);
            Rational wval = (rd.d(a) == rd.d(b)) ? rd.d(a) * cval : cval;
            s.add_pairing(va, vb, wval);
        }
    // drop isolated vertices, then freeze boundary columns and extras
    std::vector<VertexId> isolated;
    for (VertexId v : s.vertices())
        if (s.row(v).empty()) isolated.push_back(v);
    for (VertexId v : isolated) s.remove_vertex(v);
    std::map<int, std::pair<int, int>> span; // level -> (min, max) index
    for (VertexId v : s.vertices()) {
        const auto& lab = s.label(v);
        if (lab.kind == 'e') {
            s.set_frozen(v, true);
            continue;
        }
        auto it = span.find(lab.level);
        if (it == span.end()) span[lab.level] = {lab.index, lab.index};
        else {
            it->second.first = std::min(it->second.first, lab.index);
            it->second.second = std::max(it->second.second, lab.index);
        }
    }
    for (auto& [level, mm] : span) {
        s.set_frozen(s.require('f', level, mm.first), true);
        s.set_frozen(s.require('f', level, mm.second), true);
    }
    return s;
}

Mirrored mirror_quiver(const ClusterSeed& q) {
    Mirrored out;
    for (VertexId v : q.vertices()) {
        VertexLabel lab = q.label(v);
        if (lab.kind == 'f') lab.index = -lab.index;
        out.to_op[v] = out.seed.add_vertex(lab, q.multiplier(v), q.is_frozen(v));
    }
    for (VertexId u : q.vertices())
        for (auto& [v, wuv] : q.row(u)) {
            if (u >= v) continue;
            out.seed.add_pairing(out.to_op.at(u), out.to_op.at(v), -wuv);
        }
    return out;
}

DoubleSeed double_quiver(const ClusterSeed& q) {
    DoubleSeed out;
    out.seed = q;
    for (VertexId v : q.vertices()) {
        const auto& lab = q.label(v);
        if (lab.kind == 'e' || lab.index == 0) {
            out.mirror[v] = v;
            out.shared.insert(v);
        } else {
            out.mirror[v] = out.seed.add_vertex({'f', lab.level, -lab.index},
                                                q.multiplier(v), false);
        }
    }
    for (VertexId u : q.vertices())
        for (auto& [v, wuv] : q.row(u)) {
            if (u >= v) continue;
            out.seed.add_pairing(out.mirror.at(u), out.mirror.at(v), -wuv);
        }
    // frozen: outermost f-vertices of each level on both sides, extras thaw
    std::map<int, int> top; // level -> max index in q
    for (VertexId v : q.vertices()) {
        const auto& lab = q.label(v);
        if (lab.kind != 'f') continue;
        auto it = top.find(lab.level);
        if (it == top.end() || it->second < lab.index) top[lab.level] = lab.index;
    }
    for (VertexId v : out.seed.vertices()) out.seed.set_frozen(v, false);
    for (auto& [level, mx] : top) {
        out.seed.set_frozen(out.seed.require('f', level, mx), true);
        out.seed.set_frozen(out.seed.require('f', level, -mx), true);
    }
    return out;
}

TensorSeed tensor_quiver(const ClusterSeed& q) {
    TensorSeed out;
    out.seed = q;
    for (VertexId v : q.vertices()) {
        VertexLabel lab = q.label(v);
        if (lab.kind == 'f') lab.index = -lab.index;
        out.op[v] = out.seed.add_vertex(lab, q.multiplier(v), q.is_frozen(v));
    }
    for (VertexId u : q.vertices())
        for (auto& [v, wuv] : q.row(u)) {
            if (u >= v) continue;
            out.seed.add_pairing(out.op.at(u), out.op.at(v), -wuv);
        }
    return out;
}

Amalgamation amalgamate(const ClusterSeed& a, const ClusterSeed& b,
                        const std::vector<std::pair<VertexId, VertexId>>& glue) {
    std::map<VertexId, VertexId> b_to_a;
    std::set<VertexId> a_glued;
    for (auto& [va, vb] : glue) {
        if (!a.is_frozen(va) || !b.is_frozen(vb))
            throw std::invalid_argument("amalgamate: glued vertices must be frozen");
        if (!(a.multiplier(va) == b.multiplier(vb)))
            throw std::invalid_argument("amalgamate: multiplier mismatch on glued pair");
        if (!b_to_a.emplace(vb, va).second || !a_glued.insert(va).second)
            throw std::invalid_argument("amalgamate: gluing map not injective");
    }
    Amalgamation out;
    for (VertexId v : a.vertices())
        out.left[v] = out.seed.add_vertex(a.label(v), a.multiplier(v), a.is_frozen(v));
    for (VertexId v : b.vertices()) {
        auto it = b_to_a.find(v);
        if (it != b_to_a.end()) out.right[v] = out.left.at(it->second);
        else out.right[v] = out.seed.add_vertex(b.label(v), b.multiplier(v), b.is_frozen(v));
    }
    for (VertexId u : a.vertices())
        for (auto& [v, wuv] : a.row(u)) {
            if (u >= v) continue;
            out.seed.add_pairing(out.left.at(u), out.left.at(v), wuv);
        }
    for (VertexId u : b.vertices())
        for (auto& [v, wuv] : b.row(u)) {
            if (u >= v) continue;
            out.seed.add_pairing(out.right.at(u), out.right.at(v), wuv);
        }
    for (auto& [va, vb] : glue) out.seed.set_frozen(out.left.at(va), false);
    return out;
}

ClusterSeed affine_quiver(int n) {
    if (n < 1) throw std::invalid_argument("affine_quiver: n must be >= 1");
    RootDatum rd = RootDatum::create('A', n + 1);
    Word word;
    for (int i = n + 1; i >= 1; --i) word.push_back(i);
    ClusterSeed s = double_quiver(basic_quiver(rd, word)).seed;
    for (VertexId v : s.vertices()) {
        VertexLabel lab = s.label(v);
        lab.level -= 1;
        s.set_label(v, lab);
    }
    VertexId hub = s.require('f', n, 0);
    s.merge_vertices(hub, s.require('e', 0, 0));
    s.add_pairing(s.require('f', 0, -1), s.require('f', n, -1), Rational(1, 2));
    s.add_pairing(s.require('f', n, 1), s.require('f', 0, 1), Rational(1, 2));
    return s;
}

SeedMove apply_braid_move(const RootDatum& rd, const ClusterSeed& seed, Word& word,
                          const CoxMove& mv) {
    int a = word.at(mv.pos);
    int b = word.at(mv.pos + 1);
    if (rd.m_exp(a, b) != mv.m) throw std::invalid_argument("apply_braid_move: wrong order");
    SeedMove out;
    out.seed = seed;
    int ca = 0, cb = 0;
    for (int p = 0; p < mv.pos; ++p) {
        if (word[p] == a) ++ca;
        if (word[p] == b) ++cb;
    }
    int na = ca, nb = cb;
    for (int p = mv.pos; p < (int)word.size(); ++p) {
        if (word[p] == a) ++na;
        if (word[p] == b) ++nb;
    }
    if (mv.m == 3) {
        VertexId M = seed.require('f', a, ca + 1);
        out.seed.mutate(M);
        out.mutated.push_back(M);
        std::vector<std::pair<VertexId, VertexLabel>> relabel;
        relabel.emplace_back(M, VertexLabel{'f', b, cb + 1});
        for (int t = ca + 2; t <= na; ++t)
            relabel.emplace_back(seed.require('f', a, t), VertexLabel{'f', a, t - 1});
        for (int t = cb + 1; t <= nb; ++t)
            relabel.emplace_back(seed.require('f', b, t), VertexLabel{'f', b, t + 1});
        for (auto& [v, lab] : relabel) out.seed.set_label(v, lab);
    } else if (mv.m == 4) {
        // the length-4 flip is three alternating mutations at the two
        // internal strand vertices; no occurrence index changes
        VertexId Ma = seed.require('f', a, ca + 1);
        VertexId Mb = seed.require('f', b, cb + 1);
        out.seed.mutate(Ma);
        out.seed.mutate(Mb);
        out.seed.mutate(Ma);
        out.mutated = {Ma, Mb, Ma};
    } else if (mv.m != 2) {
        throw std::invalid_argument("apply_braid_move: unsupported move order");
    }
    word = rd.apply_move(word, mv);
    return out;
}

} // namespace posrep
