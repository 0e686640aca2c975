#include "posrep/root_datum.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace posrep {

namespace {

std::vector<std::vector<Rational>> mat_mul(const std::vector<std::vector<Rational>>& A,
                                           const std::vector<std::vector<Rational>>& B) {
    size_t n = A.size();
    std::vector<std::vector<Rational>> C(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

std::vector<Rational> mat_apply(const std::vector<std::vector<Rational>>& A,
                                const std::vector<Rational>& v) {
    size_t n = A.size();
    std::vector<Rational> r(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!A[i][j].is_zero() && !v[j].is_zero()) r[i] += A[i][j] * v[j];
        }
    return r;
}

int root_sign(const std::vector<Rational>& v) {
    for (const auto& x : v) {
        if (x > Rational(0)) return 1;
        if (x < Rational(0)) return -1;
    }
    return 0;
}

} // namespace

RootDatum RootDatum::create(const std::string& type) {
    if (type.size() < 2) throw std::invalid_argument("root datum: bad type string " + type);
    char fam = type[0];
    int rank = std::stoi(type.substr(1));
    return create(fam, rank);
}

void RootDatum::add_edge(int i, int j, long long aij, long long aji) {
    cartan_[idx_[i]][idx_[j]] = aij;
    cartan_[idx_[j]][idx_[i]] = aji;
}

RootDatum RootDatum::create(char family, int rank) {
    RootDatum rd;
    rd.family_ = family;
    rd.rank_ = rank;
    switch (family) {
        case 'A':
            if (rank < 1) throw std::invalid_argument("A_n needs n >= 1");
            break;
        case 'B':
        case 'C':
            if (rank < 2) throw std::invalid_argument("B_n/C_n need n >= 2");
            break;
        case 'D':
            if (rank < 4) throw std::invalid_argument("D_n needs n >= 4");
            break;
        case 'E':
            if (rank < 6 || rank > 8) throw std::invalid_argument("E_n needs n in {6,7,8}");
            break;
        case 'F':
            if (rank != 4) throw std::invalid_argument("F_n needs n = 4");
            break;
        case 'G':
            if (rank != 2) throw std::invalid_argument("G_n needs n = 2");
            break;
        default:
            throw std::invalid_argument(std::string("unknown family ") + family);
    }

    if (family == 'E') {
        rd.labels_.push_back(0);
        for (int i = 1; i < rank; ++i) rd.labels_.push_back(i);
    } else {
        for (int i = 1; i <= rank; ++i) rd.labels_.push_back(i);
    }
    std::sort(rd.labels_.begin(), rd.labels_.end());
    for (size_t k = 0; k < rd.labels_.size(); ++k) rd.idx_[rd.labels_[k]] = (int)k;

    rd.cartan_.assign(rank, std::vector<long long>(rank, 0));
    for (int k = 0; k < rank; ++k) rd.cartan_[k][k] = 2;
    rd.d_.assign(rank, Rational(1));

    switch (family) {
        case 'A':
            for (int i = 1; i < rank; ++i) rd.add_edge(i, i + 1, -1, -1);
            break;
        case 'B':
            rd.add_edge(1, 2, -2, -1);
            for (int i = 2; i < rank; ++i) rd.add_edge(i, i + 1, -1, -1);
            rd.d_[rd.idx_[1]] = Rational(1, 2);
            break;
        case 'C':
            rd.add_edge(1, 2, -1, -2);
            for (int i = 2; i < rank; ++i) rd.add_edge(i, i + 1, -1, -1);
            for (int i = 2; i <= rank; ++i) rd.d_[rd.idx_[i]] = Rational(1, 2);
            break;
        case 'D':
            for (int i = 1; i + 1 < rank; ++i) rd.add_edge(i, i + 1, -1, -1);
            rd.add_edge(rank - 2, rank, -1, -1);
            break;
        case 'E':
            for (int i = 1; i + 1 < rank; ++i) rd.add_edge(i, i + 1, -1, -1);
            rd.add_edge(0, 3, -1, -1);
            break;
        case 'F':
            rd.add_edge(1, 2, -1, -1);
            rd.add_edge(2, 3, -1, -2);
            rd.add_edge(3, 4, -1, -1);
            rd.d_[rd.idx_[3]] = Rational(1, 2);
            rd.d_[rd.idx_[4]] = Rational(1, 2);
            break;
        case 'G':
            rd.add_edge(1, 2, -3, -1);
            rd.d_[rd.idx_[1]] = Rational(1, 3);
            break;
    }

    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (rd.d_[i] * Rational(rd.cartan_[i][j]) != rd.d_[j] * Rational(rd.cartan_[j][i]))
                throw std::logic_error("root datum: Cartan matrix not symmetrizable");
    return rd;
}

long long RootDatum::a(int i, int j) const {
    return cartan_[idx_.at(i)][idx_.at(j)];
}

Rational RootDatum::d(int i) const { return d_[idx_.at(i)]; }

int RootDatum::m_exp(int i, int j) const {
    long long p = a(i, j) * a(j, i);
    switch (p) {
        case 0: return 2;
        case 1: return 3;
        case 2: return 4;
        case 3: return 6;
    }
    throw std::logic_error("m_exp: off-diagonal product out of range");
}

std::vector<Rational> RootDatum::reflect(int i, std::vector<Rational> v) const {
    Rational pairing;
    int ii = idx_.at(i);
    for (int j = 0; j < rank_; ++j)
        if (!v[j].is_zero()) pairing += Rational(cartan_[ii][j]) * v[j];
    v[ii] -= pairing;
    return v;
}

std::vector<Rational> RootDatum::act(const Word& word, std::vector<Rational> v) const {
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = reflect(*it, std::move(v));
    return v;
}

std::vector<Rational> RootDatum::simple_root(int i) const {
    std::vector<Rational> v(rank_);
    v[idx_.at(i)] = Rational(1);
    return v;
}

const std::vector<std::vector<Rational>>& RootDatum::positive_roots() const {
    if (!pos_roots_.empty()) return pos_roots_;
    std::set<std::vector<std::pair<long long, long long>>> seen;
    auto key = [&](const std::vector<Rational>& v) {
        std::vector<std::pair<long long, long long>> k;
        for (const auto& x : v) k.emplace_back(x.num(), x.den());
        return k;
    };
    std::vector<std::vector<Rational>> queue;
    for (int i : labels_) queue.push_back(simple_root(i));
    for (const auto& r : queue) seen.insert(key(r));
    std::vector<std::vector<Rational>> all = queue;
    while (!queue.empty()) {
        auto r = queue.back();
        queue.pop_back();
        for (int i : labels_) {
            auto r2 = reflect(i, r);
            if (seen.insert(key(r2)).second) {
                all.push_back(r2);
                queue.push_back(r2);
            }
        }
    }
    for (const auto& r : all)
        if (root_sign(r) > 0) pos_roots_.push_back(r);
    std::sort(pos_roots_.begin(), pos_roots_.end(),
              [](const auto& x, const auto& y) {
                  for (size_t k = 0; k < x.size(); ++k) {
                      if (x[k] != y[k]) return x[k] < y[k];
                  }
                  return false;
              });
    return pos_roots_;
}

std::vector<std::vector<Rational>> RootDatum::identity_mat(int n) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) m[i][i] = Rational(1);
    return m;
}

std::vector<std::vector<Rational>> RootDatum::word_matrix(const Word& word) const {
    auto m = identity_mat(rank_);
    // column j of reflection matrix S_i is e_j - a_ij e_i
    for (int w : word) {
        // m = m * S_w  (append on the right)
        int iw = idx_.at(w);
        std::vector<std::vector<Rational>> s = identity_mat(rank_);
        for (int j = 0; j < rank_; ++j) s[iw][j] -= Rational(cartan_[iw][j]);
        m = mat_mul(m, s);
    }
    return m;
}

long long RootDatum::length(const Word& word) const {
    auto m = word_matrix(word);
    long long cnt = 0;
    for (const auto& beta : positive_roots())
        if (root_sign(mat_apply(m, beta)) < 0) ++cnt;
    return cnt;
}

bool RootDatum::is_reduced(const Word& word) const {
    return length(word) == (long long)word.size();
}

bool RootDatum::lengthens_right(const std::vector<std::vector<Rational>>& wmat, int i) const {
    // l(w s_i) > l(w) iff w(alpha_i) > 0; w(alpha_i) is column i of the matrix
    int ii = idx_.at(i);
    for (int r = 0; r < rank_; ++r) {
        if (wmat[r][ii] > Rational(0)) return true;
        if (wmat[r][ii] < Rational(0)) return false;
    }
    return false;
}

Word RootDatum::longest_word() const { return extend_to_longest({}); }

Word RootDatum::extend_to_longest(const Word& prefix) const {
    if (!is_reduced(prefix)) throw std::invalid_argument("extend_to_longest: prefix not reduced");
    Word w = prefix;
    auto m = word_matrix(prefix);
    long long target = longest_length();
    while ((long long)w.size() < target) {
        bool found = false;
        for (int i : labels_) {
            if (lengthens_right(m, i)) {
                w.push_back(i);
                int ii = idx_.at(i);
                auto s = identity_mat(rank_);
                for (int j = 0; j < rank_; ++j) s[ii][j] -= Rational(cartan_[ii][j]);
                m = mat_mul(m, s);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("extend_to_longest: stuck before reaching w0");
    }
    return w;
}

Word RootDatum::longest_word_in(const std::set<int>& J) const {
    for (int j : J)
        if (!idx_.count(j)) throw std::invalid_argument("longest_word_in: bad label in J");
    Word w;
    auto m = identity_mat(rank_);
    while (true) {
        bool found = false;
        for (int i : labels_) {
            if (!J.count(i)) continue;
            if (lengthens_right(m, i)) {
                w.push_back(i);
                int ii = idx_.at(i);
                auto s = identity_mat(rank_);
                for (int j = 0; j < rank_; ++j) s[ii][j] -= Rational(cartan_[ii][j]);
                m = mat_mul(m, s);
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    return w;
}

int RootDatum::dynkin_involution(int i) const {
    auto m = word_matrix(longest_word());
    auto v = mat_apply(m, simple_root(i));
    for (int j : labels_) {
        auto neg = simple_root(j);
        for (auto& x : neg) x = -x;
        if (v == neg) return j;
    }
    throw std::logic_error("dynkin_involution: w0(alpha_i) is not minus a simple root");
}

int RootDatum::double_dynkin_involution(int i, const std::set<int>& J) const {
    int istar = dynkin_involution(i);
    if (!J.count(istar)) return istar;
    auto wJ = longest_word_in(J);
    auto v = mat_apply(word_matrix(wJ), simple_root(istar));
    for (int j : labels_) {
        auto neg = simple_root(j);
        for (auto& x : neg) x = -x;
        if (v == neg) return j;
    }
    throw std::logic_error("double_dynkin_involution: w_J(alpha_{i*}) is not minus a simple root");
}

RootDatum::ParabolicFactorization RootDatum::parabolic_factorize(const std::set<int>& J) const {
    ParabolicFactorization pf;
    pf.J = J;
    pf.word_J = longest_word_in(J);
    Word full = extend_to_longest(pf.word_J);
    pf.word_bar.assign(full.begin() + (long)pf.word_J.size(), full.end());
    return pf;
}

std::vector<RootDatum::RootChainEntry> RootDatum::positive_root_chain(const Word& word) const {
    size_t m = word.size();
    std::vector<RootChainEntry> out(m);
    auto P = identity_mat(rank_);
    for (size_t jj = m; jj-- > 0;) {
        RootChainEntry e;
        e.root = mat_apply(P, simple_root(word[jj]));
        for (int lbl : labels_) {
            if (e.root == simple_root(lbl)) {
                e.simple = true;
                e.simple_index = lbl;
                break;
            }
        }
        out[jj] = std::move(e);
        int ii = idx_.at(word[jj]);
        auto s = identity_mat(rank_);
        for (int j2 = 0; j2 < rank_; ++j2) s[ii][j2] -= Rational(cartan_[ii][j2]);
        P = mat_mul(P, s);
    }
    return out;
}

Word RootDatum::apply_move(const Word& word, const CoxMove& mv) const {
    if (mv.pos < 0 || mv.pos + mv.m > (int)word.size())
        throw std::invalid_argument("apply_move: move out of range");
    int a0 = word[mv.pos];
    if (mv.pos + 1 >= (int)word.size() && mv.m >= 2)
        throw std::invalid_argument("apply_move: move out of range");
    int b0 = word[mv.pos + 1];
    if (a0 == b0 || m_exp(a0, b0) != mv.m)
        throw std::invalid_argument("apply_move: pattern has wrong Coxeter exponent");
    for (int t = 0; t < mv.m; ++t) {
        int want = (t % 2 == 0) ? a0 : b0;
        if (word[mv.pos + t] != want)
            throw std::invalid_argument("apply_move: word does not alternate at the move site");
    }
    Word out = word;
    for (int t = 0; t < mv.m; ++t) out[mv.pos + t] = (t % 2 == 0) ? b0 : a0;
    return out;
}

std::vector<CoxMove> RootDatum::make_first(Word& word, int c) const {
    if (word.empty()) throw std::invalid_argument("make_first: empty word");
    std::vector<CoxMove> moves;
    if (word[0] == c) return moves;
    {
        // c must be a left descent: l(s_c w) < l(w)
        Word test;
        test.push_back(c);
        test.insert(test.end(), word.begin(), word.end());
        if (length(test) != (long long)word.size() - 1)
            throw std::invalid_argument("make_first: target letter is not a left descent");
    }
    int dlt = word[0];
    int m = m_exp(c, dlt);
    // both c and d are left descents, so the word can be rearranged to start
    // with the length-m alternating prefix (d, c, d, ...)
    for (int k = 1; k < m; ++k) {
        int t = (k % 2 == 1) ? c : dlt;
        Word sub(word.begin() + k, word.end());
        auto sub_moves = make_first(sub, t);
        for (auto& mv : sub_moves) {
            mv.pos += k;
            moves.push_back(mv);
        }
        std::copy(sub.begin(), sub.end(), word.begin() + k);
    }
    CoxMove flip{0, m};
    word = apply_move(word, flip);
    moves.push_back(flip);
    return moves;
}

std::vector<CoxMove> RootDatum::align(const Word& from, const Word& to) const {
    if (from.size() != to.size()) throw std::invalid_argument("align: words have different length");
    Word w = from;
    std::vector<CoxMove> moves;
    for (size_t k = 0; k < to.size(); ++k) {
        Word sub(w.begin() + k, w.end());
        auto sub_moves = make_first(sub, to[k]);
        for (auto& mv : sub_moves) {
            mv.pos += (int)k;
            moves.push_back(mv);
        }
        std::copy(sub.begin(), sub.end(), w.begin() + k);
    }
    if (w != to) throw std::logic_error("align: words do not represent the same element");
    return moves;
}

bool RootDatum::route_precondition(const Word& word, int target) const {
    if (word.empty() || !is_reduced(word)) return false;
    auto v = mat_apply(word_matrix(word), simple_root(target));
    auto neg = simple_root(word[0]);
    for (auto& x : neg) x = -x;
    return v == neg;
}

RootDatum::Route RootDatum::coxeter_route(const Word& word, int target) const {
    if (!is_reduced(word)) throw std::invalid_argument("coxeter_route: word not reduced");
    if (!route_precondition(word, target))
        throw std::invalid_argument(
            "coxeter_route: need l(w s_j) < l(w) and l(s_i w s_j) = l(w) for i = word[0]");
    Route route;
    Word V = word;
    int M = (int)V.size();
    int p = 0;
    while (p < M - 1) {
        int aa = V[p];
        // suffix element from the anchor onwards, tracked with its inverse
        Word suffix(V.begin() + p, V.end());
        auto sufmat = word_matrix(suffix);
        int chosen = -1, chosen_m = 0;
        for (int k : labels_) {
            if (k == aa) continue;
            int m = m_exp(aa, k);
            if (m == 6) continue;  // length-6 braid moves never arise here
            // strip the first m-1 letters (k, a, k, ...) of the flipped block
            auto u = sufmat;
            bool ok = true;
            for (int t = 0; t < m - 1; ++t) {
                int lt = (t % 2 == 0) ? k : aa;
                Word tw{lt};
                auto s = word_matrix(tw);
                auto su = mat_mul(s, u);
                // lt must be a left descent of u
                long long lu = 0, lsu = 0;
                for (const auto& beta : positive_roots()) {
                    if (root_sign(mat_apply(u, beta)) < 0) ++lu;
                    if (root_sign(mat_apply(su, beta)) < 0) ++lsu;
                }
                if (lsu != lu - 1) {
                    ok = false;
                    break;
                }
                u = su;
            }
            if (!ok) continue;
            int anchor_letter = (m % 2 == 0) ? aa : k;
            auto v = mat_apply(u, simple_root(target));
            auto neg = simple_root(anchor_letter);
            for (auto& x : neg) x = -x;
            if (v == neg) {
                chosen = k;
                chosen_m = m;
                break;
            }
        }
        if (chosen < 0) throw std::logic_error("coxeter_route: no admissible chain move found");
        // preparation: expose the alternating pattern at p+1 .. p+m-1 using
        // moves that never touch positions <= p+t-1
        for (int t = 1; t < chosen_m; ++t) {
            int tau = (t % 2 == 1) ? chosen : aa;
            Word sub(V.begin() + p + t, V.end());
            auto sub_moves = make_first(sub, tau);
            for (auto& mv : sub_moves) {
                mv.pos += p + t;
                route.prep.push_back(mv);
            }
            std::copy(sub.begin(), sub.end(), V.begin() + p + t);
        }
        CoxMove flip{p, chosen_m};
        V = apply_move(V, flip);
        route.chain.push_back(flip);
        p += chosen_m - 1;
    }
    if (V.empty() || V.back() != target)
        throw std::logic_error("coxeter_route: chain did not terminate at the target letter");
    route.final_word = V;
    return route;
}

std::string RootDatum::type_string() const {
    std::ostringstream os;
    os << family_ << rank_;
    return os.str();
}

std::string RootDatum::to_json() const {
    std::ostringstream os;
    os << "{\"type\":\"" << family_ << "\",\"rank\":" << rank_ << ",\"cartan\":[";
    for (int i = 0; i < rank_; ++i) {
        if (i) os << ",";
        os << "[";
        for (int j = 0; j < rank_; ++j) {
            if (j) os << ",";
            os << cartan_[i][j];
        }
        os << "]";
    }
    os << "],\"multipliers\":[";
    for (int i = 0; i < rank_; ++i) {
        if (i) os << ",";
        os << "{\"num\":" << d_[i].num() << ",\"den\":" << d_[i].den() << "}";
    }
    os << "]}";
    return os.str();
}

std::string word_str(const Word& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << ",";
        os << w[i];
    }
    return os.str();
}

Word parse_word(const std::string& s) {
    Word w;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) {
                w.push_back(std::stoi(cur));
                cur.clear();
            }
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) w.push_back(std::stoi(cur));
    return w;
}

} // namespace posrep
