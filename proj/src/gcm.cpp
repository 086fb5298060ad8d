#include "kmd/gcm.hpp"

#include "kmd/error.hpp"
#include "kmd/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace kmd {

namespace {

std::string pair_str(int i, int j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

QMatrix to_q(const Gcm& g)
{
    QMatrix m(g.size(), g.size());
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
            m(i, j) = g(i, j);
    return m;
}

std::vector<long long> to_ll(const QVec& v)
{
    std::vector<long long> out;
    for (const auto& q : v) {
        if (q.get_den() != 1 || !q.get_num().fits_slong_p())
            throw Error(Err::Internal, "non-integral vector");
        out.push_back(q.get_num().get_si());
    }
    return out;
}

}  // namespace

Gcm Gcm::validate(const IMat& m)
{
    const int n = static_cast<int>(m.size());
    if (n < 2)
        throw Error(Err::NotSquare, "size must be at least 2");
    for (const auto& r : m)
        if (static_cast<int>(r.size()) != n)
            throw Error(Err::NotSquare, "matrix is not square");
    for (int i = 0; i < n; ++i)
        if (m[i][i] != 2)
            throw Error(Err::DiagonalNotTwo, "at " + pair_str(i, i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && m[i][j] > 0)
                throw Error(Err::PositiveOffDiagonal, "at " + pair_str(i, j));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((m[i][j] == 0) != (m[j][i] == 0))
                throw Error(Err::ZeroPatternAsymmetric, "at " + pair_str(i, j));

    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (int j = 0; j < n; ++j)
            if (j != i && m[i][j] != 0 && !seen[j]) {
                seen[j] = true;
                q.push(j);
            }
    }
    std::string lost;
    for (int i = 0; i < n; ++i)
        if (!seen[i])
            lost += (lost.empty() ? "" : ",") + std::to_string(i);
    if (!lost.empty())
        throw Error(Err::Decomposable, "nodes {" + lost + "} not connected to node 0");

    Gcm g;
    g.a_ = m;
    return g;
}

int Gcm::serre_span() const
{
    int s = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (i != j)
                s = std::max(s, 2 - a_[i][j]);
    return s;
}

Gcm Gcm::permuted(const std::vector<int>& p) const
{
    IMat b(size(), std::vector<int>(size()));
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            b[i][j] = a_[p[i]][p[j]];
    return validate(b);
}

namespace {

struct SymResult {
    std::optional<Symmetrizer> sym;
    std::string witness;
};

SymResult symmetrize(const Gcm& g)
{
    const int n = g.size();
    std::vector<Q> d(n);
    std::vector<int> parent(n, -2);
    std::queue<int> q;
    d[0] = 1;
    parent[0] = -1;
    q.push(0);
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (int j = 0; j < n; ++j)
            if (j != i && g(i, j) != 0 && parent[j] == -2) {
                parent[j] = i;
                d[j] = d[i] * g(i, j) / g(j, i);
                q.push(j);
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (g(i, j) == 0 || d[i] * g(i, j) == d[j] * g(j, i))
                continue;
            std::vector<int> pi, pj;
            for (int k = i; k != -1; k = parent[k])
                pi.push_back(k);
            for (int k = j; k != -1; k = parent[k])
                pj.push_back(k);
            while (pi.size() > 1 && pj.size() > 1 && pi[pi.size() - 2] == pj[pj.size() - 2]) {
                pi.pop_back();
                pj.pop_back();
            }
            std::string w;
            for (int k : pi)
                w += std::to_string(k) + "-";
            for (std::size_t k = pj.size() - 1; k-- > 0;)
                w += std::to_string(pj[k]) + "-";
            w += std::to_string(j) + "-" + std::to_string(i);
            return {std::nullopt, "ratio conflict on cycle " + w};
        }
    QVec dv(d.begin(), d.end());
    Symmetrizer s;
    s.d = to_ll(primitive(dv));
    return {s, ""};
}

}  // namespace

std::optional<Symmetrizer> try_symmetrizer(const Gcm& g)
{
    return symmetrize(g).sym;
}

Symmetrizer symmetrizer(const Gcm& g)
{
    auto r = symmetrize(g);
    if (!r.sym)
        throw Error(Err::NotSymmetrizable, r.witness);
    return *r.sym;
}

namespace {

IMat from_diagram(int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& len)
{
    IMat a(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        a[i][i] = 2;
    for (auto [i, j] : edges) {
        int m = std::max(len[i], len[j]);
        a[i][j] = -m / len[i];
        a[j][i] = -m / len[j];
    }
    return a;
}

std::vector<std::pair<int, int>> chain(int from, int to)
{
    std::vector<std::pair<int, int>> e;
    for (int i = from; i < to; ++i)
        e.emplace_back(i, i + 1);
    return e;
}

std::vector<CatalogEntry> build_catalog()
{
    constexpr int kMax = 12;
    std::vector<CatalogEntry> c;
    auto fin = [&](std::string label, int n, std::vector<std::pair<int, int>> e, std::vector<int> len) {
        c.push_back({std::move(label), Kind::Finite, from_diagram(n, e, len), -1});
    };
    auto aff = [&](std::string label, int n, std::vector<std::pair<int, int>> e, std::vector<int> len,
                   int eps = 0) {
        c.push_back({std::move(label), Kind::Affine, from_diagram(n, e, len), eps});
    };

    for (int l = 2; l <= kMax; ++l)
        fin("A" + std::to_string(l), l, chain(0, l - 1), std::vector<int>(l, 1));
    for (int l = 2; l <= kMax; ++l) {
        std::vector<int> len(l, 2);
        len[l - 1] = 1;
        fin("B" + std::to_string(l), l, chain(0, l - 1), len);
    }
    for (int l = 3; l <= kMax; ++l) {
        std::vector<int> len(l, 1);
        len[l - 1] = 2;
        fin("C" + std::to_string(l), l, chain(0, l - 1), len);
    }
    for (int l = 4; l <= kMax; ++l) {
        auto e = chain(0, l - 2);
        e.emplace_back(l - 3, l - 1);
        fin("D" + std::to_string(l), l, e, std::vector<int>(l, 1));
    }
    fin("E6", 6, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}}, std::vector<int>(6, 1));
    fin("E7", 7, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 3}}, std::vector<int>(7, 1));
    fin("E8", 8, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}}, std::vector<int>(8, 1));
    fin("F4", 4, chain(0, 3), {2, 2, 1, 1});
    fin("G2", 2, chain(0, 1), {1, 3});

    c.push_back({"A1~1", Kind::Affine, {{2, -2}, {-2, 2}}, 0});
    for (int l = 2; l + 1 <= kMax; ++l) {
        auto e = chain(0, l);
        e.emplace_back(l, 0);
        aff("A" + std::to_string(l) + "~1", l + 1, e, std::vector<int>(l + 1, 1));
    }
    for (int l = 3; l + 1 <= kMax; ++l) {
        auto e = chain(1, l);
        e.emplace_back(0, 2);
        std::vector<int> len(l + 1, 2);
        len[l] = 1;
        aff("B" + std::to_string(l) + "~1", l + 1, e, len);
    }
    for (int l = 2; l + 1 <= kMax; ++l) {
        std::vector<int> len(l + 1, 1);
        len[0] = len[l] = 2;
        aff("C" + std::to_string(l) + "~1", l + 1, chain(0, l), len);
    }
    for (int l = 4; l + 1 <= kMax; ++l) {
        auto e = chain(1, l - 1);
        e.emplace_back(0, 2);
        e.emplace_back(l - 2, l);
        aff("D" + std::to_string(l) + "~1", l + 1, e, std::vector<int>(l + 1, 1));
    }
    aff("E6~1", 7, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}, {6, 0}}, std::vector<int>(7, 1));
    {
        auto e = chain(0, 6);
        e.emplace_back(3, 7);
        aff("E7~1", 8, e, std::vector<int>(8, 1));
    }
    {
        auto e = chain(0, 7);
        e.emplace_back(5, 8);
        aff("E8~1", 9, e, std::vector<int>(9, 1));
    }
    aff("F4~1", 5, chain(0, 4), {2, 2, 2, 1, 1});
    aff("G2~1", 3, chain(0, 2), {3, 3, 1});

    c.push_back({"A2~2", Kind::Affine, {{2, -4}, {-1, 2}}, 1});
    for (int l = 2; l + 1 <= kMax; ++l) {
        std::vector<int> len(l + 1, 2);
        len[0] = 1;
        len[l] = 4;
        aff("A" + std::to_string(2 * l) + "~2", l + 1, chain(0, l), len, l);
    }
    for (int l = 3; l + 1 <= kMax; ++l) {
        auto e = chain(1, l);
        e.emplace_back(0, 2);
        std::vector<int> len(l + 1, 1);
        len[l] = 2;
        aff("A" + std::to_string(2 * l - 1) + "~2", l + 1, e, len);
    }
    for (int l = 2; l + 1 <= kMax; ++l) {
        std::vector<int> len(l + 1, 2);
        len[0] = len[l] = 1;
        aff("D" + std::to_string(l + 1) + "~2", l + 1, chain(0, l), len);
    }
    aff("E6~2", 5, chain(0, 4), {1, 1, 1, 2, 2});
    aff("D4~3", 3, chain(0, 2), {1, 1, 3});
    return c;
}

// Per-node invariant used to prune the isomorphism search.
std::vector<int> node_signature(const Gcm& g, int i)
{
    std::vector<int> s;
    for (int j = 0; j < g.size(); ++j)
        if (j != i && g(i, j) != 0)
            s.push_back(g(i, j) * 16 + g(j, i));
    std::sort(s.begin(), s.end());
    return s;
}

bool extend(const Gcm& g, const Gcm& h, std::vector<int>& p, std::vector<bool>& used, int k,
            const std::vector<std::vector<int>>& sg, const std::vector<std::vector<int>>& sh,
            std::vector<std::vector<int>>* all)
{
    const int n = g.size();
    if (k == n) {
        if (all) {
            all->push_back(p);
            return false;
        }
        return true;
    }
    for (int c = 0; c < n; ++c) {
        if (used[c] || sg[k] != sh[c])
            continue;
        bool ok = true;
        for (int j = 0; j < k && ok; ++j)
            ok = g(k, j) == h(c, p[j]) && g(j, k) == h(p[j], c);
        if (!ok)
            continue;
        p[k] = c;
        used[c] = true;
        if (extend(g, h, p, used, k + 1, sg, sh, all))
            return true;
        used[c] = false;
    }
    return false;
}

std::vector<long long> perron_witness(const Gcm& g)
{
    const int n = g.size();
    std::vector<long double> u(n, 1.0L), v(n);
    for (int it = 0; it < 20000; ++it) {
        long double norm = 0;
        for (int i = 0; i < n; ++i) {
            long double s = u[i];
            for (int j = 0; j < n; ++j)
                s += (i == j ? 0 : -g(i, j)) * u[j];
            v[i] = s;
            norm = std::max(norm, s);
        }
        for (int i = 0; i < n; ++i)
            u[i] = v[i] / norm;
    }
    for (long double scale : {1e3L, 1e6L, 1e9L, 1e12L, 1e15L}) {
        std::vector<long long> w(n);
        for (int i = 0; i < n; ++i)
            w[i] = std::max<long long>(1, std::llround(u[i] * scale));
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            __int128 s = 0;
            for (int j = 0; j < n; ++j)
                s += static_cast<__int128>(g(i, j)) * w[j];
            ok = s < 0;
        }
        if (ok)
            return w;
    }
    return {};
}

}  // namespace

const std::vector<CatalogEntry>& catalog()
{
    static const std::vector<CatalogEntry> c = build_catalog();
    return c;
}

std::optional<std::vector<int>> find_isomorphism(const Gcm& g, const Gcm& h)
{
    const int n = g.size();
    if (h.size() != n)
        return std::nullopt;
    std::vector<std::vector<int>> sg(n), sh(n);
    for (int i = 0; i < n; ++i) {
        sg[i] = node_signature(g, i);
        sh[i] = node_signature(h, i);
    }
    auto a = sg, b = sh;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
        return std::nullopt;
    std::vector<int> p(n, -1);
    std::vector<bool> used(n, false);
    if (extend(g, h, p, used, 0, sg, sh, nullptr))
        return p;
    return std::nullopt;
}

std::vector<std::vector<int>> diagram_automorphisms(const Gcm& g)
{
    const int n = g.size();
    std::vector<std::vector<int>> sg(n);
    for (int i = 0; i < n; ++i)
        sg[i] = node_signature(g, i);
    std::vector<int> p(n, -1);
    std::vector<bool> used(n, false);
    std::vector<std::vector<int>> all;
    extend(g, g, p, used, 0, sg, sg, &all);
    return all;
}

VinbergResult vinberg(const Gcm& g)
{
    const int n = g.size();
    QMatrix a = to_q(g);
    if (rank(a) == static_cast<std::size_t>(n)) {
        QVec u = solve(a, QVec(n, Q(1)));
        if (std::all_of(u.begin(), u.end(), [](const Q& q) { return sgn(q) > 0; }))
            return {Kind::Finite, to_ll(primitive(u))};
    } else {
        auto k = kernel_basis(a);
        if (k.size() == 1 && std::all_of(k[0].begin(), k[0].end(), [](const Q& q) { return sgn(q) > 0; }))
            return {Kind::Affine, to_ll(k[0])};
    }
    auto w = perron_witness(g);
    if (w.empty())
        throw Error(Err::Internal, "no exact indefinite witness found");
    return {Kind::Indefinite, w};
}

GcmType classify(const Gcm& g)
{
    GcmType t;
    const auto v = vinberg(g);
    for (const auto& e : catalog()) {
        if (static_cast<int>(e.matrix.size()) != g.size())
            continue;
        Gcm h = Gcm::validate(e.matrix);
        auto p = find_isomorphism(g, h);
        if (!p)
            continue;
        t.kind = e.kind;
        t.label = e.label;
        t.to_canonical = *p;
        break;
    }
    if (t.to_canonical.empty()) {
        t.to_canonical.resize(g.size());
        std::iota(t.to_canonical.begin(), t.to_canonical.end(), 0);
    }
    if (t.kind != v.kind)
        throw Error(Err::Internal, "catalog and Vinberg test disagree for " + t.label);
    if (t.kind == Kind::Affine) {
        const auto m = affine_marks(g);
        t.marks = m.marks;
        t.comarks = m.comarks;
        for (const auto& e : catalog())
            if (e.label == t.label)
                t.epsilon = e.epsilon;
        for (int i = 0; i < g.size(); ++i)
            if (t.to_canonical[i] == t.epsilon)
                t.epsilon_input = i;
    }
    return t;
}

int canonical_index(const GcmType& t, int input_index)
{
    const int c = t.to_canonical.at(input_index);
    return t.kind == Kind::Finite ? c + 1 : c;
}

AffineMarks affine_marks(const Gcm& g)
{
    QMatrix a = to_q(g);
    auto k = kernel_basis(a);
    auto kt = kernel_basis(a.transpose());
    auto positive = [](const QVec& v) {
        return std::all_of(v.begin(), v.end(), [](const Q& q) { return sgn(q) > 0; });
    };
    if (k.size() != 1 || kt.size() != 1 || !positive(k[0]) || !positive(kt[0]))
        throw Error(Err::NotAffineType, "no positive one-dimensional null space");
    AffineMarks m;
    m.marks = to_ll(k[0]);
    m.comarks = to_ll(kt[0]);
    m.delta = RootVec::zero(g.size());
    for (int i = 0; i < g.size(); ++i)
        m.delta[i] = static_cast<int>(m.marks[i]);
    return m;
}

}  // namespace kmd
