#include "kmd/autos.hpp"

#include "kmd/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace kmd {

SpVec TruncMap::apply(const SpVec& x) const
{
    SpVec out;
    for (const auto& [g, c] : x)
        sp_axpy(out, c, cols.at(g));
    return out;
}

TruncMap identity_map(int dim, bool borel)
{
    TruncMap m;
    m.borel = borel;
    for (int g = 0; g < dim; ++g)
        m.cols.push_back({{g, Q(1)}});
    return m;
}

TruncMap compose(const TruncMap& a, const TruncMap& b)
{
    if (a.size() != b.size() || a.borel != b.borel)
        throw Error(Err::InputError, "composing maps on different spaces");
    TruncMap m;
    m.borel = a.borel;
    for (const auto& c : b.cols)
        m.cols.push_back(a.apply(c));
    return m;
}

TruncMap exp_nilpotent(const TruncMap& d)
{
    TruncMap result = identity_map(d.size(), d.borel);
    TruncMap term = result;
    for (int k = 1;; ++k) {
        if (k > d.size() + 1)
            throw Error(Err::Internal, "map is not nilpotent");
        term = compose(d, term);
        bool zero = true;
        for (auto& c : term.cols) {
            c = sp_scale(c, Q(1, k));
            zero = zero && c.empty();
        }
        if (zero)
            break;
        for (int g = 0; g < d.size(); ++g)
            sp_axpy(result.cols[g], Q(1), term.cols[g]);
    }
    return result;
}

TruncMap derivation_map(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d)
{
    TruncMap m;
    m.cols = extend_derivation(alg, beta, d);
    return m;
}

TruncMap torus_action(const GradedAlgebra& alg, const std::vector<Q>& t)
{
    if (static_cast<int>(t.size()) != alg.rank())
        throw Error(Err::InputError, "torus needs one entry per simple root");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (sgn(t[i]) == 0)
            throw Error(Err::ZeroTorusEntry, "t_" + std::to_string(i) + " = 0");
    TruncMap m;
    for (int g = 0; g < alg.dim_total(); ++g) {
        Q s = 1;
        const RootVec& beta = alg.degree_of(g);
        for (int i = 0; i < beta.size(); ++i)
            for (int k = 0; k < beta[i]; ++k)
                s *= t[i];
        m.cols.push_back({{g, s}});
    }
    return m;
}

TruncMap exp_ad(const GradedAlgebra& alg, const LieElt& x)
{
    if (!x.is_zero() && !(x.degree.positive() && x.degree.height() >= 1))
        throw Error(Err::InputError, "exp_ad needs a positive degree");
    TruncMap d;
    for (int g = 0; g < alg.dim_total(); ++g)
        d.cols.push_back(alg.bracket_trunc(x.coords, SpVec{{g, Q(1)}}));
    return exp_nilpotent(d);
}

TruncMap homomorphism_from_generators(const GradedAlgebra& alg, const std::vector<SpVec>& images)
{
    if (static_cast<int>(images.size()) != alg.rank())
        throw Error(Err::InputError, "one image per generator");
    TruncMap m;
    m.cols.resize(alg.dim_total());
    for (int g = 0; g < alg.dim_total(); ++g) {
        if (alg.height_of(g) == 1) {
            for (int i = 0; i < alg.rank(); ++i)
                if (alg.generator(i) == g)
                    m.cols[g] = images[i];
            continue;
        }
        SpVec out;
        for (const auto& [i, c] : alg.certificate(g))
            sp_axpy(out, Q(1), alg.bracket_trunc(images[i], m.apply(c)));
        m.cols[g] = std::move(out);
    }
    return m;
}

TruncMap diagram_lift(const GradedAlgebra& alg, const std::vector<int>& sigma)
{
    const auto autos = diagram_automorphisms(alg.gcm());
    if (std::find(autos.begin(), autos.end(), sigma) == autos.end())
        throw Error(Err::NotDiagramAutomorphism, "permutation does not preserve the matrix");
    if (alg.box())
        throw Error(Err::InputError, "diagram lifts need a height-only build");
    std::vector<SpVec> images;
    for (int s : sigma)
        images.push_back({{alg.generator(s), Q(1)}});
    return homomorphism_from_generators(alg, images);
}

std::vector<QVec> dual_elements(const BorelAlgebra& bor)
{
    const int n = bor.nil().rank();
    std::vector<QVec> out;
    for (int i = 0; i < n; ++i) {
        QVec e(n);
        e[i] = 1;
        out.push_back(solve(bor.pairing(), e));
    }
    return out;
}

TruncMap gamma0_borel(const BorelAlgebra& bor, const QMatrix& phi, const std::vector<QVec>& z)
{
    const int n = bor.nil().rank(), hd = bor.h_dim(), mp = bor.m_prime();
    TruncMap id = identity_map(bor.dim_total(), true);
    if (mp == 0) {
        id.note = "c = 0: only the identity qualifies";
        return id;
    }
    if (static_cast<int>(phi.rows()) != mp || static_cast<int>(phi.cols()) != mp)
        throw Error(Err::InputError, "phi must be " + std::to_string(mp) + "x" + std::to_string(mp));
    if (rank(phi) != static_cast<std::size_t>(mp))
        throw Error(Err::NotInvertible, "phi is singular");
    if (static_cast<int>(z.size()) != n)
        throw Error(Err::InputError, "need one z_i per simple root");
    for (const auto& zi : z) {
        if (static_cast<int>(zi.size()) != hd)
            throw Error(Err::InputError, "z_i must have h_dim coordinates");
        if (!is_zero(bor.pairing().apply(zi)))
            throw Error(Err::InputError, "z_i is not central");
    }
    const auto duals = dual_elements(bor);
    const auto& cb = bor.center_basis();
    // Columns: old basis (duals, center) and its images.
    QMatrix basis(hd, hd), image(hd, hd);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < hd; ++a) {
            basis(a, i) = duals[i][a];
            image(a, i) = duals[i][a] + z[i][a];
        }
    for (int k = 0; k < mp; ++k)
        for (int a = 0; a < hd; ++a) {
            basis(a, n + k) = cb[k][a];
            Q s = 0;
            for (int r = 0; r < mp; ++r)
                s += cb[r][a] * phi(r, k);
            image(a, n + k) = s;
        }
    // T = image * basis^{-1}: column a of T is image * (basis^{-1} e_a).
    std::vector<QVec> units;
    for (int a = 0; a < hd; ++a) {
        QVec e(hd);
        e[a] = 1;
        units.push_back(std::move(e));
    }
    const auto coords = solve_many(basis, units);
    for (int a = 0; a < hd; ++a)
        id.cols[a] = sp_from_dense(image.apply(coords[a]));
    return id;
}

namespace {

template <class Space>
AutCheck check_map(const Space& sp, int total, int cap, const TruncMap& m,
                   const std::function<RootVec(int)>& degree, const std::function<int(int)>& height)
{
    AutCheck res;
    if (m.size() != total) {
        res.ok = false;
        res.reason = "map has the wrong size";
        return res;
    }
    // Injectivity per source degree.
    std::map<RootVec, std::vector<int>> by_degree;
    for (int g = 0; g < total; ++g)
        by_degree[degree(g)].push_back(g);
    for (const auto& [beta, gs] : by_degree) {
        std::vector<SpVec> cols;
        for (int g : gs)
            cols.push_back(m.cols[g]);
        if (sp_rank(cols) < gs.size()) {
            res.ok = false;
            res.reason = "rank drop";
            res.rank_drop = beta;
            return res;
        }
    }
    // Bijectivity: leading blocks per height when the map respects the height filtration.
    bool filtered = true;
    for (int g = 0; g < total && filtered; ++g)
        for (const auto& [t, c] : m.cols[g])
            if (height(t) < height(g))
                filtered = false;
    if (filtered) {
        std::map<int, std::vector<SpVec>> lead;
        std::map<int, std::size_t> count;
        for (int g = 0; g < total; ++g) {
            SpVec c;
            for (const auto& [t, v] : m.cols[g])
                if (height(t) == height(g))
                    c.emplace_back(t, v);
            lead[height(g)].push_back(std::move(c));
            ++count[height(g)];
        }
        for (const auto& [h, cols] : lead)
            if (sp_rank(cols) < count[h]) {
                res.ok = false;
                res.reason = "rank drop";
                res.rank_drop_height = h;
                return res;
            }
    } else if (sp_rank(m.cols) < static_cast<std::size_t>(total)) {
        res.ok = false;
        res.reason = "rank drop";
        return res;
    }
    for (int u = 0; u < total; ++u)
        for (int v = u + 1; v < total; ++v) {
            if (height(u) + height(v) > cap)
                continue;
            SpVec lhs = m.apply(sp.bracket_trunc(u, v));
            SpVec rhs = sp.bracket_trunc(m.cols[u], m.cols[v]);
            if (lhs != rhs) {
                res.ok = false;
                res.reason = "bracket not preserved";
                res.u = u;
                res.v = v;
                res.lhs = std::move(lhs);
                res.rhs = std::move(rhs);
                return res;
            }
        }
    return res;
}

std::string index_label(const GradedAlgebra& alg, int g, bool borel, int h_dim)
{
    if (!borel)
        return alg.label(g);
    return g < h_dim ? "h" + std::to_string(g) : alg.label(g - h_dim);
}

}  // namespace

AutCheck is_automorphism(const GradedAlgebra& alg, const TruncMap& m)
{
    return check_map(
        alg, alg.dim_total(), alg.height_cap(), m, [&](int g) { return alg.degree_of(g); },
        [&](int g) { return alg.height_of(g); });
}

AutCheck is_automorphism(const BorelAlgebra& bor, const TruncMap& m)
{
    return check_map(
        bor, bor.dim_total(), bor.nil().height_cap(), m, [&](int g) { return bor.degree_of(g); },
        [&](int g) { return bor.height_of(g); });
}

std::string witness_json(const GradedAlgebra& alg, const AutCheck& c, bool borel, int h_dim)
{
    nlohmann::json j;
    j["ok"] = c.ok;
    if (c.ok)
        return j.dump();
    j["reason"] = c.reason;
    if (c.rank_drop)
        j["degree"] = c.rank_drop->c;
    if (c.rank_drop_height >= 0)
        j["height"] = c.rank_drop_height;
    if (c.u >= 0) {
        j["pair"] = {index_label(alg, c.u, borel, h_dim), index_label(alg, c.v, borel, h_dim)};
        auto side = [&](const SpVec& x) {
            nlohmann::json o = nlohmann::json::object();
            for (const auto& [g, q] : x)
                o[index_label(alg, g, borel, h_dim)] = to_string(q);
            return o;
        };
        j["lhs"] = side(c.lhs);
        j["rhs"] = side(c.rhs);
    }
    return j.dump();
}

namespace {

QMatrix m3(const std::vector<QVec>& rows)
{
    return QMatrix::from_rows(rows, 3);
}

struct HeisenbergBasis {
    int e0, e1, z;
    Q zc;  // [e0, e1] = zc * b_z
};

HeisenbergBasis heisenberg_basis(const GradedAlgebra& a2)
{
    if (a2.rank() != 2 || a2.gcm()(0, 1) != -1 || a2.gcm()(1, 0) != -1 || a2.dim_total() != 3)
        throw Error(Err::InputError, "Heisenberg fixture needs the A2 nilradical");
    HeisenbergBasis b{a2.generator(0), a2.generator(1), a2.basis(RootVec({1, 1})).at(0), 0};
    const SpVec br = a2.bracket_basis(b.e0, b.e1);
    b.zc = sp_get(br, b.z);
    return b;
}

}  // namespace

QMatrix heisenberg_matrix(const GradedAlgebra& a2, const TruncMap& m)
{
    const auto b = heisenberg_basis(a2);
    const int idx[3] = {b.e0, b.e1, b.z};
    const Q scale[3] = {1, 1, b.zc};  // global vector of each fixture basis vector
    QMatrix mat(3, 3);
    for (int j = 0; j < 3; ++j) {
        const SpVec img = sp_scale(m.cols.at(idx[j]), scale[j]);
        for (int r = 0; r < 3; ++r)
            mat(r, j) = sp_get(img, idx[r]) / scale[r];
    }
    return mat;
}

TruncMap heisenberg_map(const GradedAlgebra& a2, const QMatrix& mat)
{
    const auto b = heisenberg_basis(a2);
    const int idx[3] = {b.e0, b.e1, b.z};
    const Q scale[3] = {1, 1, b.zc};
    TruncMap m;
    m.cols.resize(3);
    for (int j = 0; j < 3; ++j) {
        SpVec img;
        for (int r = 0; r < 3; ++r)
            if (sgn(mat(r, j)) != 0)
                img.emplace_back(idx[r], mat(r, j) * scale[r]);
        std::sort(img.begin(), img.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        m.cols[idx[j]] = sp_scale(img, 1 / scale[j]);
    }
    return m;
}

bool in_heisenberg_set(const QMatrix& mat)
{
    const Q det = mat(0, 0) * mat(1, 1) - mat(0, 1) * mat(1, 0);
    return sgn(det) != 0 && sgn(mat(0, 2)) == 0 && sgn(mat(1, 2)) == 0 && mat(2, 2) == det;
}

HeisenbergReport heisenberg_aut_check(std::uint64_t seed)
{
    HeisenbergReport rep;
    const GradedAlgebra a2 = build_nilradical(Gcm::validate({{2, -1}, {-1, 2}}), 3);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(-4, 4);
    auto q = [&] { return Q(small(rng)); };
    auto is_aut = [&](const QMatrix& mat) { return is_automorphism(a2, heisenberg_map(a2, mat)).ok; };

    rep.identity_ok = is_aut(QMatrix::identity(3)) && in_heisenberg_set(QMatrix::identity(3));

    rep.random_matrices_ok = true;
    rep.solved_land_in_set = true;
    for (int trial = 0; trial < 25; ++trial) {
        Q a1 = q(), a2c = q(), a3 = q(), b1 = q(), b2 = q(), b3 = q();
        if (sgn(a1 * b2 - b1 * a2c) == 0)
            continue;
        QMatrix mat = m3({{a1, b1, 0}, {a2c, b2, 0}, {a3, b3, a1 * b2 - b1 * a2c}});
        rep.random_matrices_ok = rep.random_matrices_ok && is_aut(mat);

        // Fix the generator columns and solve the bracket constraints for the z column.
        auto residual = [&](const QVec& zcol) {
            QMatrix m = mat;
            for (int r = 0; r < 3; ++r)
                m(r, 2) = zcol[r];
            const TruncMap t = heisenberg_map(a2, m);
            QVec out;
            for (int u = 0; u < 3; ++u)
                for (int v = u + 1; v < 3; ++v) {
                    SpVec d = t.apply(a2.bracket_trunc(u, v));
                    sp_axpy(d, Q(-1), a2.bracket_trunc(t.cols[u], t.cols[v]));
                    for (int g = 0; g < 3; ++g)
                        out.push_back(sp_get(d, g));
                }
            return out;
        };
        const QVec r0 = residual(QVec(3));
        QMatrix lin(r0.size(), 3);
        for (int k = 0; k < 3; ++k) {
            QVec e(3);
            e[k] = 1;
            const QVec rk = residual(e);
            for (std::size_t r = 0; r < r0.size(); ++r)
                lin(r, k) = rk[r] - r0[r];
        }
        QVec rhs(r0.size());
        for (std::size_t r = 0; r < r0.size(); ++r)
            rhs[r] = -r0[r];
        QMatrix solved = mat;
        try {
            const QVec zcol = solve(lin, rhs);
            if (rank(lin) != 3)
                rep.solved_land_in_set = false;
            for (int r = 0; r < 3; ++r)
                solved(r, 2) = zcol[r];
        } catch (const Error&) {
            rep.solved_land_in_set = false;
            continue;
        }
        rep.solved_land_in_set = rep.solved_land_in_set && in_heisenberg_set(solved) && is_aut(solved);
    }

    bool sub = true;
    const LieElt e0 = a2.gen(0), e1 = a2.gen(1);
    for (int trial = 0; trial < 5; ++trial) {
        const Q p = q(), r = q();
        auto scaled = [](LieElt x, const Q& s) {
            x.coords = sp_scale(x.coords, s);
            return x;
        };
        // exp D''
        const QMatrix m0 = heisenberg_matrix(a2, compose(exp_ad(a2, scaled(e0, p)), exp_ad(a2, scaled(e1, r))));
        sub = sub && m0 == m3({{1, 0, 0}, {0, 1, 0}, {-r, p, 1}});
        // torus
        Q t0 = q(), t1 = q();
        if (sgn(t0) == 0)
            t0 = 1;
        if (sgn(t1) == 0)
            t1 = -1;
        const QMatrix mt = heisenberg_matrix(a2, torus_action(a2, {t0, t1}));
        sub = sub && mt == m3({{t0, 0, 0}, {0, t1, 0}, {0, 0, t0 * t1}});
        // exp(F d0), exp(F d1)
        GenImages d0, d1;
        d0.e = {sp_scale({{a2.generator(1), Q(1)}}, p), {}};
        d1.e = {{}, sp_scale({{a2.generator(0), Q(1)}}, r)};
        const TruncMap x0 = exp_nilpotent(derivation_map(a2, RootVec({-1, 1}), d0));
        const TruncMap x1 = exp_nilpotent(derivation_map(a2, RootVec({1, -1}), d1));
        sub = sub && heisenberg_matrix(a2, x0) == m3({{1, 0, 0}, {p, 1, 0}, {0, 0, 1}});
        sub = sub && heisenberg_matrix(a2, x1) == m3({{1, r, 0}, {0, 1, 0}, {0, 0, 1}});
        const QMatrix sl = heisenberg_matrix(a2, compose(x0, x1));
        sub = sub && sl(0, 0) * sl(1, 1) - sl(0, 1) * sl(1, 0) == 1 && sl(2, 2) == 1;
        for (const TruncMap& t : {x0, x1})
            sub = sub && is_automorphism(a2, t).ok;
    }
    rep.subgroups_ok = sub;

    const TruncMap swap = diagram_lift(a2, {1, 0});
    rep.swap_ok = heisenberg_matrix(a2, swap) == m3({{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}) &&
                  is_automorphism(a2, swap).ok && compose(swap, swap) == identity_map(3);

    const QMatrix degenerate = m3({{1, 2, 0}, {1, 2, 0}, {0, 0, 0}});
    const QMatrix wrong_z = m3({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
    rep.degenerate_rejected = !in_heisenberg_set(degenerate) && !is_aut(degenerate) && !in_heisenberg_set(wrong_z) &&
                              !is_aut(wrong_z);

    rep.pass = rep.identity_ok && rep.random_matrices_ok && rep.solved_land_in_set && rep.subgroups_ok &&
               rep.swap_ok && rep.degenerate_rejected;
    if (!rep.identity_ok)
        rep.notes.push_back("identity rejected");
    if (!rep.random_matrices_ok)
        rep.notes.push_back("a member of the matrix set is not an automorphism");
    if (!rep.solved_land_in_set)
        rep.notes.push_back("solved automorphism outside the matrix set");
    if (!rep.subgroups_ok)
        rep.notes.push_back("subgroup matrix form mismatch");
    if (!rep.swap_ok)
        rep.notes.push_back("diagram swap mismatch");
    if (!rep.degenerate_rejected)
        rep.notes.push_back("degenerate matrix accepted");
    return rep;
}

}  // namespace kmd
