#include "kmd/deriv.hpp"

#include "kmd/error.hpp"
#include "kmd/roots.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <set>

namespace kmd {

namespace {

SpVec ad_pow(const GradedAlgebra& alg, int i, int s, SpVec x)
{
    const SpVec e{{alg.generator(i), Q(1)}};
    for (int k = 0; k < s && !x.empty(); ++k)
        x = alg.bracket_trunc(e, x);
    return x;
}

void require_cap(const GradedAlgebra& alg, const RootVec& beta)
{
    const int n = alg.rank();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (beta.height() + 2 - alg.gcm()(i, j) > alg.height_cap())
                throw Error(Err::CapTooSmall, "degree " + beta.str() + " needs height " +
                                                  std::to_string(beta.height() + 2 - alg.gcm()(i, j)) +
                                                  " > cap " + std::to_string(alg.height_cap()));
            RootVec t = beta + RootVec::simple(n, i) * (1 - alg.gcm()(i, j)) + RootVec::simple(n, j);
            if (t.positive() && !alg.covers(t))
                throw Error(Err::CapTooSmall, "degree " + t.str() + " outside the built box");
        }
}

// Rows of the Leibniz image of every Serre element. y_i lives in block
// `yblock + i` whose basis is over nilradical indices shifted by `shift`.
void serre_rows(const GradedAlgebra& alg, const RootVec& beta, const DerivationSpace& ds, int yblock, int shift,
                std::vector<QVec>& rows)
{
    const int n = alg.rank();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const int r = -alg.gcm()(i, j);
            const RootVec t = beta + RootVec::simple(n, i) * (r + 1) + RootVec::simple(n, j);
            if (!t.positive())
                continue;
            const auto tb = alg.basis(t);
            if (tb.empty())
                continue;
            const int toff = tb.front();
            std::vector<QVec> block(tb.size(), QVec(ds.unknowns));
            std::vector<SpVec> w(r + 1);  // w[m] = (ad e_i)^m e_j
            w[0] = {{alg.generator(j), Q(1)}};
            for (int m = 1; m <= r; ++m)
                w[m] = ad_pow(alg, i, 1, w[m - 1]);
            const auto& bi = ds.block_basis[yblock + i];
            for (std::size_t c = 0; c < bi.size(); ++c) {
                const SpVec b{{bi[c] - shift, Q(1)}};
                SpVec acc;
                for (int s = 0; s <= r; ++s)
                    sp_axpy(acc, Q(1), ad_pow(alg, i, s, alg.bracket_trunc(b, w[r - s])));
                for (const auto& [g, v] : acc)
                    block[g - toff][ds.block_offset[yblock + i] + c] += v;
            }
            const auto& bj = ds.block_basis[yblock + j];
            for (std::size_t c = 0; c < bj.size(); ++c) {
                const SpVec x = ad_pow(alg, i, r + 1, SpVec{{bj[c] - shift, Q(1)}});
                for (const auto& [g, v] : x)
                    block[g - toff][ds.block_offset[yblock + j] + c] += v;
            }
            for (auto& row : block)
                rows.push_back(std::move(row));
        }
}

void add_block(DerivationSpace& ds, std::vector<int> basis)
{
    ds.block_offset.push_back(ds.unknowns);
    ds.unknowns += static_cast<int>(basis.size());
    ds.block_basis.push_back(std::move(basis));
}

void finish(DerivationSpace& ds, std::vector<QVec> rows)
{
    ds.constraints = QMatrix::from_rows(rows, ds.unknowns);
    ds.basis = kernel_basis(ds.constraints);
    // Incremental echelon: inner witnesses first, then kernel vectors.
    std::vector<std::pair<int, SpVec>> ech;  // (pivot, row with pivot entry 1)
    auto insert = [&](const QVec& v) {
        SpVec x = sp_from_dense(v);
        for (const auto& [p, row] : ech) {
            const Q c = sp_get(x, p);
            if (sgn(c) != 0)
                sp_axpy(x, -c, row);
        }
        if (x.empty())
            return false;
        const Q lead = x.front().second;
        x = sp_scale(x, 1 / lead);
        const int p = x.front().first;
        for (auto& [q, row] : ech) {
            const Q c = sp_get(row, p);
            if (sgn(c) != 0)
                sp_axpy(row, -c, x);
        }
        ech.emplace_back(p, std::move(x));
        return true;
    };
    for (const auto& w : ds.inner)
        insert(w);
    ds.inner_dim = static_cast<int>(ech.size());
    for (const auto& v : ds.basis)
        if (insert(v))
            ds.outer_reps.push_back(v);
    ds.outer_dim = ds.dim() - ds.inner_dim;
    if (static_cast<int>(ds.outer_reps.size()) != ds.outer_dim)
        throw Error(Err::Internal, "inner witnesses are not derivations at " + ds.degree.str());
}

}  // namespace

GenImages DerivationSpace::images(const QVec& v) const
{
    GenImages d;
    const int nb = static_cast<int>(block_basis.size());
    std::vector<SpVec> all(nb);
    for (int k = 0; k < nb; ++k)
        for (std::size_t c = 0; c < block_basis[k].size(); ++c) {
            const Q& x = v[block_offset[k] + c];
            if (sgn(x) != 0)
                all[k].emplace_back(block_basis[k][c], x);
        }
    for (auto& s : all)
        std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const int ne = degree.size();
    const int nh = nb - ne;
    d.h.assign(all.begin(), all.begin() + nh);
    d.e.assign(all.begin() + nh, all.end());
    return d;
}

QVec DerivationSpace::vectorize(const GenImages& d) const
{
    QVec v(unknowns);
    const int nh = static_cast<int>(block_basis.size()) - degree.size();
    for (int k = 0; k < static_cast<int>(block_basis.size()); ++k) {
        const SpVec& img = k < nh ? d.h.at(k) : d.e.at(k - nh);
        for (const auto& [g, x] : img) {
            auto it = std::find(block_basis[k].begin(), block_basis[k].end(), g);
            if (it == block_basis[k].end())
                throw Error(Err::InputError, "image outside its degree");
            v[block_offset[k] + (it - block_basis[k].begin())] = x;
        }
    }
    return v;
}

bool DerivationSpace::contains(const QVec& v) const
{
    return is_zero(constraints.apply(v));
}

DerivationSpace der_space_n(const GradedAlgebra& alg, const RootVec& beta)
{
    require_cap(alg, beta);
    const int n = alg.rank();
    DerivationSpace ds;
    ds.degree = beta;
    ds.validity_cap = alg.height_cap();
    for (int i = 0; i < n; ++i)
        add_block(ds, alg.basis(beta + RootVec::simple(n, i)));
    std::vector<QVec> rows;
    serre_rows(alg, beta, ds, 0, 0, rows);

    if (beta.is_zero()) {
        for (int i = 0; i < n; ++i) {
            QVec w(ds.unknowns);
            w[ds.block_offset[i]] = 1;
            ds.inner.push_back(std::move(w));
        }
    } else if (beta.positive()) {
        for (int x : alg.basis(beta)) {
            GenImages d;
            for (int i = 0; i < n; ++i)
                d.e.push_back(alg.bracket_trunc(SpVec{{x, Q(1)}}, SpVec{{alg.generator(i), Q(1)}}));
            ds.inner.push_back(ds.vectorize(d));
        }
    }
    finish(ds, std::move(rows));
    return ds;
}

DerivationSpace der_space_b(const BorelAlgebra& bor, const RootVec& beta)
{
    const GradedAlgebra& alg = bor.nil();
    if (!beta.nonneg())
        throw Error(Err::InputError, "Borel derivations are computed for beta in Q+ only");
    require_cap(alg, beta);
    const int n = alg.rank(), hd = bor.h_dim(), shift = hd;
    DerivationSpace ds;
    ds.degree = beta;
    ds.borel = true;
    ds.validity_cap = alg.height_cap();
    const bool zero = beta.is_zero();
    for (int a = 0; a < hd; ++a) {
        std::vector<int> b;
        if (zero)
            for (int c = 0; c < hd; ++c)
                b.push_back(c);
        else
            for (int g : alg.basis(beta))
                b.push_back(g + shift);
        add_block(ds, b);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<int> b;
        for (int g : alg.basis(beta + RootVec::simple(n, i)))
            b.push_back(g + shift);
        add_block(ds, b);
    }

    std::vector<QVec> rows;
    if (zero) {
        // alpha_i(d h_a) = 0
        for (int a = 0; a < hd; ++a)
            for (int i = 0; i < n; ++i) {
                QVec row(ds.unknowns);
                for (int c = 0; c < hd; ++c)
                    row[ds.block_offset[a] + c] = bor.pairing()(i, c);
                rows.push_back(std::move(row));
            }
    } else {
        const auto bb = alg.basis(beta);
        // beta(h_a) d(h_b) - beta(h_b) d(h_a) = 0
        for (int a = 0; a < hd; ++a)
            for (int b = a + 1; b < hd; ++b)
                for (std::size_t c = 0; c < bb.size(); ++c) {
                    QVec row(ds.unknowns);
                    row[ds.block_offset[b] + c] += bor.root_value(beta, a);
                    row[ds.block_offset[a] + c] -= bor.root_value(beta, b);
                    rows.push_back(std::move(row));
                }
        // [d h_a, e_i] + beta(h_a) d(e_i) = 0
        for (int a = 0; a < hd; ++a)
            for (int i = 0; i < n; ++i) {
                const auto tb = alg.basis(beta + RootVec::simple(n, i));
                if (tb.empty())
                    continue;
                std::vector<QVec> block(tb.size(), QVec(ds.unknowns));
                for (std::size_t c = 0; c < bb.size(); ++c)
                    for (const auto& [g, v] : alg.bracket_basis(bb[c], alg.generator(i)))
                        block[g - tb.front()][ds.block_offset[a] + c] += v;
                const Q bh = bor.root_value(beta, a);
                for (std::size_t c = 0; c < tb.size(); ++c)
                    block[c][ds.block_offset[hd + i] + c] += bh;
                for (auto& row : block)
                    rows.push_back(std::move(row));
            }
    }
    serre_rows(alg, beta, ds, hd, shift, rows);

    if (zero) {
        for (int c = 0; c < hd; ++c) {
            QVec w(ds.unknowns);
            for (int i = 0; i < n; ++i)
                w[ds.block_offset[hd + i]] = bor.pairing()(i, c);
            ds.inner.push_back(std::move(w));
        }
    } else {
        for (int x : alg.basis(beta)) {
            GenImages d;
            for (int a = 0; a < hd; ++a) {
                const Q v = -bor.root_value(beta, a);
                d.h.push_back(sgn(v) == 0 ? SpVec{} : SpVec{{x + shift, v}});
            }
            for (int i = 0; i < n; ++i) {
                SpVec img;
                for (const auto& [g, v] : alg.bracket_trunc(SpVec{{x, Q(1)}}, SpVec{{alg.generator(i), Q(1)}}))
                    img.emplace_back(g + shift, v);
                d.e.push_back(std::move(img));
            }
            ds.inner.push_back(ds.vectorize(d));
        }
    }
    finish(ds, std::move(rows));
    return ds;
}

int validity_bound(const GradedAlgebra& alg)
{
    return alg.height_cap() - alg.gcm().serre_span();
}

std::vector<RootVec> candidate_degrees_n(const GradedAlgebra& alg, int H)
{
    const int n = alg.rank();
    std::set<RootVec> out;
    out.insert(RootVec::zero(n));
    for (const auto& d : alg.degrees()) {
        if (d.dim == 0 || d.beta.height() > H)
            continue;
        for (int i = 0; i < n; ++i)
            out.insert(d.beta - RootVec::simple(n, i));
    }
    return {out.begin(), out.end()};
}

bool annihilates_serre(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d)
{
    DerivationSpace ds;
    ds.degree = beta;
    const int n = alg.rank();
    for (int i = 0; i < n; ++i)
        add_block(ds, alg.basis(beta + RootVec::simple(n, i)));
    std::vector<QVec> rows;
    serre_rows(alg, beta, ds, 0, 0, rows);
    const QVec v = ds.vectorize(d);
    for (const auto& r : rows) {
        Q s = 0;
        for (int k = 0; k < ds.unknowns; ++k)
            s += r[k] * v[k];
        if (sgn(s) != 0)
            return false;
    }
    return true;
}

std::vector<SpVec> extend_derivation(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d)
{
    const int total = alg.dim_total();
    std::vector<SpVec> img(total);
    auto apply = [&](const SpVec& x) {
        SpVec out;
        for (const auto& [g, c] : x)
            sp_axpy(out, c, img[g]);
        return out;
    };
    for (int g = 0; g < total; ++g) {
        const RootVec target = alg.degree_of(g) + beta;
        if (!alg.covers(target))
            continue;
        if (alg.height_of(g) == 1) {
            for (int i = 0; i < alg.rank(); ++i)
                if (alg.generator(i) == g)
                    img[g] = d.e[i];
            continue;
        }
        SpVec out;
        for (const auto& [i, c] : alg.certificate(g)) {
            const SpVec e{{alg.generator(i), Q(1)}};
            sp_axpy(out, Q(1), alg.bracket_trunc(d.e[i], c));
            sp_axpy(out, Q(1), alg.bracket_trunc(e, apply(c)));
        }
        img[g] = std::move(out);
    }
    return img;
}

std::vector<OuterFinite> outer_finite(const GradedAlgebra& alg)
{
    const Gcm& g = alg.gcm();
    if (classify(g).kind != Kind::Finite)
        throw Error(Err::NotFiniteType, "outer_finite needs a finite type matrix");
    const RootVec theta = highest_root(g);
    if (alg.height_cap() < theta.height() + 1)
        throw Error(Err::CapTooSmall, "need N >= height(theta) + 1");
    const int n = g.size();
    std::vector<OuterFinite> out;
    for (int i = 0; i < n; ++i) {
        OuterFinite o;
        o.i = i;
        const RootVec target = reflect(g, i, theta);
        o.beta = target - RootVec::simple(n, i);
        const auto b = alg.basis(target);
        if (b.size() != 1)
            throw Error(Err::Internal, "s_i(theta) does not have multiplicity 1");
        o.d.e.assign(n, SpVec{});
        o.d.e[i] = {{b[0], Q(1)}};
        const DerivationSpace ds = der_space_n(alg, o.beta);
        const QVec v = ds.vectorize(o.d);
        o.in_der_space = ds.contains(v);
        auto span = ds.inner;
        const std::size_t r0 = span.empty() ? 0 : rank(QMatrix::from_rows(span, ds.unknowns));
        span.push_back(v);
        o.independent_of_inner = rank(QMatrix::from_rows(span, ds.unknowns)) == r0 + 1;
        out.push_back(std::move(o));
    }
    return out;
}

namespace {

int twist_order(const GcmType& t)
{
    const auto p = t.label.find('~');
    return p == std::string::npos ? 1 : std::stoi(t.label.substr(p + 1));
}

AffineOuterReport affine_at(const GradedAlgebra& alg, int k, int r)
{
    const Gcm& g = alg.gcm();
    const GcmType t = classify(g);
    if (t.kind != Kind::Affine)
        throw Error(Err::NotAffineType, "affine check on " + t.label);
    const AffineMarks m = affine_marks(g);
    const int n = g.size();
    AffineOuterReport rep;
    rep.beta = m.delta * k;
    const int eps = t.epsilon_input;
    const RootVec top = rep.beta + RootVec::simple(n, eps);
    if (alg.height_cap() < top.height() + g.serre_span())
        throw Error(Err::CapTooSmall, "need N >= " + std::to_string(top.height() + g.serre_span()));
    const DerivationSpace ds = der_space_n(alg, rep.beta);
    rep.mult = alg.mult(rep.beta);
    rep.dim = ds.dim();
    rep.inner = ds.inner_dim;
    rep.outer = ds.outer_dim;
    const bool on_r = k % r == 0;
    if (on_r) {
        // Der restricted to d(e_i) = 0 for i != eps, plus inner, must give everything.
        QMatrix c = ds.constraints;
        for (int i = 0; i < n; ++i) {
            if (i == eps)
                continue;
            for (std::size_t col = 0; col < ds.block_basis[i].size(); ++col) {
                QVec row(ds.unknowns);
                row[ds.block_offset[i] + col] = 1;
                c.append_row(row);
            }
        }
        auto special = kernel_basis(c);
        auto span = ds.inner;
        span.insert(span.end(), special.begin(), special.end());
        rep.normalizable = !span.empty() && static_cast<int>(rank(QMatrix::from_rows(span, ds.unknowns))) == rep.dim;
        rep.pass = rep.outer == 1 && rep.dim == rep.mult + 1 && rep.normalizable;
        rep.note = "k r delta with r = " + std::to_string(r);
    } else {
        rep.pass = rep.outer == 0;
        rep.note = "multiple of delta not divisible by r = " + std::to_string(r);
    }
    return rep;
}

struct Expect {
    int dim = -1, outer = -1;
};

SweepReport sweep(const std::vector<RootVec>& degs, int jobs,
                  const std::function<DerivationSpace(const RootVec&)>& compute,
                  const std::function<Expect(const RootVec&)>& expect)
{
    SweepReport rep;
    rep.lines.resize(degs.size());
    std::vector<std::string> errors(degs.size());
    const long count = static_cast<long>(degs.size());
    auto one = [&](long k) {
        try {
            const DerivationSpace ds = compute(degs[k]);
            DegreeReport& line = rep.lines[k];
            line.degree = degs[k];
            line.dim = ds.dim();
            line.inner = ds.inner_dim;
            line.outer = ds.outer_dim;
            const Expect e = expect(degs[k]);
            line.expected_dim = e.dim;
            line.expected_outer = e.outer;
            line.pass = (e.dim < 0 || e.dim == line.dim) && (e.outer < 0 || e.outer == line.outer);
        } catch (const std::exception& ex) {
            errors[k] = ex.what();
        }
    };
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (long k = 0; k < count; ++k)
            one(k);
    } else {
        for (long k = 0; k < count; ++k)
            one(k);
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw Error(Err::CapTooSmall, e);
    for (const auto& l : rep.lines) {
        rep.pass = rep.pass && l.pass;
        rep.h1 += l.degree.is_zero() ? l.inner : l.outer;
    }
    return rep;
}

void require_sweep_cap(const GradedAlgebra& alg, int H)
{
    if (H + alg.gcm().serre_span() > alg.height_cap())
        throw Error(Err::CapTooSmall, "H + max(2 - a_ij) = " + std::to_string(H + alg.gcm().serre_span()) +
                                          " exceeds N = " + std::to_string(alg.height_cap()));
}

}  // namespace

AffineOuterReport affine_outer_check(const GradedAlgebra& alg, int k)
{
    const int r = twist_order(classify(alg.gcm()));
    return affine_at(alg, k * r, r);
}

AffineOuterReport affine_delta_check(const GradedAlgebra& alg, int k)
{
    return affine_at(alg, k, twist_order(classify(alg.gcm())));
}

SweepReport verify_moody(const GradedAlgebra& alg, int H, int jobs)
{
    require_sweep_cap(alg, H);
    const int n = alg.rank();
    auto rep = sweep(
        candidate_degrees_n(alg, H), jobs, [&](const RootVec& b) { return der_space_n(alg, b); },
        [&](const RootVec& b) {
            Expect e;
            e.outer = 0;
            e.dim = b.is_zero() ? n : (b.positive() ? alg.mult(b) : 0);
            return e;
        });
    rep.theorem = "moody";
    rep.pass = rep.pass && rep.h1 == n;
    return rep;
}

SweepReport h1_report(const GradedAlgebra& alg, int H, int jobs)
{
    require_sweep_cap(alg, H);
    const Gcm& g = alg.gcm();
    const int n = g.size();
    const GcmType t = classify(g);
    const auto degs = candidate_degrees_n(alg, H);
    std::function<Expect(const RootVec&)> expect;
    int expected_h1 = n;
    std::string note;
    if (t.kind == Kind::Finite) {
        const RootVec theta = highest_root(g);
        std::map<RootVec, int> outer;
        for (int i = 0; i < n; ++i)
            ++outer[reflect(g, i, theta) - RootVec::simple(n, i)];
        for (const auto& [b, c] : outer)
            if (std::binary_search(degs.begin(), degs.end(), b))
                expected_h1 += c;
        expect = [outer](const RootVec& b) {
            Expect e;
            auto it = outer.find(b);
            e.outer = it == outer.end() ? 0 : it->second;
            return e;
        };
        note = "degree 0 contributes l+1 (ad h modulo ad n+), the d_i contribute l+1";
        if (H < theta.height())
            note += "; H below height(theta), sweep incomplete";
    } else if (t.kind == Kind::Affine) {
        const RootVec delta = affine_marks(g).delta;
        const int r = twist_order(t);
        std::set<RootVec> outer;
        for (int k = 1; (delta * (k * r)).height() <= H; ++k)
            outer.insert(delta * (k * r));
        for (const auto& b : outer)
            if (std::binary_search(degs.begin(), degs.end(), b))
                ++expected_h1;
        expect = [outer](const RootVec& b) {
            Expect e;
            e.outer = outer.count(b) ? 1 : 0;
            return e;
        };
        note = "degree 0 contributes l+1, each k r delta contributes 1";
    } else {
        expect = [&](const RootVec& b) {
            Expect e;
            e.outer = 0;
            e.dim = b.is_zero() ? n : (b.positive() ? alg.mult(b) : 0);
            return e;
        };
        note = "degree 0 contributes l+1, no outer derivations";
    }
    auto rep = sweep(degs, jobs, [&](const RootVec& b) { return der_space_n(alg, b); }, expect);
    rep.theorem = "h1";
    rep.note = note;
    rep.pass = rep.pass && rep.h1 == expected_h1;
    return rep;
}

SweepReport borel_sweep(const BorelAlgebra& bor, int H, int jobs)
{
    const GradedAlgebra& alg = bor.nil();
    require_sweep_cap(alg, H);
    const int n = alg.rank();
    std::vector<RootVec> degs{RootVec::zero(n)};
    for (const auto& d : alg.degrees())
        if (d.beta.height() <= H && d.dim > 0)
            degs.push_back(d.beta);
    const int expected0 = bor.h_dim() * bor.m_prime() + n;
    auto rep = sweep(
        degs, jobs, [&](const RootVec& b) { return der_space_b(bor, b); },
        [&](const RootVec& b) {
            Expect e;
            if (b.is_zero()) {
                e.dim = expected0;
                e.outer = bor.h_dim() * bor.m_prime();
            } else {
                e.dim = alg.mult(b);
                e.outer = 0;
            }
            return e;
        });
    rep.theorem = "borel";
    rep.note = "degree 0: hom(h,c) plus ad h";
    return rep;
}

}  // namespace kmd
