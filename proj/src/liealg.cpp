#include "kmd/liealg.hpp"

#include "free_lie.hpp"
#include "kmd/error.hpp"
#include "kmd/roots.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace kmd {

namespace {

std::string render_word(const Word& w)
{
    static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string s;
    for (char c : w)
        s += digits[static_cast<int>(c)];
    return s;
}

RootVec content(const Word& w, int n)
{
    RootVec r = RootVec::zero(n);
    for (char c : w)
        ++r[static_cast<int>(c)];
    return r;
}

// All beta in Q+\{0} with height <= N and beta <= box, sorted.
std::vector<RootVec> enumerate_degrees(int n, int N, const std::optional<RootVec>& box)
{
    std::vector<RootVec> out;
    RootVec cur = RootVec::zero(n);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n) {
            if (!cur.is_zero())
                out.push_back(cur);
            return;
        }
        const int top = box ? std::min(left, (*box)[i]) : left;
        for (int v = 0; v <= top; ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
        cur[i] = 0;
    };
    rec(0, N);
    std::sort(out.begin(), out.end());
    return out;
}

// Incrementally maintained reduced row echelon form. Pivots are the
// largest columns, every pivot row is fully reduced.
struct Rref {
    std::map<int, SpVec> piv;

    void insert(SpVec r)
    {
        std::vector<std::pair<int, Q>> hits;
        for (const auto& [c, v] : r)
            if (piv.count(c))
                hits.emplace_back(c, v);
        for (const auto& [c, v] : hits)
            sp_axpy(r, -v, piv[c]);
        if (r.empty())
            return;
        const int lead = r.back().first;
        const Q inv = 1 / r.back().second;
        r = sp_scale(r, inv);
        for (auto& [c, row] : piv) {
            Q f = sp_get(row, lead);
            if (sgn(f) != 0)
                sp_axpy(row, -f, r);
        }
        piv.emplace(lead, std::move(r));
    }
};

}  // namespace

class AlgebraBuilder {
public:
    AlgebraBuilder(const Gcm& g, int N, std::optional<RootVec> box)
        : g_(g), n_(g.size()), N_(N), fl_(g.size()), alg_(g, N, std::move(box))
    {
    }

    GradedAlgebra run()
    {
        const auto& box = alg_.box_;
        const auto degs = enumerate_degrees(n_, N_, box);
        const int maxlen = box ? std::min(N_, box->height()) : N_;
        std::map<RootVec, std::vector<int>> words;
        for (const auto& w : FreeLie::lyndon_words(n_, maxlen)) {
            RootVec c = content(w, n_);
            if (!box || c.leq(*box))
                words[c].push_back(fl_.id(w));
        }

        std::map<RootVec, std::vector<IntComb>> serre;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                if (i == j)
                    continue;
                const int r = 1 - g_(i, j);
                RootVec d = RootVec::simple(n_, i) * r + RootVec::simple(n_, j);
                if (d.height() > N_ || (box && !d.leq(*box)))
                    continue;
                IntComb x{{fl_.id(Word(1, static_cast<char>(j))), 1}};
                const int ei = fl_.id(Word(1, static_cast<char>(i)));
                for (int k = 0; k < r; ++k)
                    x = fl_.bracket(ei, x);
                serre[d].push_back(std::move(x));
            }

        int offset = 0;
        for (const auto& beta : degs) {
            Deg& D = work_[beta];
            D.words = words[beta];
            std::sort(D.words.begin(), D.words.end(),
                      [&](int a, int b) { return fl_.word(a) < fl_.word(b); });
            for (int c = 0; c < static_cast<int>(D.words.size()); ++c)
                D.col[D.words[c]] = c;
            const int fdim = static_cast<int>(D.words.size());

            for (const auto& s : serre[beta])
                if (static_cast<int>(D.ideal.piv.size()) < fdim)
                    D.ideal.insert(to_local(D, s, Q(1)));
            for (int i = 0; i < n_ && static_cast<int>(D.ideal.piv.size()) < fdim; ++i) {
                RootVec lower = beta - RootVec::simple(n_, i);
                if (!lower.positive())
                    continue;
                const Deg& L = work_.at(lower);
                const int ei = fl_.id(Word(1, static_cast<char>(i)));
                for (const auto& [p, row] : L.ideal.piv) {
                    if (static_cast<int>(D.ideal.piv.size()) == fdim)
                        break;
                    SpVec acc;
                    for (const auto& [c, v] : row)
                        sp_axpy(acc, v, to_local(D, fl_.bracket(ei, L.words[c]), Q(1)));
                    D.ideal.insert(std::move(acc));
                }
            }

            DegreeInfo info;
            info.beta = beta;
            info.offset = offset;
            info.free_dim = fdim;
            std::vector<int> gidx(fdim, -1);
            for (int c = 0; c < fdim; ++c)
                if (!D.ideal.piv.count(c)) {
                    gidx[c] = offset + info.dim++;
                    alg_.labels_.push_back(render_word(fl_.word(D.words[c])));
                    basis_words_.push_back(D.words[c]);
                }
            offset += info.dim;
            D.proj.resize(fdim);
            for (int c = 0; c < fdim; ++c) {
                auto it = D.ideal.piv.find(c);
                if (it == D.ideal.piv.end()) {
                    D.proj[c] = {{gidx[c], Q(1)}};
                    continue;
                }
                for (const auto& [c2, v] : it->second)
                    if (c2 != c)
                        D.proj[c].emplace_back(gidx[c2], -v);
            }
            alg_.degrees_.push_back(std::move(info));
        }
        alg_.index_degrees();

        const int total = alg_.dim_total();
        for (int u = 0; u < total; ++u)
            for (int v = u + 1; v < total; ++v) {
                RootVec t = alg_.degree_of(u) + alg_.degree_of(v);
                if (!alg_.covers(t))
                    continue;
                const Deg& T = work_.at(t);
                SpVec out;
                for (const auto& [w, c] : fl_.bracket(basis_words_[u], basis_words_[v]))
                    sp_axpy(out, qint(c), T.proj[T.col.at(w)]);
                if (!out.empty())
                    alg_.table_.emplace(alg_.key(u, v), std::move(out));
            }
        return std::move(alg_);
    }

private:
    struct Deg {
        std::vector<int> words;
        std::unordered_map<int, int> col;
        Rref ideal;
        std::vector<SpVec> proj;
    };

    SpVec to_local(const Deg& D, const IntComb& x, const Q& scale)
    {
        SpVec out;
        out.reserve(x.size());
        for (const auto& [w, c] : x)
            out.emplace_back(D.col.at(w), scale * qint(c));
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    const Gcm& g_;
    int n_, N_;
    FreeLie fl_;
    GradedAlgebra alg_;
    std::map<RootVec, Deg> work_;
    std::vector<int> basis_words_;
};

std::vector<RootVec> degrees_up_to(int n, int N, const std::optional<RootVec>& box)
{
    return enumerate_degrees(n, N, box);
}

GradedAlgebra build_nilradical(const Gcm& g, int N, std::optional<RootVec> box)
{
    if (N < 2 || N < g.serre_span())
        throw Error(Err::CapTooSmall, "height cap " + std::to_string(N) + " below Serre span " +
                                          std::to_string(g.serre_span()));
    if (box && (box->size() != g.size() || !box->nonneg()))
        throw Error(Err::InputError, "bad degree box");
    return AlgebraBuilder(g, N, std::move(box)).run();
}

void GradedAlgebra::index_degrees()
{
    deg_index_.clear();
    deg_of_.assign(labels_.size(), -1);
    label_index_.clear();
    for (int k = 0; k < static_cast<int>(degrees_.size()); ++k) {
        deg_index_.emplace(degrees_[k].beta, k);
        for (int j = 0; j < degrees_[k].dim; ++j)
            deg_of_[degrees_[k].offset + j] = k;
    }
    for (int g = 0; g < static_cast<int>(labels_.size()); ++g)
        label_index_.emplace(labels_[g], g);
    gens_.assign(rank(), -1);
    for (int i = 0; i < rank(); ++i) {
        auto b = basis(RootVec::simple(rank(), i));
        if (b.size() != 1)
            throw Error(Err::Internal, "generator degree does not have dimension 1");
        gens_[i] = b[0];
    }
}

int GradedAlgebra::degree_index(const RootVec& beta) const
{
    auto it = deg_index_.find(beta);
    return it == deg_index_.end() ? -1 : it->second;
}

bool GradedAlgebra::covers(const RootVec& beta) const
{
    return beta.positive() && beta.height() <= cap_ && (!box_ || beta.leq(*box_));
}

int GradedAlgebra::mult(const RootVec& beta) const
{
    if (!beta.positive())
        return 0;
    if (beta.height() > cap_)
        throw Error(Err::HeightOverflow, beta.str() + " above cap " + std::to_string(cap_));
    if (box_ && !beta.leq(*box_))
        throw Error(Err::OutOfBox, beta.str());
    return degrees_[deg_index_.at(beta)].dim;
}

int GradedAlgebra::free_dim(const RootVec& beta) const
{
    mult(beta);
    if (!beta.positive())
        return 0;
    return degrees_[deg_index_.at(beta)].free_dim;
}

std::vector<int> GradedAlgebra::basis(const RootVec& beta) const
{
    std::vector<int> out;
    if (!covers(beta))
        return out;
    const auto& d = degrees_[deg_index_.at(beta)];
    for (int j = 0; j < d.dim; ++j)
        out.push_back(d.offset + j);
    return out;
}

int GradedAlgebra::index_of_label(const std::string& label) const
{
    auto it = label_index_.find(label);
    return it == label_index_.end() ? -1 : it->second;
}

SpVec GradedAlgebra::bracket_basis(int u, int v) const
{
    RootVec t = degree_of(u) + degree_of(v);
    if (!covers(t))
        throw Error(Err::HeightOverflow, "bracket degree " + t.str() + " not covered");
    return bracket_trunc(u, v);
}

SpVec GradedAlgebra::bracket_trunc(int u, int v) const
{
    if (u == v)
        return {};
    const bool neg = u > v;
    auto it = table_.find(neg ? key(v, u) : key(u, v));
    if (it == table_.end())
        return {};
    return neg ? sp_scale(it->second, Q(-1)) : it->second;
}

SpVec GradedAlgebra::bracket_trunc(const SpVec& x, const SpVec& y) const
{
    SpVec out;
    for (const auto& [u, a] : x)
        for (const auto& [v, b] : y) {
            if (u == v)
                continue;
            const bool neg = u > v;
            auto it = table_.find(neg ? key(v, u) : key(u, v));
            if (it != table_.end())
                sp_axpy(out, neg ? Q(-a * b) : Q(a * b), it->second);
        }
    return out;
}

LieElt GradedAlgebra::bracket(const LieElt& x, const LieElt& y) const
{
    LieElt r;
    r.degree = x.degree + y.degree;
    if (x.is_zero() || y.is_zero())
        return r;
    if (!covers(r.degree))
        throw Error(Err::HeightOverflow, "bracket degree " + r.degree.str() + " not covered");
    r.coords = bracket_trunc(x.coords, y.coords);
    return r;
}

LieElt GradedAlgebra::gen(int i) const
{
    return basis_elt(gens_[i]);
}

LieElt GradedAlgebra::basis_elt(int g) const
{
    return {degree_of(g), {{g, Q(1)}}};
}

LieElt GradedAlgebra::make(const RootVec& beta, const SpVec& coords) const
{
    for (const auto& [g, v] : coords)
        if (degree_of(g) != beta)
            throw Error(Err::InputError, "coordinate outside degree " + beta.str());
    return {beta, coords};
}

const GradedAlgebra::Certificate& GradedAlgebra::certificate(int g) const
{
    std::call_once(lazy_->once, [this] {
        auto& certs = lazy_->certs;
        certs.assign(dim_total(), {});
        for (const auto& d : degrees_) {
            if (d.beta.height() < 2 || d.dim == 0)
                continue;
            std::vector<std::pair<int, int>> cols;  // (i, basis element of beta - alpha_i)
            for (int i = 0; i < rank(); ++i)
                for (int b : basis(d.beta - RootVec::simple(rank(), i)))
                    cols.emplace_back(i, b);
            QMatrix m(d.dim, cols.size());
            for (std::size_t k = 0; k < cols.size(); ++k)
                for (const auto& [t, v] : bracket_basis(gens_[cols[k].first], cols[k].second))
                    m(t - d.offset, k) = v;
            std::vector<QVec> rhs;
            for (int j = 0; j < d.dim; ++j) {
                QVec e(d.dim);
                e[j] = 1;
                rhs.push_back(std::move(e));
            }
            auto sol = solve_many(m, rhs);
            for (int j = 0; j < d.dim; ++j) {
                Certificate c;
                for (std::size_t k = 0; k < cols.size(); ++k) {
                    if (sgn(sol[j][k]) == 0)
                        continue;
                    const int i = cols[k].first;
                    if (c.empty() || c.back().first != i)
                        c.emplace_back(i, SpVec{});
                    c.back().second.emplace_back(cols[k].second, sol[j][k]);
                }
                certs[d.offset + j] = std::move(c);
            }
        }
    });
    return lazy_->certs.at(g);
}

std::string GradedAlgebra::check_generators() const
{
    for (int i = 0; i < rank(); ++i) {
        RootVec a = RootVec::simple(rank(), i);
        if (mult(a) != 1)
            return "dim at simple root " + std::to_string(i) + " is not 1";
    }
    return "";
}

std::string GradedAlgebra::check_serre() const
{
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j) {
            if (i == j)
                continue;
            const int r = 1 - gcm_(i, j);
            RootVec d = RootVec::simple(rank(), i) * r + RootVec::simple(rank(), j);
            if (!covers(d))
                continue;
            LieElt x = gen(j);
            for (int k = 0; k < r; ++k)
                x = bracket(gen(i), x);
            if (!x.is_zero())
                return "Serre element (" + std::to_string(i) + "," + std::to_string(j) + ") is nonzero";
        }
    return "";
}

std::string GradedAlgebra::check_antisymmetry_jacobi(int max_triples) const
{
    const int total = dim_total();
    for (const auto& [k, v] : table_) {
        const int u = static_cast<int>(k / labels_.size()), w = static_cast<int>(k % labels_.size());
        if (u >= w)
            return "table key out of order";
        RootVec t = degree_of(u) + degree_of(w);
        for (const auto& [g, c] : v)
            if (g < 0 || g >= total || degree_of(g) != t)
                return "bracket of " + labels_[u] + "," + labels_[w] + " has wrong degree";
    }
    long count = 0;
    for (int a = 0; a < total; ++a)
        for (int b = a + 1; b < total; ++b) {
            RootVec ab = degree_of(a) + degree_of(b);
            if (!covers(ab))
                continue;
            for (int c = b + 1; c < total; ++c) {
                if (!covers(ab + degree_of(c)))
                    continue;
                if (max_triples >= 0 && count++ >= max_triples)
                    return "";
                SpVec s = bracket_trunc(SpVec{{a, Q(1)}}, bracket_trunc(b, c));
                sp_axpy(s, Q(1), bracket_trunc(SpVec{{b, Q(1)}}, bracket_trunc(c, a)));
                sp_axpy(s, Q(1), bracket_trunc(SpVec{{c, Q(1)}}, bracket_trunc(a, b)));
                if (!s.empty())
                    return "Jacobi fails on " + labels_[a] + "," + labels_[b] + "," + labels_[c];
            }
        }
    return "";
}

namespace {

int mobius_int(int d)
{
    int m = 1;
    for (int p = 2; p * p <= d; ++p)
        if (d % p == 0) {
            d /= p;
            if (d % p == 0)
                return 0;
            m = -m;
        }
    return d > 1 ? -m : m;
}

}  // namespace

Z witt_dimension(const RootVec& beta)
{
    if (!beta.positive())
        return 0;
    const int n = beta.height();
    int g = 0;
    for (int v : beta.c)
        g = std::gcd(g, v);
    Z total = 0;
    for (int d = 1; d <= g; ++d) {
        if (g % d != 0)
            continue;
        Z multinom;
        mpz_fac_ui(multinom.get_mpz_t(), n / d);
        for (int v : beta.c) {
            Z f;
            mpz_fac_ui(f.get_mpz_t(), v / d);
            multinom /= f;
        }
        total += mobius_int(d) * multinom;
    }
    return total / n;
}

namespace {

// Peterson recurrence over a downward closed, height sorted degree list.
std::map<RootVec, int> peterson_over(const Gcm& g, const std::vector<RootVec>& degs)
{
    const BilinearForm form(g);
    const int n = g.size();
    std::map<RootVec, Q> c;
    std::map<RootVec, int> mult;
    for (const auto& beta : degs) {
        if (beta.height() == 1) {
            c[beta] = 1;
            mult[beta] = 1;
            continue;
        }
        Q rhs = 0;
        for (const auto& [b1, c1] : c) {
            if (!b1.leq(beta) || b1 == beta)
                continue;
            RootVec b2 = beta - b1;
            auto it = c.find(b2);
            if (it == c.end() || sgn(c1) == 0 || sgn(it->second) == 0)
                continue;
            rhs += qint(form(b1, b2)) * c1 * it->second;
        }
        long long coef = form(beta, beta);
        for (int i = 0; i < n; ++i)
            coef -= 2 * form.d(i) * beta[i];
        int gd = 0;
        for (int v : beta.c)
            gd = std::gcd(gd, v);
        if (coef == 0) {
            // 2(rho|beta) - (beta|beta) > 0 on every non-simple positive root.
            if (sgn(rhs) != 0)
                throw Error(Err::Internal, "Peterson recurrence inconsistent at " + beta.str());
            Q cb = 0;
            for (int k = 2; k <= gd; ++k)
                if (gd % k == 0) {
                    RootVec sub = beta;
                    for (int& v : sub.c)
                        v /= k;
                    cb += Q(mult[sub], k);
                }
            c[beta] = cb;
            mult[beta] = 0;
            continue;
        }
        c[beta] = rhs / qint(coef);
        Q m = 0;
        for (int k = 1; k <= gd; ++k)
            if (gd % k == 0) {
                RootVec sub = beta;
                for (int& v : sub.c)
                    v /= k;
                m += Q(mobius_int(k), k) * c[sub];
            }
        if (m.get_den() != 1 || sgn(m) < 0)
            throw Error(Err::Internal, "non-integral multiplicity at " + beta.str());
        mult[beta] = static_cast<int>(m.get_num().get_si());
    }
    return mult;
}

}  // namespace

int peterson_mult_oracle(const Gcm& g, const RootVec& beta)
{
    if (!beta.positive())
        return 0;
    return peterson_over(g, enumerate_degrees(g.size(), beta.height(), beta)).at(beta);
}

std::map<RootVec, int> peterson_table(const Gcm& g, int H)
{
    return peterson_over(g, enumerate_degrees(g.size(), H, std::nullopt));
}

BorelAlgebra::BorelAlgebra(std::shared_ptr<const GradedAlgebra> nil) : nil_(std::move(nil))
{
    const Gcm& g = nil_->gcm();
    const int n = g.size();
    QMatrix at(n, n);
    for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
            at(j, a) = g(a, j);
    m_ = static_cast<int>(kmd::rank(at));
    std::vector<QVec> cols;
    for (int a = 0; a < n; ++a) {
        QVec col(n);
        for (int j = 0; j < n; ++j)
            col[j] = at(j, a);
        cols.push_back(col);
    }
    int r = m_;
    for (int k = 0; k < n && r < n; ++k) {
        QVec unit(n);
        unit[k] = 1;
        auto trial = cols;
        trial.push_back(unit);
        const int r2 = static_cast<int>(kmd::rank(QMatrix::from_rows(trial, n)));
        if (r2 > r) {
            cols = std::move(trial);
            extra_.push_back(k);
            r = r2;
        }
    }
    h_dim_ = static_cast<int>(cols.size());
    if (h_dim_ != 2 * n - m_ || r != n)
        throw Error(Err::Internal, "realization has wrong dimension");
    pairing_ = QMatrix(n, h_dim_);
    for (int a = 0; a < h_dim_; ++a)
        for (int j = 0; j < n; ++j)
            pairing_(j, a) = cols[a][j];
    for (auto& v : kernel_basis(at)) {
        v.resize(h_dim_);
        center_.push_back(std::move(v));
    }
}

Q BorelAlgebra::root_value(const RootVec& beta, int a) const
{
    Q s = 0;
    for (int j = 0; j < beta.size(); ++j)
        s += beta[j] * pairing_(j, a);
    return s;
}

Q BorelAlgebra::root_value(const RootVec& beta, const QVec& h) const
{
    Q s = 0;
    for (int a = 0; a < h_dim_; ++a)
        if (sgn(h[a]) != 0)
            s += root_value(beta, a) * h[a];
    return s;
}

RootVec BorelAlgebra::degree_of(int b) const
{
    return b < h_dim_ ? RootVec::zero(nil_->rank()) : nil_->degree_of(b - h_dim_);
}

SpVec BorelAlgebra::bracket_trunc(int u, int v) const
{
    if (u < h_dim_ && v < h_dim_)
        return {};
    if (u < h_dim_) {
        Q val = root_value(nil_->degree_of(v - h_dim_), u);
        return sgn(val) == 0 ? SpVec{} : SpVec{{v, val}};
    }
    if (v < h_dim_) {
        Q val = -root_value(nil_->degree_of(u - h_dim_), v);
        return sgn(val) == 0 ? SpVec{} : SpVec{{u, val}};
    }
    SpVec out;
    for (const auto& [g, c] : nil_->bracket_trunc(u - h_dim_, v - h_dim_))
        out.emplace_back(g + h_dim_, c);
    return out;
}

SpVec BorelAlgebra::bracket_trunc(const SpVec& x, const SpVec& y) const
{
    SpVec out;
    for (const auto& [u, a] : x)
        for (const auto& [v, b] : y)
            sp_axpy(out, a * b, bracket_trunc(u, v));
    return out;
}

BorelAlgebra build_borel(const Gcm& g, int N)
{
    return BorelAlgebra(std::make_shared<GradedAlgebra>(build_nilradical(g, N)));
}

}  // namespace kmd
