#include "kmd/qlinalg.hpp"

#include "kmd/error.hpp"

#include <algorithm>
#include <utility>

namespace kmd {

QMatrix::QMatrix(std::initializer_list<std::initializer_list<long>> init)
{
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_)
            throw Error(Err::InputError, "ragged matrix literal");
        for (long v : r)
            a_.emplace_back(v);
    }
}

QMatrix QMatrix::identity(std::size_t n)
{
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVec>& rows, std::size_t cols)
{
    QMatrix m(0, cols);
    for (const auto& r : rows)
        m.append_row(r);
    return m;
}

QVec QMatrix::row(std::size_t i) const
{
    return QVec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void QMatrix::append_row(const QVec& r)
{
    if (r.size() != cols_)
        throw Error(Err::InputError, "row length mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
}

QMatrix QMatrix::transpose() const
{
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

QVec QMatrix::apply(const QVec& v) const
{
    if (v.size() != cols_)
        throw Error(Err::InputError, "vector length mismatch");
    QVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn((*this)(i, j)) != 0 && sgn(v[j]) != 0)
                out[i] += (*this)(i, j) * v[j];
    return out;
}

QMatrix QMatrix::operator*(const QMatrix& o) const
{
    if (cols_ != o.rows_)
        throw Error(Err::InputError, "matrix product shape mismatch");
    QMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Q& a = (*this)(i, k);
            if (sgn(a) == 0)
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                p(i, j) += a * o(k, j);
        }
    return p;
}

bool QMatrix::operator==(const QMatrix& o) const
{
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

namespace {

std::vector<Z> integer_row(const QMatrix& m, std::size_t i)
{
    Z l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    std::vector<Z> r(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        r[j] = m(i, j).get_num() * (l / m(i, j).get_den());
    return r;
}

void eliminate_row(std::vector<Z>& row, const std::vector<Z>& piv, std::size_t c, const Z& prev)
{
    const Z f = row[c];
    for (std::size_t j = c + 1; j < row.size(); ++j) {
        Z t = piv[c] * row[j];
        if (f != 0)
            t -= f * piv[j];
        mpz_divexact(row[j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
    }
    row[c] = 0;
}

}  // namespace

Echelon bareiss(const QMatrix& m, Exec ex, std::size_t pivot_limit)
{
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<Z>> a(R);
    for (std::size_t i = 0; i < R; ++i)
        a[i] = integer_row(m, i);

    Echelon e;
    e.cols = C;
    Z prev = 1;
    std::size_t k = 0;
    for (std::size_t c = 0; c < std::min(C, pivot_limit) && k < R; ++c) {
        std::size_t p = k;
        while (p < R && a[p][c] == 0)
            ++p;
        if (p == R)
            continue;
        std::swap(a[k], a[p]);
        const auto& piv = a[k];
        const long lo = static_cast<long>(k + 1), hi = static_cast<long>(R);
        if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (long i = lo; i < hi; ++i)
                eliminate_row(a[i], piv, c, prev);
        } else {
            for (long i = lo; i < hi; ++i)
                eliminate_row(a[i], piv, c, prev);
        }
        prev = a[k][c];
        e.pivots.push_back(c);
        ++k;
    }
    e.rows = std::move(a);
    return e;
}

std::size_t rank(const QMatrix& m, Exec ex)
{
    return bareiss(m, ex).rank();
}

namespace {

// Back substitution on the integer echelon form with prescribed free values.
QVec back_substitute(const Echelon& e, QVec x, std::size_t ncols, std::size_t rhs_col)
{
    for (std::size_t k = e.rank(); k-- > 0;) {
        const auto& r = e.rows[k];
        const std::size_t p = e.pivots[k];
        Q s = rhs_col < r.size() ? Q(r[rhs_col]) : Q(0);
        for (std::size_t j = p + 1; j < ncols; ++j)
            if (r[j] != 0 && sgn(x[j]) != 0)
                s -= Q(r[j]) * x[j];
        x[p] = s / Q(r[p]);
    }
    return x;
}

}  // namespace

std::vector<QVec> kernel_basis(const QMatrix& m, Exec ex)
{
    const Echelon e = bareiss(m, ex);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots)
        is_pivot[p] = true;
    std::vector<QVec> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        QVec x(m.cols());
        x[f] = 1;
        out.push_back(primitive(back_substitute(e, std::move(x), m.cols(), SIZE_MAX)));
    }
    return out;
}

QVec solve(const QMatrix& m, const QVec& b, Exec ex)
{
    return solve_many(m, {b}, ex).at(0);
}

std::vector<QVec> solve_many(const QMatrix& m, const std::vector<QVec>& bs, Exec ex)
{
    const std::size_t C = m.cols(), K = bs.size();
    QMatrix aug(m.rows(), C + K);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < C; ++j)
            aug(i, j) = m(i, j);
    for (std::size_t k = 0; k < K; ++k) {
        if (bs[k].size() != m.rows())
            throw Error(Err::InputError, "rhs length mismatch");
        for (std::size_t i = 0; i < m.rows(); ++i)
            aug(i, C + k) = bs[k][i];
    }
    const Echelon e = bareiss(aug, ex, C);
    std::vector<QVec> out;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = e.rank(); i < e.rows.size(); ++i)
            if (e.rows[i][C + k] != 0)
                throw Error(Err::NoSolution, "inconsistent system");
        out.push_back(back_substitute(e, QVec(C), C, C + k));
    }
    return out;
}

QVec primitive(const QVec& v)
{
    Z l = 1;
    for (const auto& q : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    Z g = 0;
    for (const auto& q : v)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
    if (g == 0)
        return v;
    int sign = 1;
    for (const auto& q : v)
        if (sgn(q) != 0) {
            sign = sgn(q);
            break;
        }
    QVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = Q(v[i].get_num() * (l / v[i].get_den()) / g * sign);
    return out;
}

bool is_zero(const QVec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Q& q) { return sgn(q) == 0; });
}

std::string to_string(const Q& q)
{
    Q c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

void sp_axpy(SpVec& y, const Q& a, const SpVec& x)
{
    if (sgn(a) == 0 || x.empty())
        return;
    SpVec out;
    out.reserve(y.size() + x.size());
    auto i = y.begin();
    auto j = x.begin();
    while (i != y.end() || j != x.end()) {
        if (j == x.end() || (i != y.end() && i->first < j->first)) {
            out.push_back(std::move(*i));
            ++i;
        } else if (i == y.end() || j->first < i->first) {
            out.emplace_back(j->first, a * j->second);
            ++j;
        } else {
            Q s = i->second + a * j->second;
            if (sgn(s) != 0)
                out.emplace_back(i->first, std::move(s));
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

SpVec sp_scale(const SpVec& x, const Q& a)
{
    SpVec out;
    if (sgn(a) == 0)
        return out;
    out.reserve(x.size());
    for (const auto& [i, v] : x)
        out.emplace_back(i, v * a);
    return out;
}

SpVec sp_add(const SpVec& x, const SpVec& y)
{
    SpVec out = x;
    sp_axpy(out, Q(1), y);
    return out;
}

SpVec sp_from_dense(const QVec& v, int offset)
{
    SpVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0)
            out.emplace_back(static_cast<int>(i) + offset, v[i]);
    return out;
}

Q sp_get(const SpVec& x, int idx)
{
    auto it = std::lower_bound(x.begin(), x.end(), idx,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != x.end() && it->first == idx)
        return it->second;
    return Q(0);
}

std::size_t sp_rank(const std::vector<SpVec>& vs)
{
    std::vector<std::pair<int, SpVec>> ech;
    for (SpVec x : vs) {
        for (const auto& [p, row] : ech) {
            const Q c = sp_get(x, p);
            if (sgn(c) != 0)
                sp_axpy(x, -c, row);
        }
        if (x.empty())
            continue;
        x = sp_scale(x, 1 / x.front().second);
        const int p = x.front().first;
        for (auto& [q, row] : ech) {
            const Q c = sp_get(row, p);
            if (sgn(c) != 0)
                sp_axpy(row, -c, x);
        }
        ech.emplace_back(p, std::move(x));
    }
    return ech.size();
}

}  // namespace kmd
