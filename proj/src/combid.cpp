#include "kmd/combid.hpp"

#include "kmd/error.hpp"

#include <map>

namespace kmd {

namespace {

Q qz(const Z& z)
{
    return Q(z);
}

Q qfrac(const Z& num, const Z& den)
{
    Q q(num, den);
    q.canonicalize();
    return q;
}

int sign_pow(long e)
{
    return e % 2 == 0 ? 1 : -1;
}

IdentityReport make(std::string name, std::vector<std::pair<std::string, long>> params, Q lhs, Q rhs)
{
    IdentityReport r;
    r.name = std::move(name);
    r.params = std::move(params);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.pass = r.lhs == r.rhs;
    return r;
}

// Integral over [0,1] of (1-x)^a x^b by expanding into monomials.
Q beta_integral(long a, long b)
{
    std::vector<Q> poly{Q(1)};  // coefficients of x^m
    for (long t = 0; t < a; ++t) {
        std::vector<Q> next(poly.size() + 1);
        for (std::size_t m = 0; m < poly.size(); ++m) {
            next[m] += poly[m];
            next[m + 1] -= poly[m];
        }
        poly = std::move(next);
    }
    Q s = 0;
    for (std::size_t m = 0; m < poly.size(); ++m)
        s += poly[m] / qint(static_cast<long long>(m) + b + 1);
    return s;
}

Q alternating_beta(long r1, long k0)
{
    Q s = 0;
    for (long k = 0; k <= k0 + 1; ++k)
        s += Q(sign_pow(k) * binomial(k0 + 1, k)) / qint(r1 - k0 + k);
    return s;
}

// (r1+1)(r1+2)...(r1+r-k0) / (r-k0-1)!
Q closed_prefactor(long r, long r1, long k0)
{
    Z num = 1, den = 1;
    for (long t = r1 + 1; t <= r1 + r - k0; ++t)
        num *= t;
    for (long t = 2; t <= r - k0 - 1; ++t)
        den *= t;
    return qfrac(num, den);
}

}  // namespace

Z binomial(long n, long k)
{
    if (n < 0 || k < 0 || k > n)
        return 0;
    Z out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

IdentityReport vandermonde_check(long r, long r1, long k0, long k)
{
    Z lhs = 0;
    for (long j = 0; j <= k; ++j)
        lhs += binomial(r + 1, j + 1) * binomial(r1 - k0 - 1, k - j);
    const Z rhs = binomial(r + r1 - k0, k + 1);
    auto rep = make("vandermonde", {{"r", r}, {"r1", r1}, {"k0", k0}, {"k", k}}, qz(lhs), qz(rhs));
    const Z corrected = rhs - binomial(r1 - k0 - 1, k + 1);
    rep.diagnostics = {{"used_range", k >= r1 - k0 - 1 ? "true" : "false"},
                       {"rhs_minus_C(r1-k0-1,k+1)", corrected.get_str()},
                       {"matches_corrected", lhs == corrected ? "true" : "false"}};
    return rep;
}

IdentityReport beta_sum(long r1, long k0)
{
    if (r1 < 1 || k0 < 0 || k0 > r1 - 1)
        throw Error(Err::InputError, "beta_sum needs 0 <= k0 <= r1 - 1");
    const Q s = alternating_beta(r1, k0);
    const Q b = beta_integral(k0 + 1, r1 - k0 - 1);
    auto rep = make("beta_sum", {{"r1", r1}, {"k0", k0}}, s, b);
    rep.pass = rep.pass && sgn(s) != 0;
    return rep;
}

IdentityReport coeff_3_16(long r, long r1, long k0)
{
    if (!(r > r1 && r1 > 0 && k0 >= 0 && k0 <= r1 - 1))
        throw Error(Err::InputError, "coeff needs r > r1 > 0 and 0 <= k0 <= r1 - 1");
    Q sum = 0;
    for (long k = r1 - k0 - 1; k <= r1; ++k)
        sum += qfrac(sign_pow(r1 - k) * binomial(r + r1 - k0, k + 1) * binomial(r + r1 - k0 - k - 1, r1 - k) *
                     binomial(k0 + 1, r1 - k),
                 binomial(r1, k));
    const Q integral = beta_integral(k0 + 1, r1 - k0 - 1);
    const Q closed = sign_pow(r1) * closed_prefactor(r, r1, k0) * integral;
    auto rep = make("coeff", {{"r", r}, {"r1", r1}, {"k0", k0}}, sum, closed);
    rep.pass = rep.pass && sgn(sum) != 0;

    // Intermediate form, summed over k = 0..k0+1.
    Q middle = 0;
    for (long k = 0; k <= k0 + 1; ++k) {
        const Q t = qfrac(binomial(k0 + 1, k) * binomial(r + r1 - k0, r - k) * binomial(r - k, k0 + 1 - k),
                      binomial(r1, k0 + 1 - k));
        middle += sign_pow(r1 - k) * t;
    }
    rep.diagnostics = {{"nonzero", sgn(sum) != 0 ? "true" : "false"},
                       {"middle_form", to_string(middle)},
                       {"middle_equals_sum", middle == sum ? "true" : "false"},
                       {"middle_equals_closed", middle == closed ? "true" : "false"},
                       {"closed_with_(-1)^(k0+1)", to_string(sign_pow(k0 + 1) * closed_prefactor(r, r1, k0) * integral)}};
    return rep;
}

IdentityReport sl2_string_check(long r, long k)
{
    if (r < 0 || k < 0 || k > r)
        throw Error(Err::InputError, "sl2 check needs 0 <= k <= r");
    const std::size_t d = static_cast<std::size_t>(r) + 1;
    // Basis v_j = e^j v_0 with v_0 the lowest weight vector.
    QMatrix E(d, d), F(d, d), H(d, d);
    for (std::size_t j = 0; j + 1 < d; ++j)
        E(j + 1, j) = 1;
    for (std::size_t j = 0; j < d; ++j)
        H(j, j) = qint(-r + 2 * static_cast<long long>(j));
    // F lowers with F v_0 = 0; [E,F] = H fixes the constants one step at a time.
    Q c = 0;
    for (std::size_t j = 1; j < d; ++j) {
        c += qint(r - 2 * static_cast<long long>(j - 1));
        F(j - 1, j) = c;
    }
    auto sub = [](const QMatrix& a, const QMatrix& b) {
        QMatrix m = a;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                m(i, j) -= b(i, j);
        return m;
    };
    auto scaled = [](QMatrix m, long s) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) *= s;
        return m;
    };
    const bool relations = sub(E * F, F * E) == H && sub(H * E, E * H) == scaled(E, 2) &&
                           sub(H * F, F * H) == scaled(F, -2);
    QVec v(d);
    v[0] = 1;
    for (long t = 0; t < k; ++t)
        v = E.apply(v);
    v = F.apply(v);
    const Q coeff = k == 0 ? Q(0) : v[k - 1];
    QVec expected_shape(d);
    if (k > 0)
        expected_shape[k - 1] = coeff;
    auto rep = make("sl2", {{"r", r}, {"k", k}}, coeff, qint(k * (r + 1 - k)));
    rep.pass = rep.pass && relations && v == expected_shape;
    rep.diagnostics = {{"sl2_relations", relations ? "true" : "false"}};
    return rep;
}

IdentitySweep identity_sweep(long rmax, long sl2_max)
{
    IdentitySweep sw;
    std::map<std::string, std::pair<int, int>> fam;
    auto add = [&](IdentityReport rep) {
        auto& f = fam[rep.name];
        ++f.first;
        ++sw.total;
        if (!rep.pass) {
            ++f.second;
            ++sw.failed;
        }
        sw.reports.push_back(std::move(rep));
    };
    for (long r = 0; r <= rmax; ++r)
        for (long r1 = 0; r1 <= r; ++r1)
            for (long k0 = 0; k0 < r1; ++k0)
                for (long k = 0; k <= r1; ++k)
                    add(vandermonde_check(r, r1, k0, k));
    for (long r1 = 1; r1 <= rmax; ++r1)
        for (long k0 = 0; k0 < r1; ++k0)
            add(beta_sum(r1, k0));
    for (long r = 2; r <= rmax; ++r)
        for (long r1 = 1; r1 < r; ++r1)
            for (long k0 = 0; k0 < r1; ++k0)
                add(coeff_3_16(r, r1, k0));
    for (long r = 0; r <= sl2_max; ++r)
        for (long k = 0; k <= r; ++k)
            add(sl2_string_check(r, k));
    for (const auto& [name, tf] : fam)
        sw.per_family.emplace_back(name, tf);
    return sw;
}

}  // namespace kmd
