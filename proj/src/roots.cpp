#include "kmd/roots.hpp"

#include "kmd/error.hpp"

#include <algorithm>
#include <deque>

namespace kmd {

BilinearForm::BilinearForm(const Gcm& g)
{
    d_ = symmetrizer(g).d;
    const int n = g.size();
    b_.assign(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b_[i][j] = d_[i] * g(i, j);
}

long long BilinearForm::operator()(const RootVec& a, const RootVec& b) const
{
    long long s = 0;
    for (int i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (int j = 0; j < b.size(); ++j)
                s += a[i] * b_[i][j] * b[j];
    return s;
}

int pairing(const Gcm& g, int i, const RootVec& beta)
{
    int s = 0;
    for (int j = 0; j < g.size(); ++j)
        s += beta[j] * g(i, j);
    return s;
}

RootVec reflect(const Gcm& g, int i, const RootVec& beta)
{
    RootVec r = beta;
    r[i] -= pairing(g, i, beta);
    return r;
}

std::vector<RootVec> real_roots_up_to_height(const Gcm& g, int H)
{
    const int n = g.size();
    std::set<RootVec> found;
    std::deque<RootVec> todo;
    for (int i = 0; i < n && H >= 1; ++i) {
        found.insert(RootVec::simple(n, i));
        todo.push_back(RootVec::simple(n, i));
    }
    while (!todo.empty()) {
        RootVec b = todo.front();
        todo.pop_front();
        for (int i = 0; i < n; ++i) {
            RootVec r = reflect(g, i, b);
            if (r.positive() && r.height() <= H && found.insert(r).second)
                todo.push_back(r);
        }
    }
    return {found.begin(), found.end()};
}

std::vector<RootVec> finite_positive_roots(const Gcm& g)
{
    if (classify(g).kind != Kind::Finite)
        throw Error(Err::NotFiniteType, "root system is infinite");
    // The longest finite-type root (E8) has height 29.
    return real_roots_up_to_height(g, 64);
}

RootVec highest_root(const Gcm& g)
{
    const auto roots = finite_positive_roots(g);
    std::vector<RootVec> maximal;
    for (const auto& r : roots) {
        bool top = true;
        for (const auto& s : roots)
            if (s != r && r.leq(s))
                top = false;
        if (top)
            maximal.push_back(r);
    }
    if (maximal.size() != 1)
        throw Error(Err::Internal, "highest root is not unique");
    return maximal[0];
}

RootVec highest_short_root(const Gcm& g)
{
    const auto roots = finite_positive_roots(g);
    const BilinearForm form(g);
    long long lo = form(roots[0], roots[0]), hi = lo;
    for (const auto& r : roots) {
        lo = std::min(lo, form(r, r));
        hi = std::max(hi, form(r, r));
    }
    if (lo == hi)
        throw Error(Err::SimplyLaced, "single root length");
    std::vector<RootVec> shorts;
    for (const auto& r : roots)
        if (form(r, r) == lo)
            shorts.push_back(r);
    std::vector<RootVec> maximal;
    for (const auto& r : shorts) {
        bool top = true;
        for (const auto& s : shorts)
            if (s != r && r.leq(s))
                top = false;
        if (top)
            maximal.push_back(r);
    }
    if (maximal.size() != 1)
        throw Error(Err::Internal, "highest short root is not unique");
    return maximal[0];
}

int i0_index(const Gcm& g)
{
    const RootVec t1 = highest_short_root(g);
    const auto roots = finite_positive_roots(g);
    int found = -1;
    for (int i = 0; i < g.size(); ++i) {
        RootVec s = t1 + RootVec::simple(g.size(), i);
        if (std::binary_search(roots.begin(), roots.end(), s)) {
            if (found >= 0)
                throw Error(Err::Internal, "i0 is not unique");
            found = i;
        }
    }
    if (found < 0)
        throw Error(Err::Internal, "no i0 found");
    return found;
}

}  // namespace kmd
