#include "free_lie.hpp"

#include "kmd/error.hpp"

namespace kmd {

void comb_axpy(IntComb& y, long long a, const IntComb& x)
{
    if (a == 0 || x.empty())
        return;
    IntComb out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        long long t;
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
            continue;
        }
        if (__builtin_mul_overflow(a, x[j].second, &t))
            throw Error(Err::Internal, "free Lie coefficient overflow");
        if (i == y.size() || x[j].first < y[i].first) {
            out.emplace_back(x[j].first, t);
            ++j;
            continue;
        }
        long long s;
        if (__builtin_add_overflow(y[i].second, t, &s))
            throw Error(Err::Internal, "free Lie coefficient overflow");
        if (s != 0)
            out.emplace_back(y[i].first, s);
        ++i;
        ++j;
    }
    y = std::move(out);
}

bool FreeLie::is_lyndon(const Word& w)
{
    if (w.empty())
        return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w.compare(i, Word::npos, w) <= 0)
            return false;
    return true;
}

std::vector<Word> FreeLie::lyndon_words(int letters, int max_len)
{
    std::vector<Word> out;
    if (max_len < 1 || letters < 1)
        return out;
    Word w(1, 0);
    while (!w.empty()) {
        out.push_back(w);
        const std::size_t m = w.size();
        while (static_cast<int>(w.size()) < max_len)
            w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == letters - 1)
            w.pop_back();
        if (!w.empty())
            ++w.back();
    }
    return out;
}

int FreeLie::id(const Word& w)
{
    auto it = ids_.find(w);
    if (it != ids_.end())
        return it->second;
    const int k = static_cast<int>(words_.size());
    words_.push_back(w);
    ids_.emplace(w, k);
    return k;
}

std::pair<int, int> FreeLie::factor(int id_)
{
    if (auto it = factors_.find(id_); it != factors_.end())
        return it->second;
    const Word w = words_[id_];
    std::pair<int, int> f{-1, -1};
    for (std::size_t i = 1; i < w.size(); ++i)
        if (is_lyndon(w.substr(i))) {
            f = {id(w.substr(0, i)), id(w.substr(i))};
            break;
        }
    factors_.emplace(id_, f);
    return f;
}

const IntComb& FreeLie::bracket(int h, int k)
{
    const std::uint64_t key = (static_cast<std::uint64_t>(h) << 32) | static_cast<std::uint32_t>(k);
    if (auto it = memo_.find(key); it != memo_.end())
        return it->second;
    IntComb r;
    if (h != k) {
        if (words_[h] > words_[k]) {
            comb_axpy(r, -1, bracket(k, h));
        } else {
            auto [u, v] = factor(h);
            if (u < 0 || words_[v] >= words_[k]) {
                r.emplace_back(id(words_[h] + words_[k]), 1);
            } else {
                // [[u,v],k] = [u,[v,k]] + [[u,k],v]
                const IntComb vk = bracket(v, k);
                r = bracket(u, vk);
                const IntComb uk = bracket(u, k);
                comb_axpy(r, 1, bracket(uk, v));
            }
        }
    }
    return memo_.emplace(key, std::move(r)).first->second;
}

IntComb FreeLie::bracket(int h, const IntComb& x)
{
    IntComb r;
    for (const auto& [w, c] : x)
        comb_axpy(r, c, bracket(h, w));
    return r;
}

IntComb FreeLie::bracket(const IntComb& x, int k)
{
    IntComb r;
    for (const auto& [w, c] : x)
        comb_axpy(r, c, bracket(w, k));
    return r;
}

}  // namespace kmd
