#ifndef KMD_ROOTVEC_HPP
#define KMD_ROOTVEC_HPP

#include <compare>
#include <string>
#include <vector>

namespace kmd {

// Element of the root lattice, coordinates over the simple roots.
struct RootVec {
    std::vector<int> c;

    RootVec() = default;
    explicit RootVec(std::vector<int> coords) : c(std::move(coords)) {}
    static RootVec zero(int n) { return RootVec(std::vector<int>(n, 0)); }
    static RootVec simple(int n, int i)
    {
        RootVec r = zero(n);
        r.c[i] = 1;
        return r;
    }

    int size() const { return static_cast<int>(c.size()); }
    int operator[](int i) const { return c[i]; }
    int& operator[](int i) { return c[i]; }
    int height() const
    {
        int h = 0;
        for (int v : c)
            h += v;
        return h;
    }
    bool is_zero() const
    {
        for (int v : c)
            if (v != 0)
                return false;
        return true;
    }
    bool nonneg() const
    {
        for (int v : c)
            if (v < 0)
                return false;
        return true;
    }
    bool positive() const { return nonneg() && !is_zero(); }
    bool leq(const RootVec& o) const
    {
        for (int i = 0; i < size(); ++i)
            if (c[i] > o.c[i])
                return false;
        return true;
    }

    RootVec operator+(const RootVec& o) const
    {
        RootVec r = *this;
        for (int i = 0; i < size(); ++i)
            r.c[i] += o.c[i];
        return r;
    }
    RootVec operator-(const RootVec& o) const
    {
        RootVec r = *this;
        for (int i = 0; i < size(); ++i)
            r.c[i] -= o.c[i];
        return r;
    }
    RootVec operator*(int k) const
    {
        RootVec r = *this;
        for (int& v : r.c)
            v *= k;
        return r;
    }
    RootVec operator-() const { return *this * -1; }

    bool operator==(const RootVec& o) const { return c == o.c; }
    // Height first, then lexicographic on coordinates.
    std::strong_ordering operator<=>(const RootVec& o) const
    {
        if (auto h = height() <=> o.height(); h != 0)
            return h;
        return c <=> o.c;
    }

    std::string str() const
    {
        std::string s = "[";
        for (int i = 0; i < size(); ++i) {
            if (i)
                s += ",";
            s += std::to_string(c[i]);
        }
        return s + "]";
    }
};

}  // namespace kmd

#endif
