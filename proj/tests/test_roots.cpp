#include "doctest.h"

#include "kmd/error.hpp"
#include "kmd/gcm.hpp"
#include "kmd/roots.hpp"

#include <map>
#include <set>

using namespace kmd;

namespace {

Gcm cat(const std::string& label)
{
    for (const auto& e : catalog())
        if (e.label == label)
            return Gcm::validate(e.matrix);
    throw std::runtime_error("no catalog entry " + label);
}

}  // namespace

TEST_SUITE("roots")
{
    TEST_CASE("positive root counts of finite types")
    {
        const std::map<std::string, std::size_t> count{{"A2", 3},  {"A3", 6},  {"A5", 15}, {"B2", 4},  {"B3", 9},
                                                        {"C3", 9},  {"D4", 12}, {"G2", 6},  {"F4", 24}, {"E6", 36},
                                                        {"E7", 63}, {"E8", 120}};
        for (const auto& [label, n] : count)
            CHECK_MESSAGE(finite_positive_roots(cat(label)).size() == n, label);
    }

    TEST_CASE("highest root height is the Coxeter number minus one")
    {
        const std::map<std::string, int> h{{"A2", 2}, {"B3", 5}, {"C3", 5}, {"G2", 5}, {"F4", 11}, {"E8", 29}};
        for (const auto& [label, ht] : h)
            CHECK(highest_root(cat(label)).height() == ht);
        CHECK(highest_short_root(cat("F4")).height() == 8);
        CHECK_THROWS_AS(highest_short_root(cat("A3")), Error);
    }

    TEST_CASE("reflections are involutions preserving the form")
    {
        for (const std::string label : {"A3", "B3", "G2", "A1~1", "A2~2"}) {
            const Gcm g = cat(label);
            const BilinearForm b(g);
            const auto roots = real_roots_up_to_height(g, 6);
            for (const auto& r : roots)
                for (int i = 0; i < g.size(); ++i) {
                    const RootVec s = reflect(g, i, r);
                    CHECK(reflect(g, i, s) == r);
                    CHECK(b(s, s) == b(r, r));
                }
        }
    }

    TEST_CASE("real roots of A1~1 avoid multiples of delta")
    {
        const Gcm g = Gcm::validate({{2, -2}, {-2, 2}});
        for (const auto& r : real_roots_up_to_height(g, 9))
            CHECK(r[0] != r[1]);
        CHECK(real_roots_up_to_height(g, 3).size() == 4);  // a0, a1, 2a0+a1, a0+2a1
    }

    TEST_CASE("finite positive roots are closed under simple reflections except at the simple root")
    {
        for (const std::string label : {"B3", "C3", "G2", "D4"}) {
            const Gcm g = cat(label);
            const auto roots = finite_positive_roots(g);
            const std::set<RootVec> set(roots.begin(), roots.end());
            for (const auto& r : roots)
                for (int i = 0; i < g.size(); ++i)
                    if (!(r == RootVec::simple(g.size(), i)))
                        CHECK(set.count(reflect(g, i, r)) == 1);
        }
    }
}
