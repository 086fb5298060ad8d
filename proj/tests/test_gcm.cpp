#include "doctest.h"

#include "kmd/error.hpp"
#include "kmd/gcm.hpp"
#include "kmd/qlinalg.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace kmd;

namespace {

Err kind_of(const IMat& m)
{
    try {
        Gcm::validate(m);
    } catch (const Error& e) {
        return e.kind();
    }
    return Err::Internal;
}

std::vector<std::vector<int>> brute_automorphisms(const Gcm& g)
{
    std::vector<int> p(g.size());
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int i = 0; i < g.size() && ok; ++i)
            for (int j = 0; j < g.size() && ok; ++j)
                ok = g(p[i], p[j]) == g(i, j);
        if (ok)
            out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

TEST_SUITE("gcm")
{
    TEST_CASE("validation errors name the problem")
    {
        CHECK_NOTHROW(Gcm::validate({{2, -1}, {-1, 2}}));
        CHECK(kind_of({{2, 1}, {-1, 2}}) == Err::PositiveOffDiagonal);
        CHECK(kind_of({{2, -1, 0}, {-1, 2, 0}, {0, 0, 2}}) == Err::Decomposable);
        CHECK(kind_of({{1, -1}, {-1, 2}}) == Err::DiagonalNotTwo);
        CHECK(kind_of({{2, 0}, {-1, 2}}) == Err::ZeroPatternAsymmetric);
        CHECK(kind_of({{2, -1, 0}, {-1, 2}}) == Err::NotSquare);
        try {
            Gcm::validate({{2, 1}, {-1, 2}});
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
        }
    }

    TEST_CASE("symmetrizer examples and defining identity")
    {
        CHECK(symmetrizer(Gcm::validate({{2, -1}, {-1, 2}})).d == std::vector<long long>{1, 1});
        CHECK(symmetrizer(Gcm::validate({{2, -4}, {-1, 2}})).d == std::vector<long long>{1, 4});
        CHECK(symmetrizer(Gcm::validate({{2, -2}, {-1, 2}})).d == std::vector<long long>{1, 2});
        for (const auto& e : catalog()) {
            const Gcm g = Gcm::validate(e.matrix);
            const auto d = symmetrizer(g).d;
            for (int i = 0; i < g.size(); ++i)
                for (int j = 0; j < g.size(); ++j)
                    CHECK(d[i] * g(i, j) == d[j] * g(j, i));
        }
        // A 3-cycle whose ratios cannot close up.
        const Gcm bad = Gcm::validate({{2, -1, -1}, {-2, 2, -1}, {-1, -1, 2}});
        CHECK_FALSE(try_symmetrizer(bad).has_value());
        CHECK_THROWS_AS(symmetrizer(bad), Error);
    }

    TEST_CASE("classification examples")
    {
        const GcmType a2 = classify(Gcm::validate({{2, -1}, {-1, 2}}));
        CHECK(a2.kind == Kind::Finite);
        CHECK(a2.label == "A2");
        const GcmType a11 = classify(Gcm::validate({{2, -2}, {-2, 2}}));
        CHECK(a11.kind == Kind::Affine);
        CHECK(a11.label == "A1~1");
        CHECK(a11.marks == std::vector<long long>{1, 1});
        CHECK(a11.epsilon_input == 0);
        CHECK(classify(Gcm::validate({{2, -3}, {-3, 2}})).kind == Kind::Indefinite);
        CHECK(classify(Gcm::validate({{2, -3}, {-3, 2}})).label == "INDEFINITE");
        const GcmType a22 = classify(Gcm::validate({{2, -4}, {-1, 2}}));
        CHECK(a22.label == "A2~2");
        CHECK(affine_marks(Gcm::validate({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}})).marks ==
              std::vector<long long>{1, 1, 1});
    }

    TEST_CASE("every catalog entry classifies as itself, also after relabelling")
    {
        std::mt19937_64 rng(1);
        for (const auto& e : catalog()) {
            const Gcm g = Gcm::validate(e.matrix);
            const GcmType t = classify(g);
            CHECK_MESSAGE(t.label == e.label, e.label);
            CHECK(t.kind == e.kind);
            CHECK(vinberg(g).kind == e.kind);
            std::vector<int> p(g.size());
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
            const GcmType tp = classify(g.permuted(p));
            CHECK(tp.label == e.label);
            if (e.kind == Kind::Affine) {
                // epsilon follows the relabelling, up to a diagram automorphism
                bool found = false;
                for (const auto& sigma : diagram_automorphisms(g))
                    found = found || sigma[p[tp.epsilon_input]] == t.epsilon_input;
                CHECK(found);
            }
        }
    }

    TEST_CASE("catalog has no isomorphic duplicates")
    {
        const auto& cat = catalog();
        for (std::size_t a = 0; a < cat.size(); ++a)
            for (std::size_t b = a + 1; b < cat.size(); ++b) {
                if (cat[a].matrix.size() != cat[b].matrix.size())
                    continue;
                CHECK_FALSE_MESSAGE(
                    find_isomorphism(Gcm::validate(cat[a].matrix), Gcm::validate(cat[b].matrix)).has_value(),
                    std::string(cat[a].label + " vs " + cat[b].label));
            }
    }

    TEST_CASE("affine marks span the kernel")
    {
        for (const auto& e : catalog()) {
            if (e.kind != Kind::Affine)
                continue;
            const Gcm g = Gcm::validate(e.matrix);
            const AffineMarks m = affine_marks(g);
            long long gm = 0, gc = 0;
            for (int i = 0; i < g.size(); ++i) {
                long long s = 0, t = 0;
                for (int j = 0; j < g.size(); ++j) {
                    s += g(i, j) * m.marks[j];
                    t += g(j, i) * m.comarks[j];
                }
                CHECK(s == 0);
                CHECK(t == 0);
                CHECK(m.marks[i] > 0);
                gm = std::gcd(gm, m.marks[i]);
                gc = std::gcd(gc, m.comarks[i]);
            }
            CHECK(gm == 1);
            CHECK(gc == 1);
        }
    }

    TEST_CASE("diagram automorphisms match brute force and form a group")
    {
        std::vector<IMat> mats{{{2, -1}, {-1, 2}}, {{2, -2}, {-1, 2}}, {{2, -2}, {-2, 2}},
                               {{2, -2, -2}, {-2, 2, -2}, {-2, -2, 2}}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}};
        for (const auto& e : catalog())
            if (e.matrix.size() <= 6)
                mats.push_back(e.matrix);
        for (const auto& m : mats) {
            const Gcm g = Gcm::validate(m);
            const auto autos = diagram_automorphisms(g);
            CHECK(autos == brute_automorphisms(g));
            const std::set<std::vector<int>> set(autos.begin(), autos.end());
            for (const auto& a : autos)
                for (const auto& b : autos) {
                    std::vector<int> ab(a.size());
                    for (std::size_t i = 0; i < a.size(); ++i)
                        ab[i] = a[b[i]];
                    CHECK(set.count(ab) == 1);
                }
        }
        CHECK(diagram_automorphisms(Gcm::validate({{2, -1}, {-1, 2}})).size() == 2);
        CHECK(diagram_automorphisms(Gcm::validate({{2, -2}, {-1, 2}})).size() == 1);
    }

    TEST_CASE("finite indices are Bourbaki, affine indices are Kac")
    {
        const Gcm b3 = Gcm::validate({{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}});
        const GcmType t = classify(b3);
        CHECK(t.label == "B3");
        CHECK(canonical_index(t, 2) == 3);
        const GcmType a = classify(Gcm::validate({{2, -2}, {-2, 2}}));
        CHECK(canonical_index(a, 0) == 0);
    }
}
