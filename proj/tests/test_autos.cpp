#include "doctest.h"

#include "kmd/autos.hpp"
#include "kmd/error.hpp"

#include <random>

using namespace kmd;

namespace {

const Gcm kA2 = Gcm::validate({{2, -1}, {-1, 2}});
const Gcm kA11 = Gcm::validate({{2, -2}, {-2, 2}});
const Gcm kHyp = Gcm::validate({{2, -3}, {-3, 2}});

SpVec unit(int g)
{
    return {{g, Q(1)}};
}

LieElt random_elt(const GradedAlgebra& alg, std::mt19937_64& rng, int hmax)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<RootVec> degs;
    for (const auto& d : alg.degrees())
        if (d.dim > 0 && d.beta.height() <= hmax)
            degs.push_back(d.beta);
    const RootVec beta = degs[std::uniform_int_distribution<std::size_t>(0, degs.size() - 1)(rng)];
    SpVec c;
    for (int g : alg.basis(beta))
        if (int k = coef(rng))
            sp_axpy(c, Q(k), unit(g));
    if (c.empty())
        c = unit(alg.basis(beta)[0]);
    return alg.make(beta, c);
}

}  // namespace

TEST_SUITE("autos")
{
    TEST_CASE("torus action")
    {
        const GradedAlgebra alg = build_nilradical(kA2, 4);
        CHECK(torus_action(alg, {Q(1), Q(1)}) == identity_map(alg.dim_total()));
        const TruncMap t = torus_action(alg, {Q(2), Q(3)});
        const int z = alg.basis(RootVec({1, 1}))[0];
        CHECK(t.cols[z] == sp_scale(unit(z), Q(6)));
        CHECK(is_automorphism(alg, t).ok);
        try {
            torus_action(alg, {Q(0), Q(1)});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == Err::ZeroTorusEntry);
        }
    }

    TEST_CASE("exponentials of inner derivations")
    {
        const GradedAlgebra alg = build_nilradical(kHyp, 9);
        const int dim = alg.dim_total();
        CHECK(exp_ad(alg, alg.make(RootVec({1, 0}), {})) == identity_map(dim));
        const GradedAlgebra a2 = build_nilradical(kA2, 4);
        SpVec want = unit(a2.generator(1));
        sp_axpy(want, Q(1), a2.bracket_trunc(a2.generator(0), a2.generator(1)));
        CHECK(exp_ad(a2, a2.gen(0)).cols[a2.generator(1)] == want);
        const TruncMap e = exp_ad(alg, alg.gen(0));
        for (int g = 0; g < dim; ++g) {
            SpVec diff = e.cols[g];
            sp_axpy(diff, Q(-1), unit(g));
            for (const auto& [h, c] : diff)
                CHECK(alg.height_of(h) > alg.height_of(g));
        }
        std::mt19937_64 rng(3);
        for (int t = 0; t < 5; ++t) {
            const LieElt x = random_elt(alg, rng, 3);
            const LieElt mx = alg.make(x.degree, sp_scale(x.coords, Q(-1)));
            CHECK(compose(exp_ad(alg, x), exp_ad(alg, mx)) == identity_map(dim));
            CHECK(is_automorphism(alg, exp_ad(alg, x)).ok);
        }
    }

    TEST_CASE("diagram lifts")
    {
        const GradedAlgebra alg = build_nilradical(kHyp, 9);
        const TruncMap s = diagram_lift(alg, {1, 0});
        CHECK(compose(s, s) == identity_map(alg.dim_total()));
        const int z = alg.basis(RootVec({1, 1}))[0];
        CHECK(s.cols[z] == sp_scale(unit(z), Q(-1)));
        CHECK(s.cols[alg.generator(0)] == unit(alg.generator(1)));
        CHECK(is_automorphism(alg, s).ok);
        const GradedAlgebra b2 = build_nilradical(Gcm::validate({{2, -2}, {-1, 2}}), 6);
        try {
            diagram_lift(b2, {1, 0});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == Err::NotDiagramAutomorphism);
        }
    }

    TEST_CASE("gamma0 on the Borel subalgebra")
    {
        const BorelAlgebra b11 = build_borel(kA11, 8);
        REQUIRE(b11.m_prime() == 1);
        const std::vector<QVec> zero(2, QVec(b11.h_dim()));
        CHECK(gamma0_borel(b11, QMatrix{{1}}, zero) == identity_map(b11.dim_total(), true));
        const TruncMap g2 = gamma0_borel(b11, QMatrix{{2}}, zero);
        CHECK(is_automorphism(b11, g2).ok);
        CHECK_FALSE(g2 == identity_map(b11.dim_total(), true));
        std::vector<QVec> zc = zero;
        zc[0] = b11.center_basis()[0];
        CHECK(is_automorphism(b11, gamma0_borel(b11, QMatrix{{-1}}, zc)).ok);
        try {
            gamma0_borel(b11, QMatrix{{0}}, zero);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == Err::NotInvertible);
        }
        const BorelAlgebra ba2 = build_borel(kA2, 5);
        const TruncMap t = gamma0_borel(ba2, QMatrix(0, 0), {});
        CHECK(t == identity_map(ba2.dim_total(), true));
        CHECK(t.note.find("only the identity") != std::string::npos);
    }

    TEST_CASE("non-automorphisms produce witnesses")
    {
        const GradedAlgebra alg = build_nilradical(kA2, 4);
        const int z = alg.basis(RootVec({1, 1}))[0];
        TruncMap drop = identity_map(alg.dim_total());
        drop.cols[z].clear();
        const AutCheck a = is_automorphism(alg, drop);
        CHECK_FALSE(a.ok);
        REQUIRE(a.rank_drop.has_value());
        CHECK(*a.rank_drop == RootVec({1, 1}));
        CHECK(witness_json(alg, a).find("[1,1]") != std::string::npos);

        TruncMap scaled = identity_map(alg.dim_total());
        scaled.cols[z] = sp_scale(unit(z), Q(2));
        const AutCheck b = is_automorphism(alg, scaled);
        CHECK_FALSE(b.ok);
        CHECK_FALSE(b.rank_drop.has_value());
        CHECK(b.u >= 0);
        CHECK(b.v >= 0);
        CHECK_FALSE(b.lhs == b.rhs);
    }

    TEST_CASE("conjugating exp ad by torus elements")
    {
        const GradedAlgebra alg = build_nilradical(kHyp, 8);
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> tv(1, 5), sign(0, 1);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Q> t, tinv;
            for (int i = 0; i < 2; ++i) {
                Q v = Q(tv(rng), tv(rng)) * (sign(rng) ? 1 : -1);
                v.canonicalize();
                t.push_back(v);
                tinv.push_back(1 / v);
            }
            const TruncMap phi = torus_action(alg, t), phinv = torus_action(alg, tinv);
            CHECK(compose(phi, phinv) == identity_map(alg.dim_total()));
            const LieElt x = random_elt(alg, rng, 4);
            const LieElt px = alg.make(x.degree, phi.apply(x.coords));
            CHECK(compose(phi, compose(exp_ad(alg, x), phinv)) == exp_ad(alg, px));
        }
    }

    TEST_CASE("homomorphism extension agrees with the diagram lift")
    {
        const GradedAlgebra alg = build_nilradical(kHyp, 8);
        const TruncMap h = homomorphism_from_generators(alg, {unit(alg.generator(1)), unit(alg.generator(0))});
        CHECK(h == diagram_lift(alg, {1, 0}));
    }

    TEST_CASE("Heisenberg fixture")
    {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const HeisenbergReport r = heisenberg_aut_check(seed);
            CHECK(r.identity_ok);
            CHECK(r.random_matrices_ok);
            CHECK(r.solved_land_in_set);
            CHECK(r.subgroups_ok);
            CHECK(r.swap_ok);
            CHECK(r.degenerate_rejected);
            CHECK(r.pass);
        }
    }
}
