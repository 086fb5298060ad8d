#include "doctest.h"
#include "oracles.hpp"

#include "kmd/error.hpp"
#include "kmd/qlinalg.hpp"

#include <numeric>

using namespace kmd;

TEST_SUITE("qlinalg")
{
    TEST_CASE("bareiss rank agrees with Gauss-Jordan on random matrices")
    {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 60; ++t) {
            const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
            const QMatrix m = oracle::random_matrix(rng, r, c, 3, 40);
            CHECK(rank(m) == oracle::gauss_rank(m));
            CHECK(rank(m, Exec::Parallel) == rank(m));
        }
    }

    TEST_CASE("serial and parallel elimination give the same echelon form")
    {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 10; ++t) {
            const QMatrix m = oracle::random_matrix(rng, 40, 30, 5, 30);
            const Echelon a = bareiss(m, Exec::Serial), b = bareiss(m, Exec::Parallel);
            CHECK(a.pivots == b.pivots);
            CHECK(a.rows == b.rows);
        }
    }

    TEST_CASE("rank is invariant under row permutation")
    {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 20; ++t) {
            const QMatrix m = oracle::random_matrix(rng, 7, 6, 2, 50);
            std::vector<std::size_t> p(m.rows());
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
            QMatrix q(m.rows(), m.cols());
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    q(i, j) = m(p[i], j);
            CHECK(rank(q) == rank(m));
        }
    }

    TEST_CASE("kernel vectors are annihilated and count is cols minus rank")
    {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 30; ++t) {
            const QMatrix m = oracle::random_matrix(rng, 1 + rng() % 6, 1 + rng() % 8, 4, 40);
            const auto ker = kernel_basis(m);
            CHECK(ker.size() == m.cols() - oracle::gauss_rank(m));
            for (const auto& v : ker) {
                CHECK(is_zero(m.apply(v)));
                CHECK(primitive(v) == v);
            }
            if (!ker.empty())
                CHECK(oracle::gauss_rank(QMatrix::from_rows(ker, m.cols())) == ker.size());
        }
    }

    TEST_CASE("solve returns a solution or reports inconsistency")
    {
        std::mt19937_64 rng(23);
        for (int t = 0; t < 30; ++t) {
            const QMatrix m = oracle::random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6, 4, 30);
            QVec x(m.cols());
            for (auto& v : x)
                v = Q(static_cast<int>(rng() % 7) - 3) / static_cast<int>(1 + rng() % 3);
            const QVec b = m.apply(x);
            CHECK(m.apply(solve(m, b)) == b);
        }
        const QMatrix m{{1, 1}, {2, 2}};
        CHECK_THROWS_AS(solve(m, QVec{Q(1), Q(3)}), Error);
    }

    TEST_CASE("rational rendering")
    {
        CHECK(to_string(Q(-6, 4)) == "-3/2");
        CHECK(to_string(Q(5)) == "5/1");
        CHECK(to_string(Q(0)) == "0/1");
    }

    TEST_CASE("sparse rank matches dense rank")
    {
        std::mt19937_64 rng(29);
        for (int t = 0; t < 20; ++t) {
            const QMatrix m = oracle::random_matrix(rng, 6, 9, 3, 60);
            std::vector<SpVec> rows;
            for (std::size_t i = 0; i < m.rows(); ++i)
                rows.push_back(sp_from_dense(m.row(i)));
            CHECK(sp_rank(rows) == oracle::gauss_rank(m));
        }
    }
}
