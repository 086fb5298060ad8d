#ifndef KMD_QLINALG_HPP
#define KMD_QLINALG_HPP

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kmd {

using Q = mpq_class;
using Z = mpz_class;
using QVec = std::vector<Q>;

// long is 64 bits on the supported targets
inline Q qint(long long v) { return Q(static_cast<long>(v)); }

// Dense rational matrix, row major.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    QMatrix(std::initializer_list<std::initializer_list<long>> init);
    static QMatrix identity(std::size_t n);
    static QMatrix from_rows(const std::vector<QVec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Q& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Q& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    QVec row(std::size_t i) const;
    void append_row(const QVec& r);
    QMatrix transpose() const;
    QVec apply(const QVec& v) const;
    QMatrix operator*(const QMatrix& o) const;
    bool operator==(const QMatrix& o) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Q> a_;
};

enum class Exec { Serial, Parallel };

// Integer row echelon form from fraction-free elimination.
struct Echelon {
    std::vector<std::vector<Z>> rows;   // all rows; the first `rank` are the pivot rows
    std::vector<std::size_t> pivots;    // pivot column of each pivot row
    std::size_t cols = 0;
    std::size_t rank() const { return pivots.size(); }
};

// Columns at or beyond pivot_limit are carried along but never pivot.
Echelon bareiss(const QMatrix& m, Exec ex = Exec::Serial, std::size_t pivot_limit = SIZE_MAX);

std::size_t rank(const QMatrix& m, Exec ex = Exec::Serial);
std::vector<QVec> kernel_basis(const QMatrix& m, Exec ex = Exec::Serial);
// Throws Error(NoSolution). Free variables are set to zero.
QVec solve(const QMatrix& m, const QVec& b, Exec ex = Exec::Serial);
// One elimination shared by several right-hand sides.
std::vector<QVec> solve_many(const QMatrix& m, const std::vector<QVec>& bs, Exec ex = Exec::Serial);

// Scale to integers with gcd 1 and first nonzero entry positive.
QVec primitive(const QVec& v);
bool is_zero(const QVec& v);

std::string to_string(const Q& q);  // "p/q" with q > 0

// Sparse vectors sorted by index with no zero entries.
using SpVec = std::vector<std::pair<int, Q>>;

void sp_axpy(SpVec& y, const Q& a, const SpVec& x);  // y += a x
SpVec sp_scale(const SpVec& x, const Q& a);
SpVec sp_add(const SpVec& x, const SpVec& y);
SpVec sp_from_dense(const QVec& v, int offset = 0);
Q sp_get(const SpVec& x, int idx);
// Rank of a family of sparse vectors.
std::size_t sp_rank(const std::vector<SpVec>& vs);

}  // namespace kmd

#endif
