#ifndef KMD_ROOTS_HPP
#define KMD_ROOTS_HPP

#include "kmd/gcm.hpp"
#include "kmd/rootvec.hpp"

#include <set>
#include <vector>

namespace kmd {

// (.|.) on the root lattice, Gram matrix B = D A.
class BilinearForm {
public:
    explicit BilinearForm(const Gcm& g);  // throws NotSymmetrizable
    long long operator()(const RootVec& a, const RootVec& b) const;
    long long gram(int i, int j) const { return b_[i][j]; }
    long long d(int i) const { return d_[i]; }

private:
    std::vector<std::vector<long long>> b_;
    std::vector<long long> d_;
};

// <beta, alpha_i^vee> = sum_j beta_j a_ij
int pairing(const Gcm& g, int i, const RootVec& beta);
RootVec reflect(const Gcm& g, int i, const RootVec& beta);

// Sorted by height, then lexicographically.
std::vector<RootVec> real_roots_up_to_height(const Gcm& g, int H);
std::vector<RootVec> finite_positive_roots(const Gcm& g);  // throws NotFiniteType

RootVec highest_root(const Gcm& g);
RootVec highest_short_root(const Gcm& g);  // throws SimplyLaced
int i0_index(const Gcm& g);                // input numbering; throws SimplyLaced

}  // namespace kmd

#endif
