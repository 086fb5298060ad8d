#ifndef KMD_DERIV_HPP
#define KMD_DERIV_HPP

#include "kmd/liealg.hpp"
#include "kmd/qlinalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kmd {

// A derivation given by generator images. For the nilradical, e[i] = d(e_i)
// over nilradical indices. For the Borel case, e[i] and h[a] use Borel indices.
struct GenImages {
    std::vector<SpVec> e;
    std::vector<SpVec> h;
};

struct DerivationSpace {
    RootVec degree;
    bool borel = false;
    // Unknown layout: block k covers columns [offset[k], offset[k] + basis[k].size()).
    // Nilradical: blocks 0..l are d(e_i). Borel: blocks 0..h_dim-1 are d(h_a), then d(e_i).
    std::vector<std::vector<int>> block_basis;
    std::vector<int> block_offset;
    int unknowns = 0;
    QMatrix constraints;
    std::vector<QVec> basis;        // kernel of constraints
    std::vector<QVec> inner;        // witnesses ad x (spanning, possibly dependent)
    std::vector<QVec> outer_reps;   // kernel vectors completing a basis of the inner span
    int inner_dim = 0;
    int outer_dim = 0;
    int validity_cap = 0;

    int dim() const { return static_cast<int>(basis.size()); }
    GenImages images(const QVec& v) const;
    QVec vectorize(const GenImages& d) const;
    bool contains(const QVec& v) const;
};

// Der(ñ⁺)_beta, exact for the untruncated algebra. Throws CapTooSmall.
DerivationSpace der_space_n(const GradedAlgebra& alg, const RootVec& beta);
DerivationSpace der_space_b(const BorelAlgebra& bor, const RootVec& beta);

// Largest H for which candidates of height <= H satisfy the cap precondition.
int validity_bound(const GradedAlgebra& alg);
std::vector<RootVec> candidate_degrees_n(const GradedAlgebra& alg, int H);

// Every Serre element is mapped to 0 by the Leibniz expansion of d.
bool annihilates_serre(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d);

// Images of all nilradical basis elements (truncated at the cap).
std::vector<SpVec> extend_derivation(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d);

struct OuterFinite {
    int i;
    RootVec beta;
    GenImages d;
    bool in_der_space;
    bool independent_of_inner;
};
std::vector<OuterFinite> outer_finite(const GradedAlgebra& alg);

struct DegreeReport {
    RootVec degree;
    int dim = 0, inner = 0, outer = 0;
    int expected_dim = -1, expected_outer = -1;
    bool pass = true;
    std::string note;
};

struct SweepReport {
    std::string theorem;
    std::vector<DegreeReport> lines;
    bool pass = true;
    int h1 = 0;  // (l+1) from degree 0 plus the outer dimensions
    std::string note;
};

struct AffineOuterReport {
    RootVec beta;
    int mult = 0, dim = 0, inner = 0, outer = 0;
    bool normalizable = false;  // outer part representable with d(e_i) = 0 for i != eps
    bool pass = false;
    std::string note;
};

// At beta = k r delta: total = mult + 1, outer = 1; at other multiples of delta: outer 0.
AffineOuterReport affine_outer_check(const GradedAlgebra& alg, int k);
AffineOuterReport affine_delta_check(const GradedAlgebra& alg, int k);  // beta = k delta

// Sweeps over candidate degrees; jobs <= 1 runs serially.
SweepReport verify_moody(const GradedAlgebra& alg, int H, int jobs = 1);
SweepReport h1_report(const GradedAlgebra& alg, int H, int jobs = 1);
SweepReport borel_sweep(const BorelAlgebra& bor, int H, int jobs = 1);

}  // namespace kmd

#endif
