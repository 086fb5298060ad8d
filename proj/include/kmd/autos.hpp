#ifndef KMD_AUTOS_HPP
#define KMD_AUTOS_HPP

#include "kmd/deriv.hpp"
#include "kmd/liealg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kmd {

// Linear map on the truncation given by its column images. Indices are
// nilradical indices, or Borel indices (h first) when borel is set.
struct TruncMap {
    bool borel = false;
    std::vector<SpVec> cols;
    std::string note;

    int size() const { return static_cast<int>(cols.size()); }
    SpVec apply(const SpVec& x) const;
    bool operator==(const TruncMap& o) const { return borel == o.borel && cols == o.cols; }
};

TruncMap identity_map(int dim, bool borel = false);
TruncMap compose(const TruncMap& a, const TruncMap& b);  // a after b
// exp of a nilpotent linear map; throws Internal if the series does not stop.
TruncMap exp_nilpotent(const TruncMap& d);
// Linear map of a derivation given by generator images.
TruncMap derivation_map(const GradedAlgebra& alg, const RootVec& beta, const GenImages& d);

TruncMap torus_action(const GradedAlgebra& alg, const std::vector<Q>& t);
TruncMap exp_ad(const GradedAlgebra& alg, const LieElt& x);
// Unique homomorphism of the truncation with e_i -> images[i]. The images
// must not lower height, otherwise the truncation is not respected.
TruncMap homomorphism_from_generators(const GradedAlgebra& alg, const std::vector<SpVec>& images);
TruncMap diagram_lift(const GradedAlgebra& alg, const std::vector<int>& sigma);

// phi acts on c in center_basis coordinates; z[i] in h coordinates must lie in c.
TruncMap gamma0_borel(const BorelAlgebra& bor, const QMatrix& phi, const std::vector<QVec>& z);
// h vectors a_i^* with alpha_j(a_i^*) = delta_ij.
std::vector<QVec> dual_elements(const BorelAlgebra& bor);

struct AutCheck {
    bool ok = true;
    std::string reason;
    int u = -1, v = -1;  // failing pair for the bracket check
    SpVec lhs, rhs;
    std::optional<RootVec> rank_drop;  // failing source degree for bijectivity
    int rank_drop_height = -1;
};

AutCheck is_automorphism(const GradedAlgebra& alg, const TruncMap& m);
AutCheck is_automorphism(const BorelAlgebra& bor, const TruncMap& m);
std::string witness_json(const GradedAlgebra& alg, const AutCheck& c, bool borel = false, int h_dim = 0);

// A2 Heisenberg fixture, basis order (e0, e1, z = [e0, e1]).
struct HeisenbergReport {
    bool identity_ok = false;
    bool random_matrices_ok = false;   // members of the set are automorphisms
    bool solved_land_in_set = false;   // solved automorphisms have the forced z column
    bool subgroups_ok = false;
    bool swap_ok = false;
    bool degenerate_rejected = false;
    bool pass = false;
    std::vector<std::string> notes;
};
QMatrix heisenberg_matrix(const GradedAlgebra& a2, const TruncMap& m);
TruncMap heisenberg_map(const GradedAlgebra& a2, const QMatrix& mat);
bool in_heisenberg_set(const QMatrix& mat);
HeisenbergReport heisenberg_aut_check(std::uint64_t seed = 1);

}  // namespace kmd

#endif
