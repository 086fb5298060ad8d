#ifndef KMD_GCM_HPP
#define KMD_GCM_HPP

#include "kmd/rootvec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kmd {

using IMat = std::vector<std::vector<int>>;

class Gcm {
public:
    // Throws Error with the offending indices in the message.
    static Gcm validate(const IMat& m);

    int size() const { return static_cast<int>(a_.size()); }
    int operator()(int i, int j) const { return a_[i][j]; }
    const IMat& entries() const { return a_; }
    // max over i != j of 2 - a_ij, the height of the tallest Serre element
    int serre_span() const;
    bool operator==(const Gcm& o) const { return a_ == o.a_; }

    Gcm permuted(const std::vector<int>& p) const;  // b[i][j] = a[p[i]][p[j]]

private:
    IMat a_;
};

struct Symmetrizer {
    std::vector<long long> d;
};

std::optional<Symmetrizer> try_symmetrizer(const Gcm& g);
Symmetrizer symmetrizer(const Gcm& g);  // throws NotSymmetrizable with a witness cycle

enum class Kind { Finite, Affine, Indefinite };

struct GcmType {
    Kind kind = Kind::Indefinite;
    std::string label = "INDEFINITE";
    // to_canonical[i] is the catalog index of input node i
    std::vector<int> to_canonical;
    std::vector<long long> marks, comarks;  // input numbering
    int epsilon = 0;                        // canonical numbering
    int epsilon_input = -1;                 // input numbering
};

GcmType classify(const Gcm& g);

// 1-based Bourbaki index for finite type, 0-based Kac index for affine type.
int canonical_index(const GcmType& t, int input_index);

struct AffineMarks {
    std::vector<long long> marks, comarks;
    RootVec delta;
};
AffineMarks affine_marks(const Gcm& g);  // throws NotAffineType

std::vector<std::vector<int>> diagram_automorphisms(const Gcm& g);

struct CatalogEntry {
    std::string label;
    Kind kind;
    IMat matrix;
    int epsilon;  // catalog index, affine only
};
const std::vector<CatalogEntry>& catalog();

// Permutation p with g(i,j) == h(p[i],p[j]), if any.
std::optional<std::vector<int>> find_isomorphism(const Gcm& g, const Gcm& h);

// Vinberg trichotomy with exact witnesses: a positive u with Au > 0, a
// positive null vector, or a positive u with Au < 0.
struct VinbergResult {
    Kind kind;
    std::vector<long long> witness;
};
VinbergResult vinberg(const Gcm& g);

}  // namespace kmd

#endif
