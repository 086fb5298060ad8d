#ifndef KMD_LIEALG_HPP
#define KMD_LIEALG_HPP

#include "kmd/gcm.hpp"
#include "kmd/qlinalg.hpp"
#include "kmd/rootvec.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kmd {

// Homogeneous element; coords are over global basis indices of one degree.
struct LieElt {
    RootVec degree;
    SpVec coords;
    bool is_zero() const { return coords.empty(); }
};

struct DegreeInfo {
    RootVec beta;
    int offset = 0;    // global index of the first basis element
    int dim = 0;       // dim of the quotient in this degree
    int free_dim = 0;  // number of Lyndon words of this content
};

// Truncated Serre quotient: all degrees beta in Q+ with height <= N
// (optionally also beta <= box), basis labelled by Lyndon words.
class GradedAlgebra {
public:
    const Gcm& gcm() const { return gcm_; }
    int rank() const { return gcm_.size(); }
    int height_cap() const { return cap_; }
    const std::optional<RootVec>& box() const { return box_; }

    int dim_total() const { return static_cast<int>(labels_.size()); }
    const std::vector<DegreeInfo>& degrees() const { return degrees_; }
    // Index into degrees(), or -1 when beta is not a built degree.
    int degree_index(const RootVec& beta) const;
    // beta is a positive degree covered by the construction.
    bool covers(const RootVec& beta) const;
    // 0 for beta outside Q+\{0}; throws HeightOverflow / OutOfBox.
    int mult(const RootVec& beta) const;
    int free_dim(const RootVec& beta) const;
    // Global basis indices of ñ⁺_beta (empty if not covered).
    std::vector<int> basis(const RootVec& beta) const;

    const RootVec& degree_of(int g) const { return degrees_[deg_of_[g]].beta; }
    int height_of(int g) const { return degree_of(g).height(); }
    const std::string& label(int g) const { return labels_[g]; }
    int index_of_label(const std::string& label) const;
    int generator(int i) const { return gens_[i]; }

    // [b_u, b_v] on basis elements; throws HeightOverflow past the cap.
    SpVec bracket_basis(int u, int v) const;
    // Same, but zero past the cap (the truncation is itself a Lie algebra).
    SpVec bracket_trunc(int u, int v) const;
    SpVec bracket_trunc(const SpVec& x, const SpVec& y) const;
    LieElt bracket(const LieElt& x, const LieElt& y) const;

    LieElt gen(int i) const;
    LieElt basis_elt(int g) const;
    LieElt make(const RootVec& beta, const SpVec& coords) const;

    // Each basis element b of height >= 2 written as sum_i [e_i, c_i].
    using Certificate = std::vector<std::pair<int, SpVec>>;
    const Certificate& certificate(int g) const;

    // Versioned JSON cache; load validates before returning.
    std::string to_cache_json() const;
    static GradedAlgebra from_cache_json(const std::string& text);

    // Structure checks; each returns an empty string on success.
    std::string check_antisymmetry_jacobi(int max_triples = -1) const;
    std::string check_serre() const;
    std::string check_generators() const;

    std::size_t table_size() const { return table_.size(); }

private:
    friend GradedAlgebra build_nilradical(const Gcm&, int, std::optional<RootVec>);
    friend class AlgebraBuilder;

    GradedAlgebra(Gcm g, int cap, std::optional<RootVec> box) : gcm_(std::move(g)), cap_(cap), box_(std::move(box)) {}
    void index_degrees();
    std::uint64_t key(int u, int v) const { return static_cast<std::uint64_t>(u) * labels_.size() + v; }

    Gcm gcm_;
    int cap_ = 0;
    std::optional<RootVec> box_;
    std::vector<DegreeInfo> degrees_;
    std::map<RootVec, int> deg_index_;
    std::vector<int> deg_of_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> label_index_;
    std::vector<int> gens_;
    std::unordered_map<std::uint64_t, SpVec> table_;  // u < v, nonzero results

    struct Lazy {
        std::once_flag once;
        std::vector<Certificate> certs;
    };
    std::shared_ptr<Lazy> lazy_ = std::make_shared<Lazy>();
};

GradedAlgebra build_nilradical(const Gcm& g, int N, std::optional<RootVec> box = std::nullopt);

// All beta in Q+\{0} with height <= N (and beta <= box), sorted.
std::vector<RootVec> degrees_up_to(int n, int N, const std::optional<RootVec>& box = std::nullopt);

// Witt necklace formula for the multigraded free Lie algebra.
Z witt_dimension(const RootVec& beta);

// Independent multiplicity oracle (Peterson recurrence with B = DA).
int peterson_mult_oracle(const Gcm& g, const RootVec& beta);
std::map<RootVec, int> peterson_table(const Gcm& g, int H);

// Borel subalgebra h ⊕ ñ⁺. Global index space: [0, h_dim) is the chosen
// basis of h, then h_dim + g for the nilradical basis.
class BorelAlgebra {
public:
    explicit BorelAlgebra(std::shared_ptr<const GradedAlgebra> nil);

    const GradedAlgebra& nil() const { return *nil_; }
    std::shared_ptr<const GradedAlgebra> nil_ptr() const { return nil_; }
    int h_dim() const { return h_dim_; }
    int m_rank() const { return m_; }
    int m_prime() const { return nil_->rank() - m_; }
    // pairing()(j, a) = alpha_j(h_a)
    const QMatrix& pairing() const { return pairing_; }
    const std::vector<int>& extra_units() const { return extra_; }
    const std::vector<QVec>& center_basis() const { return center_; }
    Q root_value(const RootVec& beta, int a) const;
    Q root_value(const RootVec& beta, const QVec& h) const;

    int dim_total() const { return h_dim_ + nil_->dim_total(); }
    int nil_index(int g) const { return h_dim_ + g; }
    // Degree of a global index; zero vector for h.
    RootVec degree_of(int b) const;
    int height_of(int b) const { return b < h_dim_ ? 0 : nil_->height_of(b - h_dim_); }
    SpVec bracket_trunc(int u, int v) const;
    SpVec bracket_trunc(const SpVec& x, const SpVec& y) const;

private:
    std::shared_ptr<const GradedAlgebra> nil_;
    int h_dim_ = 0, m_ = 0;
    QMatrix pairing_;
    std::vector<int> extra_;
    std::vector<QVec> center_;
};

BorelAlgebra build_borel(const Gcm& g, int N);

}  // namespace kmd

#endif
