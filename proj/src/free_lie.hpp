#ifndef KMD_FREE_LIE_HPP
#define KMD_FREE_LIE_HPP

// Free Lie algebra on letters 0..n-1 in the Lyndon basis.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kmd {

using Word = std::string;  // letter values stored as chars 0..n-1
using IntComb = std::vector<std::pair<int, long long>>;  // sorted by word id

class FreeLie {
public:
    explicit FreeLie(int letters) : n_(letters) {}

    int letters() const { return n_; }
    int id(const Word& w);
    const Word& word(int id) const { return words_[id]; }
    // Standard factorization w = uv, v the longest proper Lyndon suffix.
    std::pair<int, int> factor(int id);

    // [h, k] for Lyndon words h, k, expanded in the Lyndon basis.
    const IntComb& bracket(int h, int k);
    IntComb bracket(int h, const IntComb& x);
    IntComb bracket(const IntComb& x, int k);

    // All Lyndon words of length <= n in lexicographic order (Duval).
    static std::vector<Word> lyndon_words(int letters, int max_len);
    static bool is_lyndon(const Word& w);

private:
    int n_;
    std::vector<Word> words_;
    std::unordered_map<Word, int> ids_;
    std::unordered_map<int, std::pair<int, int>> factors_;
    std::unordered_map<std::uint64_t, IntComb> memo_;
};

void comb_axpy(IntComb& y, long long a, const IntComb& x);

}  // namespace kmd

#endif
