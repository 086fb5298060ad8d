#ifndef KMD_COMBID_HPP
#define KMD_COMBID_HPP

#include "kmd/qlinalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kmd {

struct IdentityReport {
    std::string name;
    std::vector<std::pair<std::string, long>> params;
    Q lhs, rhs;
    bool pass = false;
    // Extra exact values explaining a failure, rendered as strings.
    std::vector<std::pair<std::string, std::string>> diagnostics;
};

Z binomial(long n, long k);  // 0 outside 0 <= k <= n

IdentityReport vandermonde_check(long r, long r1, long k0, long k);
IdentityReport beta_sum(long r1, long k0);
IdentityReport coeff_3_16(long r, long r1, long k0);
IdentityReport sl2_string_check(long r, long k);

struct IdentitySweep {
    std::vector<IdentityReport> reports;
    int total = 0, failed = 0;
    std::vector<std::pair<std::string, std::pair<int, int>>> per_family;  // name -> (total, failed)
    bool pass() const { return failed == 0; }
};

// vandermonde: 0 <= k <= r1 <= r <= rmax, 0 <= k0 < r1; beta_sum: 1 <= r1 <= rmax;
// coeff: r1 < r <= rmax; sl2: r <= sl2_max.
IdentitySweep identity_sweep(long rmax = 8, long sl2_max = 10);

}  // namespace kmd

#endif
