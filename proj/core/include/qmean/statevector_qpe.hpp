#pragma once

#include <cstdint>
#include <vector>

namespace qmean {

/// Reference outcome distribution of canonical amplitude estimation, from a
/// dense statevector simulation of the circuit: one system qubit prepared by
/// A|0> = cos(theta)|0> + sin(theta)|1>, an M-level phase register put in
/// uniform superposition by the M-point DFT, controlled powers of the Grover
/// operator Q = -A S_0 A^dagger S_chi, and the inverse DFT.
///
/// Cost is O(M^2) per call with dense (2M x 2M block) matrices; meant for
/// validating ae_outcome_dist at M <= 64.
std::vector<double> qpe_outcome_dist_statevector(double p, std::uint64_t M);

/// Total-variation distance between two distributions on the same index set.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

struct AeVerification {
    double max_tv = 0.0;
    std::uint64_t worst_M = 0;
    double worst_p = 0.0;
    std::uint64_t cases = 0;
};

/// The amplitudes exercised by verify_ae: 0, 1, on-grid and off-grid angles.
std::vector<double> verification_amplitudes();

/// Compares ae_outcome_dist against the statevector reference for every
/// M in {2, 4, 8, ...} up to max_M and every verification amplitude.
/// Throws std::invalid_argument unless 2 <= max_M <= 64.
AeVerification verify_ae(std::uint64_t max_M);

}  // namespace qmean
