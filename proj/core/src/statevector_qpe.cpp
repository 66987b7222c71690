#include "qmean/statevector_qpe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qmean/amplitude.hpp"

namespace qmean {

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 out{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    return out;
}

Mat2 transpose(const Mat2& a) {
    return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

// Applies (F ⊗ I) to a state laid out as state[r * 2 + s], where F is the
// M-point DFT (sign = +1) or its inverse (sign = -1).
std::vector<cplx> apply_dft(const std::vector<cplx>& state, std::uint64_t M, double sign) {
    std::vector<cplx> out(state.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(M));
    for (std::uint64_t y = 0; y < M; ++y) {
        for (std::uint64_t j = 0; j < M; ++j) {
            // Reduce the phase index first so the angle stays in [0, 2 pi).
            const double angle = sign * 2.0 * std::numbers::pi *
                                 static_cast<double>((y * j) % M) / static_cast<double>(M);
            const cplx w = std::polar(norm, angle);
            out[2 * y] += w * state[2 * j];
            out[2 * y + 1] += w * state[2 * j + 1];
        }
    }
    return out;
}

}  // namespace

std::vector<double> qpe_outcome_dist_statevector(double p, std::uint64_t M) {
    if (M < 1) {
        throw std::invalid_argument("qpe_outcome_dist_statevector: M must be at least 1");
    }
    const double theta = grover_angle(p);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    const Mat2 A{{{c, -s}, {s, c}}};
    const Mat2 S0{{{-1.0, 0.0}, {0.0, 1.0}}};    // I - 2|0><0|
    const Mat2 Schi{{{1.0, 0.0}, {0.0, -1.0}}};  // I - 2 Pi, Pi = |1><1|
    Mat2 Q = mul(mul(mul(A, S0), transpose(A)), Schi);
    for (auto& row : Q) {
        for (double& v : row) {
            v = -v;
        }
    }

    // Register |0>, system A|0>.
    std::vector<cplx> state(2 * M);
    state[0] = c;
    state[1] = s;
    state = apply_dft(state, M, 1.0);

    // Controlled powers: register value j applies Q^j to the system.
    Mat2 power{{{1.0, 0.0}, {0.0, 1.0}}};
    for (std::uint64_t j = 0; j < M; ++j) {
        const cplx a0 = state[2 * j];
        const cplx a1 = state[2 * j + 1];
        state[2 * j] = power[0][0] * a0 + power[0][1] * a1;
        state[2 * j + 1] = power[1][0] * a0 + power[1][1] * a1;
        power = mul(Q, power);
    }

    state = apply_dft(state, M, -1.0);

    std::vector<double> probs(M);
    for (std::uint64_t y = 0; y < M; ++y) {
        probs[y] = std::norm(state[2 * y]) + std::norm(state[2 * y + 1]);
    }
    return probs;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("total_variation: size mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return 0.5 * sum;
}

std::vector<double> verification_amplitudes() {
    const auto sin2 = [](double x) {
        const double s = std::sin(x);
        return s * s;
    };
    constexpr double pi = std::numbers::pi;
    return {0.0,  1.0,  0.5,  0.25, 0.75,     sin2(pi / 8), sin2(3 * pi / 16), sin2(pi / 32),
            0.1,  0.2,  0.3,  0.4,  0.6,      0.7,          0.8,               0.9,
            0.01, 0.99, 0.123456, 0.987654};
}

AeVerification verify_ae(std::uint64_t max_M) {
    if (max_M < 2 || max_M > 64) {
        throw std::invalid_argument("verify_ae: max_M must lie in [2, 64]");
    }
    AeVerification report;
    for (std::uint64_t M = 2; M <= max_M; M *= 2) {
        for (double p : verification_amplitudes()) {
            const double tv =
                total_variation(ae_outcome_dist(p, M), qpe_outcome_dist_statevector(p, M));
            ++report.cases;
            if (tv > report.max_tv || report.worst_M == 0) {
                report.max_tv = std::max(report.max_tv, tv);
                report.worst_M = M;
                report.worst_p = p;
            }
        }
    }
    return report;
}

}  // namespace qmean
