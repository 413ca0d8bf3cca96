// Copyright 2026 The Stator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference computations for the tests. Everything here is written directly
// against Eigen and the standard library, without going through the library's
// simulation code, so agreement is evidence rather than tautology.

#ifndef STATOR_TESTS_ORACLES_HPP
#define STATOR_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log1p(-p) / std::numbers::ln2;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat kron_all(const std::vector<Mat> &ms) {
    Mat acc = Mat::Identity(1, 1);
    for (const auto &m : ms) {
        acc = kron(acc, m);
    }
    return acc;
}

inline Mat pauli(int k) {
    Mat m = Mat::Zero(2, 2);
    switch (k) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

/// exp(i s H) for hermitian H through its eigen-decomposition.
inline Mat expm_hermitian(const Mat &h, double s) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); i++) {
        phases[i] = std::polar(1.0, s * es.eigenvalues()[i]);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(i a Z^{(x)n}) from its diagonal.
inline Mat collective_z(double a, std::size_t n) {
    const std::size_t d = std::size_t{1} << n;
    Mat u = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; i++) {
        int parity = __builtin_popcountll(i) % 2;
        u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::polar(1.0, parity ? -a : a);
    }
    return u;
}

/// min over phi of the max-entry distance |A - e^{i phi} B|: a full-circle scan, then a fine local scan.
inline double phase_distance(const Mat &a, const Mat &b) {
    auto dist = [&](double phi) { return (a - std::polar(1.0, phi) * b).cwiseAbs().maxCoeff(); };
    constexpr int kCoarse = 20000;
    const double step = 2.0 * kPi / kCoarse;
    double best = std::numeric_limits<double>::infinity(), best_phi = 0.0;
    for (int k = 0; k < kCoarse; k++) {
        double d = dist(k * step);
        if (d < best) {
            best = d;
            best_phi = k * step;
        }
    }
    for (int k = -4000; k <= 4000; k++) {
        best = std::min(best, dist(best_phi + k * step / 2000.0));
    }
    return best;
}

/// Scales K so its Frobenius norm matches a unitary of the same size.
inline Mat as_unitary_scale(const Mat &k) {
    return k * std::sqrt(static_cast<double>(k.rows())) / k.norm();
}

/// Hilbert-Schmidt coefficients of a 4x4 operator on sigma_k (x) sigma_k.
inline std::vector<Complex> pauli_pair_coefficients(const Mat &u) {
    std::vector<Complex> out;
    for (int k = 0; k < 4; k++) {
        out.push_back((kron(pauli(k), pauli(k)).adjoint() * u).trace() / 4.0);
    }
    return out;
}

/// One stage built gate by gate on (R_1..R_N, S_1..S_N); returns the system
/// operator for one worker pattern and leader branch (0 success, 1 failure),
/// unnormalized, including the sigma_z layer after a deterministic failure.
inline Mat stage_operator(std::size_t n, double beta, double gamma, const std::vector<int> &bits, int branch,
                          bool deterministic = false) {
    const std::size_t dr = std::size_t{1} << n;
    const std::size_t ds = dr;
    Vec resource = Vec::Zero(static_cast<Eigen::Index>(dr));
    resource[0] = std::cos(beta);
    resource[static_cast<Eigen::Index>(dr - 1)] = Complex(0.0, std::sin(beta));

    Mat out(static_cast<Eigen::Index>(ds), static_cast<Eigen::Index>(ds));
    int parity = 0;
    for (int b : bits) {
        parity ^= b;
    }
    const double inv = 1.0 / std::sqrt(2.0);
    for (std::size_t col = 0; col < ds; col++) {
        // Joint amplitudes after the controlled-Zs, indexed (r, s).
        Vec sys = Vec::Zero(static_cast<Eigen::Index>(ds));
        for (std::size_t r = 0; r < dr; r++) {
            Complex amp = resource[static_cast<Eigen::Index>(r)];
            if (amp == Complex(0.0)) {
                continue;
            }
            int sign_bits = __builtin_popcountll(r & col) % 2;
            Complex a = amp * (sign_bits ? -1.0 : 1.0);
            // Workers: <b_j| H on R_j, for j < n-1 (R_1 most significant).
            for (std::size_t j = 0; j + 1 < n; j++) {
                int rj = static_cast<int>((r >> (n - 1 - j)) & 1);
                a *= inv * ((bits[j] & rj) ? -1.0 : 1.0);
            }
            int rn = static_cast<int>(r & 1);
            if (parity && rn) {
                a = -a;
            }
            Complex proj = branch == 0 ? (rn ? std::sin(gamma) : std::cos(gamma))
                                       : (rn ? -std::cos(gamma) : std::sin(gamma));
            sys[static_cast<Eigen::Index>(col)] += a * proj;
        }
        out.col(static_cast<Eigen::Index>(col)) = sys;
    }
    if (deterministic && branch == 1) {
        Mat z = Mat::Identity(1, 1);
        for (std::size_t j = 0; j < n; j++) {
            z = kron(z, pauli(3));
        }
        out = z * out;
    }
    return out;
}

struct TypicalBrute {
    std::uint64_t size = 0;
    double mass = 0.0;
};

/// Walks all 2^M sequences.
inline TypicalBrute typical_brute(std::size_t m, double p, double delta) {
    TypicalBrute out;
    const double h = h2(p);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); s++) {
        int w = __builtin_popcountll(s);
        double logp = w * std::log2(p) + (static_cast<double>(m) - w) * std::log2(1.0 - p);
        if (std::abs(-logp / static_cast<double>(m) - h) <= delta + 1e-12) {
            out.size++;
            out.mass += std::exp2(logp);
        }
    }
    return out;
}

/// Sorts all 2^M sequence probabilities and counts until the mass reaches 1 - eps.
inline std::uint64_t smallest_set_brute(std::size_t m, double p, double eps) {
    std::vector<double> probs;
    probs.reserve(std::size_t{1} << m);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); s++) {
        int w = __builtin_popcountll(s);
        probs.push_back(std::pow(p, w) * std::pow(1.0 - p, static_cast<double>(m) - w));
    }
    std::sort(probs.begin(), probs.end(), std::greater<>());
    double mass = 0.0;
    std::uint64_t count = 0;
    for (double q : probs) {
        if (mass >= 1.0 - eps) {
            break;
        }
        mass += q;
        count++;
    }
    return count;
}

/// Expected ebits of the doubling scheme on pi/2^n, stage by stage.
inline double doubling_cost(unsigned n) {
    double alpha = kPi / std::ldexp(1.0, static_cast<int>(n));
    double reach = 1.0, total = 0.0;
    while (alpha < kPi / 4 - 1e-15) {
        total += reach * h2(std::sin(alpha) * std::sin(alpha));
        reach *= 0.5;
        alpha *= 2.0;
    }
    return total + reach;  // the deterministic pi/4 stage
}

/// min over beta of E(beta) + p_fail(beta) * 1, the best two-stage plan, by a dense scan
/// in u = log tan(beta) plus local golden refinement.
inline double two_stage_value(double r) {
    auto f = [&](double u) {
        double beta = std::atan(std::exp(u));
        double gamma = std::atan(std::tan(r) / std::tan(beta));
        double ps = std::pow(std::cos(beta) * std::cos(gamma), 2) + std::pow(std::sin(beta) * std::sin(gamma), 2);
        if (ps < 0.01) {
            return std::numeric_limits<double>::infinity();
        }
        return h2(std::sin(beta) * std::sin(beta)) + (1.0 - ps);
    };
    double best_u = 0.0, best = std::numeric_limits<double>::infinity();
    const double lo = std::log(std::tan(r)) - 20.0, hi = std::log(std::tan(r)) + 20.0;
    const int steps = 200000;
    for (int i = 0; i <= steps; i++) {
        double u = lo + (hi - lo) * i / steps;
        double v = f(u);
        if (v < best) {
            best = v;
            best_u = u;
        }
    }
    double a = best_u - (hi - lo) / steps, b = best_u + (hi - lo) / steps;
    for (int it = 0; it < 200; it++) {
        double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if (f(m1) < f(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    return std::min({best, f(0.5 * (a + b)), 1.0});
}

/// Least-squares slope/intercept/R^2.
struct Fit {
    double slope, intercept, r2;
};

inline Fit linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss_tot = 0, ss_res = 0, mean = sy / n;
    for (std::size_t i = 0; i < x.size(); i++) {
        ss_tot += (y[i] - mean) * (y[i] - mean);
        double e = y[i] - (slope * x[i] + intercept);
        ss_res += e * e;
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

// Random objects for property tests.

inline Vec random_vector(std::size_t d, std::mt19937_64 &g) {
    std::normal_distribution<double> n;
    Vec v(static_cast<Eigen::Index>(d));
    for (auto &x : v) {
        x = Complex(n(g), n(g));
    }
    return v.normalized();
}

inline Mat random_hermitian(std::size_t d, std::mt19937_64 &g) {
    std::normal_distribution<double> n;
    Mat m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            m(i, j) = Complex(n(g), n(g));
        }
    }
    return (m + m.adjoint()) / 2.0;
}

inline Mat random_unitary(std::size_t d, std::mt19937_64 &g) {
    Eigen::HouseholderQR<Mat> qr(random_hermitian(d, g) + Mat::Identity(static_cast<Eigen::Index>(d),
                                                                        static_cast<Eigen::Index>(d)) *
                                                              Complex(0.0, 1.0));
    return qr.householderQ();
}

}  // namespace oracle

#endif
