#pragma once
// Floating-point tools for approximate representations: normalized
// Hilbert-Schmidt norms, relator defects, rounding near-projections to a
// projective measurement, and strategies from representations.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qcorr/correlations.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/presentations.hpp"
#include "qcorr/word.hpp"

namespace qcorr {

struct NotUnitary : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SpectralGapFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Eigen::MatrixXcd to_eigen(const FloatMatrix& m) {
    Eigen::MatrixXcd r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

inline FloatMatrix from_eigen(const Eigen::MatrixXcd& m) {
    FloatMatrix r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

// sqrt(Tr(M* M) / d)
inline double hs_norm(const FloatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hs_norm needs a square matrix");
    if (m.rows() == 0) return 0.0;
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s / static_cast<double>(m.rows()));
}

inline Complex normalized_trace(const FloatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("normalized_trace needs a square matrix");
    return m.trace() / static_cast<double>(m.rows());
}

inline double op_norm(const FloatMatrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline bool is_unitary(const FloatMatrix& u, double tol = kDefaultTolerance) {
    if (u.rows() != u.cols()) return false;
    return max_abs_diff(u.adjoint() * u, FloatMatrix::identity(u.rows())) <= tol;
}

struct DefectReport {
    std::vector<double> relator_defects;  // ||phi(r) - 1|| per relator
    double epsilon = 0;                   // max over relators
};

inline FloatMatrix evaluate_word(const Word& w, const std::vector<FloatMatrix>& images) {
    if (images.empty()) throw std::invalid_argument("empty assignment");
    FloatMatrix r = FloatMatrix::identity(images.front().rows());
    for (const auto& l : w) r = r * (l.exp > 0 ? images.at(l.gen) : images.at(l.gen).adjoint());
    return r;
}

inline DefectReport approx_defect(const Presentation& pres, const std::vector<FloatMatrix>& assignment,
                                  double tol = kDefaultTolerance) {
    if (static_cast<int>(assignment.size()) != pres.generators) throw std::invalid_argument("one matrix per generator");
    for (std::size_t g = 0; g < assignment.size(); ++g)
        if (!is_unitary(assignment[g], tol)) throw NotUnitary("generator " + pres.name(static_cast<int>(g)) + " is not unitary");
    DefectReport rep;
    const FloatMatrix I = FloatMatrix::identity(assignment.empty() ? 0 : assignment.front().rows());
    for (const auto& r : pres.relators) {
        const double d = hs_norm(evaluate_word(r, assignment) - I);
        rep.relator_defects.push_back(d);
        rep.epsilon = std::max(rep.epsilon, d);
    }
    return rep;
}

// Delta_pos(1) = 2 sqrt 2, Delta_pos(n + 1) = (40 n + 3) Delta_pos(n)
inline double delta_pos(int n) {
    if (n < 1) throw std::invalid_argument("delta_pos: n must be >= 1");
    double d = 2 * std::sqrt(2.0);
    for (int k = 1; k < n; ++k) d *= 40.0 * k + 3;
    return d;
}

inline double delta(double c, int n) {
    if (c < 1) throw std::invalid_argument("delta: c must be >= 1");
    return delta_pos(n) * (2 * c * c + 7 * c + 5) * n + 2 * c + 4;
}

// Hypothesis defects of the rounding lemma for a family of near-projections.
struct NearPvmDefects {
    double c = 1;        // max operator norm, at least 1
    double epsilon = 0;  // max of the four defect kinds
};

inline NearPvmDefects near_pvm_defects(const std::vector<FloatMatrix>& P) {
    NearPvmDefects r;
    if (P.empty()) return r;
    FloatMatrix sum(P.front().rows(), P.front().cols());
    for (std::size_t i = 0; i < P.size(); ++i) {
        r.c = std::max(r.c, op_norm(P[i]));
        r.epsilon = std::max({r.epsilon, hs_norm(P[i] * P[i] - P[i]), hs_norm(P[i].adjoint() - P[i])});
        for (std::size_t j = 0; j < P.size(); ++j)
            if (i != j) r.epsilon = std::max(r.epsilon, hs_norm(P[i] * P[j]));
        sum = sum + P[i];
    }
    r.epsilon = std::max(r.epsilon, hs_norm(sum - FloatMatrix::identity(sum.rows())));
    return r;
}

struct RoundingResult {
    std::vector<FloatMatrix> pvm;
    std::vector<double> distances;  // ||Pi_i - P_i|| (normalized HS)
    double pvm_defect = 0;          // max projection / completeness defect of the output
};

namespace detail {

inline constexpr double kGap = 1e-8;

// chi_[1/2, inf) of a self-adjoint matrix
inline Eigen::MatrixXcd threshold_half(const Eigen::MatrixXcd& q) {
    const Eigen::MatrixXcd h = (q + q.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const auto& ev = es.eigenvalues();
    const auto& V = es.eigenvectors();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(q.rows(), q.cols());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (std::abs(ev(k) - 0.5) < kGap) throw SpectralGapFailure("eigenvalue within 1e-8 of 1/2");
        if (ev(k) >= 0.5) out += V.col(k) * V.col(k).adjoint();
    }
    return out;
}

}  // namespace detail

inline double pvm_defect(const std::vector<FloatMatrix>& pvm) {
    if (pvm.empty()) return 0.0;
    double d = 0;
    FloatMatrix sum(pvm.front().rows(), pvm.front().cols());
    for (const auto& p : pvm) {
        d = std::max({d, hs_norm(p * p - p), hs_norm(p.adjoint() - p)});
        sum = sum + p;
    }
    return std::max(d, hs_norm(sum - FloatMatrix::identity(sum.rows())));
}

// Symmetrize, threshold at 1/2, then orthogonalize by sequential
// compression onto the complement of the projections chosen so far. The last
// outcome takes the remaining complement.
inline RoundingResult round_to_pvm(const std::vector<FloatMatrix>& family, double c = 1.0) {
    if (family.empty()) throw std::invalid_argument("round_to_pvm: empty family");
    if (c < 1) throw std::invalid_argument("round_to_pvm: c must be >= 1");
    const Eigen::Index d = static_cast<Eigen::Index>(family.front().rows());
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    std::vector<Eigen::MatrixXcd> qprime;
    for (const auto& P : family) {
        if (static_cast<Eigen::Index>(P.rows()) != d || static_cast<Eigen::Index>(P.cols()) != d)
            throw std::invalid_argument("round_to_pvm: dimension mismatch");
        const Eigen::MatrixXcd e = to_eigen(P);
        qprime.push_back(detail::threshold_half((e + e.adjoint()) / 2.0));
    }
    RoundingResult res;
    Eigen::MatrixXcd used = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < qprime.size(); ++i) {
        Eigen::MatrixXcd pi;
        if (i + 1 == qprime.size()) {
            pi = I - used;
        } else {
            const Eigen::MatrixXcd comp = I - used;
            pi = detail::threshold_half(comp * qprime[i] * comp);
        }
        pi = (pi + pi.adjoint()) / 2.0;
        used += pi;
        res.pvm.push_back(from_eigen(pi));
        res.distances.push_back(hs_norm(res.pvm.back() - family[i]));
    }
    res.pvm_defect = pvm_defect(res.pvm);
    return res;
}

// ---- strategies from representations ----

inline void check_pvm_family(const std::vector<std::vector<FloatMatrix>>& fam, double tol) {
    if (fam.empty()) throw InvariantViolation("no measurements");
    const std::size_t d = fam.front().front().rows();
    for (const auto& ms : fam) {
        for (const auto& m : ms)
            if (m.rows() != d || m.cols() != d) throw InvariantViolation("measurement dimension mismatch");
        if (pvm_defect(ms) > tol) throw InvariantViolation("family is not a projective measurement");
    }
}

// Maximally entangled state on C^d (x) C^d with Bob using transposes.
inline FloatStrategy strategy_from_rep(const Scenario& sc, const std::vector<std::vector<FloatMatrix>>& measurements,
                                       double tol = kDefaultTolerance) {
    if (!sc.symmetric()) throw ScenarioMismatch("strategy_from_rep needs X = Y and A = B");
    if (measurements.size() != sc.X.size()) throw InvariantViolation("one family per question");
    for (const auto& ms : measurements)
        if (ms.size() != sc.A.size()) throw InvariantViolation("one operator per answer");
    check_pvm_family(measurements, tol);
    const std::size_t d = measurements.front().front().rows();
    FloatStrategy s;
    s.mode = StrategyMode::Tensor;
    s.dim_a = s.dim_b = d;
    s.scenario = sc;
    s.state.assign(d * d, Complex(0));
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) s.state[i * d + i] = amp;
    s.alice = measurements;
    for (const auto& ms : measurements) {
        s.bob.emplace_back();
        for (const auto& m : ms) s.bob.back().push_back(m.transpose());
    }
    return s;
}

// The same correlation through the trace: tau(M_x^a M_y^b).
inline FloatCorrelation correlation_via_trace(const Scenario& sc, const std::vector<std::vector<FloatMatrix>>& measurements) {
    FloatCorrelation c(sc);
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t y = 0; y < c.ny(); ++y)
            for (std::size_t a = 0; a < c.na(); ++a)
                for (std::size_t b = 0; b < c.nb(); ++b)
                    c.at(x, y, a, b) = normalized_trace(measurements[x][a] * measurements[y][b]).real();
    return c;
}

// Measurements for the linear-system scenario from binary observables X_j:
// variables answer (0,..,0,s) with (1 + (-1)^s X_j)/2; rows answer a with
// the product over the row of (1 + (-1)^{a_k} X_{row[k]})/2.
inline std::vector<std::vector<FloatMatrix>> linear_system_measurements(const BinaryLinearSystem& A,
                                                                        const std::vector<FloatMatrix>& X) {
    const int kappa = A.kappa().value();
    if (static_cast<int>(X.size()) != A.n()) throw std::invalid_argument("one observable per variable");
    const std::size_t d = X.front().rows();
    const FloatMatrix I = FloatMatrix::identity(d);
    auto half = [&](int j, int s) { return Complex(0.5) * (s == 0 ? I + X[j] : I - X[j]); };
    const unsigned na = 1u << kappa;
    std::vector<std::vector<FloatMatrix>> out;
    for (int i = 0; i < A.m(); ++i) {
        out.emplace_back();
        for (unsigned a = 0; a < na; ++a) {
            FloatMatrix m = I;
            for (int k = 0; k < kappa; ++k) m = m * half(A.row(i)[k], (a >> (kappa - 1 - k)) & 1u);
            out.back().push_back(m);
        }
    }
    for (int j = 0; j < A.n(); ++j) {
        out.emplace_back(na, FloatMatrix(d, d));
        out.back()[0] = half(j, 0);
        out.back()[1] = half(j, 1);
    }
    return out;
}

// Regular representation of the abelianized solution group
// Z_2^n / span(rows): each x_j acts by translation on the cosets.
inline std::vector<FloatMatrix> abelian_regular_observables(const BinaryLinearSystem& A) {
    const int n = A.n();
    if (n > 20) throw TooLarge("abelian_regular_observables: more than 20 variables");
    // reduced row basis over Z_2, pivots at the highest set bit
    std::vector<std::uint32_t> basis;
    for (const auto& r : A.rows()) {
        std::uint32_t v = 0;
        for (int j : r) v ^= 1u << j;
        for (auto b : basis)
            if (v & (1u << (31 - __builtin_clz(b)))) v ^= b;
        if (v) {
            for (auto& b : basis)
                if (b & (1u << (31 - __builtin_clz(v)))) b ^= v;
            basis.push_back(v);
        }
    }
    auto reduce = [&](std::uint32_t v) {
        for (auto b : basis)
            if (v & (1u << (31 - __builtin_clz(b)))) v ^= b;
        return v;
    };
    std::map<std::uint32_t, std::size_t> index;
    for (std::uint32_t v = 0; v < (1u << n); ++v) index.emplace(reduce(v), index.size());
    const std::size_t d = index.size();
    std::vector<FloatMatrix> X;
    for (int j = 0; j < n; ++j) {
        FloatMatrix m(d, d);
        for (const auto& [v, col] : index) m(index.at(reduce(v ^ (1u << j))), col) = 1.0;
        X.push_back(m);
    }
    return X;
}

inline nlohmann::json float_matrix_to_json(const FloatMatrix& m) { return matrix_to_json(m); }
inline FloatMatrix float_matrix_from_json(const nlohmann::json& j) { return matrix_from_json<Complex>(j); }

}  // namespace qcorr
