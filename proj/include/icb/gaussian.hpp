#pragma once
// Exact second-moment model of the jointly Gaussian signals in the genie-aided
// channel. Every signal is a linear map over seven independent base variables
//   (X0, X11, X22, Z~1, Z~2, N1, N2),
// so covariances are Gram products and differential entropies / mutual
// informations reduce to log-determinants of small conditional covariances.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/rng.hpp"

namespace icb {

enum class Sig : int {
    X0, X11, X22, Zt1, Zt2, N1, N2, // base
    X1, X2, Z1, Z2, Y1, Y2, U1, U2, // channel signals and genies
    Yt1, Yt2, Ut1, Ut2              // private-part ("tilde") signals
};
inline constexpr int kNumSignals = 19;
inline constexpr int kNumBase = 7;

inline const char* to_string(Sig s) {
    static const char* names[kNumSignals] = {
        "X0G", "X11G", "X22G", "Zt1", "Zt2", "N1", "N2",
        "X1G", "X2G", "Z1", "Z2", "Y1G", "Y2G", "U1G", "U2G",
        "Yt1G", "Yt2G", "Ut1G", "Ut2G"};
    return names[static_cast<int>(s)];
}

inline std::string describe(std::span<const Sig> sigs) {
    std::string out = "{";
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        if (i) out += ",";
        out += to_string(sigs[i]);
    }
    return out + "}";
}

struct CovarianceModel {
    ChannelParams ch;
    PowerAllocation alloc;
    GenieParams gp;
    Eigen::Matrix<double, kNumBase, 1> base_var;            // diagonal base covariance
    Eigen::Matrix<double, kNumSignals, kNumBase> lift;      // signal = lift * base

    const Eigen::Matrix<double, 1, kNumBase> row(Sig s) const {
        return lift.row(static_cast<int>(s));
    }

    double cov(Sig a, Sig b) const {
        return row(a).cwiseProduct(base_var.transpose()).dot(row(b));
    }
    double var(Sig a) const { return cov(a, a); }

    Eigen::MatrixXd cov_matrix(std::span<const Sig> a, std::span<const Sig> b) const {
        Eigen::MatrixXd out(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    cov(a[i], b[j]);
        return out;
    }
    Eigen::MatrixXd cov_matrix(std::span<const Sig> a) const { return cov_matrix(a, a); }

    // One joint sample of the listed signals; draw k indexes independent
    // samples under the same seed/stream.
    Eigen::VectorXd sample(std::span<const Sig> sigs, std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t k) const {
        Eigen::Matrix<double, kNumBase, 1> z;
        for (int d = 0; d < kNumBase; ++d)
            z(d) = std::sqrt(base_var(d)) * rand_normal(seed, stream, k * kNumBase + d);
        Eigen::VectorXd out(sigs.size());
        for (std::size_t i = 0; i < sigs.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = row(sigs[i]).dot(z);
        return out;
    }
};

// Builds the joint model:
//   X1 = X11 + sqrt(P-P1) X0,  X2 = X22 + sqrt(P-P2) X0,
//   Zk = (a_k/sqrt(v_k)) Z~k + Nk with Var(Nk) = 1 - a_k^2 (so Var(Zk) = 1),
//   Y1 = X1 + c X2 + Z1,  Y2 = X2 + c X1 + Z2,  Uk = c Xk + Z~k,
// plus the private-part signals Yt1 = X11 + c X22 + Z1, Ut1 = c X11 + Z~1 and
// their mirrors.
inline CovarianceModel build_model(const ChannelParams& ch, const PowerAllocation& alloc,
                                   const GenieParams& gp) {
    ch.validate();
    alloc.validate(ch);
    gp.validate();
    if (!(gp.v1 > 0.0 && gp.v2 > 0.0))
        throw std::domain_error("build_model: requires v1, v2 > 0");

    CovarianceModel m;
    m.ch = ch;
    m.alloc = alloc;
    m.gp = gp;
    m.base_var << 1.0, alloc.P1, alloc.P2, gp.v1, gp.v2, 1.0 - gp.a1_sq, 1.0 - gp.a2_sq;
    m.lift.setZero();

    auto R = [&](Sig s) -> Eigen::Matrix<double, kNumSignals, kNumBase>::RowXpr {
        return m.lift.row(static_cast<int>(s));
    };
    const double c = ch.c;
    const double s1 = std::sqrt(std::max(0.0, ch.P - alloc.P1));
    const double s2 = std::sqrt(std::max(0.0, ch.P - alloc.P2));

    R(Sig::X0)(0) = 1.0;
    R(Sig::X11)(1) = 1.0;
    R(Sig::X22)(2) = 1.0;
    R(Sig::Zt1)(3) = 1.0;
    R(Sig::Zt2)(4) = 1.0;
    R(Sig::N1)(5) = 1.0;
    R(Sig::N2)(6) = 1.0;
    R(Sig::X1) = R(Sig::X11) + s1 * R(Sig::X0);
    R(Sig::X2) = R(Sig::X22) + s2 * R(Sig::X0);
    R(Sig::Z1) = (std::sqrt(gp.a1_sq) / std::sqrt(gp.v1)) * R(Sig::Zt1) + R(Sig::N1);
    R(Sig::Z2) = (std::sqrt(gp.a2_sq) / std::sqrt(gp.v2)) * R(Sig::Zt2) + R(Sig::N2);
    R(Sig::Y1) = R(Sig::X1) + c * R(Sig::X2) + R(Sig::Z1);
    R(Sig::Y2) = R(Sig::X2) + c * R(Sig::X1) + R(Sig::Z2);
    R(Sig::U1) = c * R(Sig::X1) + R(Sig::Zt1);
    R(Sig::U2) = c * R(Sig::X2) + R(Sig::Zt2);
    R(Sig::Yt1) = R(Sig::X11) + c * R(Sig::X22) + R(Sig::Z1);
    R(Sig::Yt2) = R(Sig::X22) + c * R(Sig::X11) + R(Sig::Z2);
    R(Sig::Ut1) = c * R(Sig::X11) + R(Sig::Zt1);
    R(Sig::Ut2) = c * R(Sig::X22) + R(Sig::Zt2);
    return m;
}

namespace detail {

inline double psd_det(const Eigen::MatrixXd& s, const char* what, const std::string& block) {
    if (s.rows() == 0) return 1.0;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    double det = 1.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) det *= ldlt.vectorD()(i);
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::runtime_error(std::string(what) + ": singular covariance block " + block);
    return det;
}

inline Eigen::MatrixXd conditional_cov(const CovarianceModel& m, std::span<const Sig> t,
                                       std::span<const Sig> cond, const char* what) {
    Eigen::MatrixXd st = m.cov_matrix(t);
    if (cond.empty()) return st;
    Eigen::MatrixXd sc = m.cov_matrix(cond);
    Eigen::MatrixXd stc = m.cov_matrix(t, cond);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sc);
    double det = 1.0;
    for (Eigen::Index i = 0; i < sc.rows(); ++i) det *= ldlt.vectorD()(i);
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::runtime_error(std::string(what) + ": singular covariance block "
                                 + describe(cond));
    return st - stc * ldlt.solve(stc.transpose());
}

} // namespace detail

// Conditional mutual information I(targets; observations | conditioners) in
// bits, via I = 1/2 log2(det S_{T|C} / det S_{T|C,O}).
inline double gaussian_cmi(const CovarianceModel& m, std::span<const Sig> targets,
                           std::span<const Sig> observations, std::span<const Sig> conditioners) {
    Eigen::MatrixXd s1 = detail::conditional_cov(m, targets, conditioners, "gaussian_cmi");
    std::vector<Sig> co(conditioners.begin(), conditioners.end());
    co.insert(co.end(), observations.begin(), observations.end());
    Eigen::MatrixXd s2 = detail::conditional_cov(m, targets, co, "gaussian_cmi");
    const double d1 = detail::psd_det(s1, "gaussian_cmi", describe(targets) + "|" + describe(conditioners));
    const double d2 = detail::psd_det(s2, "gaussian_cmi",
                                      describe(targets) + "|" + describe(std::span<const Sig>(co)));
    return 0.5 * std::log2(d1 / d2);
}

inline double gaussian_cmi(const CovarianceModel& m, std::initializer_list<Sig> t,
                           std::initializer_list<Sig> o, std::initializer_list<Sig> c) {
    return gaussian_cmi(m, std::span<const Sig>(t.begin(), t.size()),
                        std::span<const Sig>(o.begin(), o.size()),
                        std::span<const Sig>(c.begin(), c.size()));
}

// Gap between the genie-aided outer bound and the superposition inner bound:
//   1/2 [ I(X1; U1 | X0, Y1) + I(X2; U2 | X0, Y2) ]  >= 0.
inline double genie_gap(const CovarianceModel& m) {
    return 0.5 * (gaussian_cmi(m, {Sig::X1}, {Sig::U1}, {Sig::X0, Sig::Y1})
                  + gaussian_cmi(m, {Sig::X2}, {Sig::U2}, {Sig::X0, Sig::Y2}));
}

// Gaussian Markov-chain test X -> Y -> Z via
//   Cov(X,Z) = Cov(X,Y) Cov(Y)^{-1} Cov(Y,Z).
struct MarkovCheck {
    bool is_markov;
    double residual; // max-abs deviation of the covariance identity
};

inline MarkovCheck markov_check(const CovarianceModel& m, std::span<const Sig> X,
                                std::span<const Sig> Y, std::span<const Sig> Z) {
    Eigen::MatrixXd cy = m.cov_matrix(Y);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cy);
    double det = 1.0;
    for (Eigen::Index i = 0; i < cy.rows(); ++i) det *= ldlt.vectorD()(i);
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::runtime_error("markov_check: singular covariance block " + describe(Y));
    Eigen::MatrixXd cxz = m.cov_matrix(X, Z);
    Eigen::MatrixXd cxy = m.cov_matrix(X, Y);
    Eigen::MatrixXd cyz = m.cov_matrix(Y, Z);
    Eigen::MatrixXd predicted = cxy * ldlt.solve(cyz);
    const double resid = (cxz - predicted).cwiseAbs().maxCoeff();
    const double scale = std::max({1.0, cxz.cwiseAbs().maxCoeff(), predicted.cwiseAbs().maxCoeff()});
    return MarkovCheck{resid <= 1e-10 * scale, resid};
}

inline MarkovCheck markov_check(const CovarianceModel& m, std::initializer_list<Sig> X,
                                std::initializer_list<Sig> Y, std::initializer_list<Sig> Z) {
    return markov_check(m, std::span<const Sig>(X.begin(), X.size()),
                        std::span<const Sig>(Y.begin(), Y.size()),
                        std::span<const Sig>(Z.begin(), Z.size()));
}

// Monte Carlo cross-check of the log-det entropy pipeline. Samples the signal
// set from the generative model and averages -log2 p(x) under the model
// density (the covariance is not re-fit from the samples), so a mismatch
// between construction and claimed second moments shows up as bias.
struct McEntropyCheck {
    double estimate_bits;
    double stderr_bits;
    double closed_form_bits;
    bool within_4_sigma;
};

inline McEntropyCheck mc_entropy_check(const CovarianceModel& m, std::span<const Sig> sigs,
                                       std::size_t samples, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(sigs.size());
    Eigen::MatrixXd cov = m.cov_matrix(sigs);
    const double det = detail::psd_det(cov, "mc_entropy_check", describe(sigs));
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double log2_2pi = std::log2(2.0 * 3.14159265358979323846);
    const double log2_e = 1.4426950408889634;
    const double closed = 0.5 * static_cast<double>(n) * (log2_2pi + log2_e) + 0.5 * std::log2(det);
    const double base_term = 0.5 * static_cast<double>(n) * log2_2pi + 0.5 * std::log2(det);

    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        Eigen::VectorXd x = m.sample(sigs, seed, 1, i);
        const double q = x.dot(ldlt.solve(x));
        const double val = base_term + 0.5 * q * log2_e; // -log2 p(x)
        const double delta = val - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (val - mean);
    }
    const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    const double se = std::sqrt(variance / static_cast<double>(samples));
    McEntropyCheck out{mean, se, closed, std::fabs(mean - closed) <= 4.0 * se};
    return out;
}

inline McEntropyCheck mc_entropy_check(const CovarianceModel& m, std::initializer_list<Sig> sigs,
                                       std::size_t samples, std::uint64_t seed) {
    return mc_entropy_check(m, std::span<const Sig>(sigs.begin(), sigs.size()), samples, seed);
}

} // namespace icb
