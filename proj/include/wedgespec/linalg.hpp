#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace wedgespec {

/// Dense square complex matrix with (row, col) access. Entries must stay
/// finite; eigenvalues() checks before factorizing.
class DenseMatrix {
public:
    static constexpr int size_cap = 4096;

    explicit DenseMatrix(int n) : m_(Eigen::MatrixXcd::Zero(checked(n), checked(n))) {}

    int size() const { return static_cast<int>(m_.rows()); }

    std::complex<double>& operator()(int i, int j) { return m_(i, j); }
    const std::complex<double>& operator()(int i, int j) const { return m_(i, j); }

    const Eigen::MatrixXcd& eigen() const { return m_; }

    bool all_finite() const {
        return m_.allFinite();
    }

    bool is_real(double tol = 0.0) const {
        return m_.imag().cwiseAbs().maxCoeff() <= tol;
    }

    std::complex<double> trace() const { return m_.trace(); }

private:
    static int checked(int n) {
        if (n < 1) throw std::invalid_argument("DenseMatrix: size must be >= 1");
        if (n > size_cap) throw std::invalid_argument("DenseMatrix: size exceeds cap");
        return n;
    }

    Eigen::MatrixXcd m_;
};

/// Eigenvalues of a general dense matrix, multiplicities included, in no
/// particular order. Real and real-symmetric inputs are routed to the
/// specialized factorizations.
inline std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
    const int n = m.size();
    std::vector<std::complex<double>> out(n);

    if (m.is_real()) {
        Eigen::MatrixXd a = m.eigen().real();
        double scale = a.cwiseAbs().maxCoeff();
        if ((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1.0)) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("eigenvalues: symmetric eigensolver did not converge");
            for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
            return out;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigenvalues: eigensolver did not converge");
        for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
        return out;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.eigen(), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: eigensolver did not converge");
    for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

}  // namespace wedgespec
