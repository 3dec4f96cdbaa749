// Dense complex linear algebra helpers for small multipartite systems.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entcert {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline Mat dag(const Mat& m) { return m.adjoint(); }

// Kronecker product, first factor slowest (lexicographic multi-index order).
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat kron_all(const std::vector<Mat>& factors) {
    if (factors.empty()) throw error("kron_all: no factors");
    Mat out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

inline double hermiticity_defect(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

struct EigResult {
    std::vector<double> values;   // descending
    Mat vectors;                  // column k pairs with values[k]
};

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
inline EigResult eig_hermitian(const Mat& m, double herm_tol = 1e-8) {
    if (m.rows() != m.cols()) throw error("eig_hermitian: non-square input");
    if (hermiticity_defect(m) > herm_tol)
        throw error("eig_hermitian: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) throw error("eig_hermitian: solver failed");
    const auto& vals = solver.eigenvalues();   // ascending
    const auto& vecs = solver.eigenvectors();
    const Eigen::Index n = m.rows();
    EigResult out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[static_cast<std::size_t>(k)] = vals(n - 1 - k);
        out.vectors.col(k) = vecs.col(n - 1 - k);
    }
    return out;
}

inline double max_eigenvalue(const Mat& m) { return eig_hermitian(m).values.front(); }

// Largest singular value of a real-entry matrix stored as Mat.
inline double max_singular_value(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

// Row-major strides for a multi-index with the first index slowest.
inline std::vector<int> strides_for(const std::vector<int>& extents) {
    std::vector<int> s(extents.size(), 1);
    for (int i = static_cast<int>(extents.size()) - 2; i >= 0; --i)
        s[static_cast<std::size_t>(i)] =
            s[static_cast<std::size_t>(i) + 1] * extents[static_cast<std::size_t>(i) + 1];
    return s;
}

inline int flat_index(const std::vector<int>& idx, const std::vector<int>& strides) {
    int off = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) off += idx[i] * strides[i];
    return off;
}

// Advances a mixed-radix counter; returns false once it wraps around.
inline bool next_index(std::vector<int>& idx, const std::vector<int>& extents) {
    for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
        auto u = static_cast<std::size_t>(i);
        if (++idx[u] < extents[u]) return true;
        idx[u] = 0;
    }
    return false;
}

}  // namespace entcert
