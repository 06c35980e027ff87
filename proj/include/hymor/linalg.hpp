#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "hymor/types.hpp"

namespace hymor {

/// e^{At}. Exact identity for t = 0.
inline Mat expm(const Mat& a, double t = 1.0) {
    require_square(a, "expm input");
    if (!std::isfinite(t)) throw ValidationError("expm: t must be finite");
    if (t == 0.0 || a.rows() == 0) return Mat::Identity(a.rows(), a.cols());
    return (a * t).exp();
}

inline CVec eigenvalues(const Mat& a) {
    require_square(a, "eigenvalues input");
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration failed to converge");
    return es.eigenvalues();
}

inline double spectral_radius(const Mat& a) {
    if (a.rows() == 0) return 0.0;
    return eigenvalues(a).cwiseAbs().maxCoeff();
}

/// Largest real part over the spectrum (continuous-time stability margin).
inline double spectral_abscissa(const Mat& a) {
    return eigenvalues(a).real().maxCoeff();
}

/// Solves X R - L X = M for X (L: nl x nl, R: nr x nr, M: nl x nr) by Kronecker
/// vectorization and dense LU. Requires sigma(L) and sigma(R) disjoint; rejects
/// inputs whose spectra come closer than 1e-8 * (1 + |L| + |R|).
inline Mat solve_sylvester(const Mat& l, const Mat& r, const Mat& m) {
    require_square(l, "solve_sylvester L");
    require_square(r, "solve_sylvester R");
    require_shape(m, l.rows(), r.rows(), "solve_sylvester M");

    const CVec el = eigenvalues(l);
    const CVec er = eigenvalues(r);
    const double tol = 1e-8 * (1.0 + l.norm() + r.norm());
    for (Eigen::Index i = 0; i < el.size(); ++i) {
        for (Eigen::Index k = 0; k < er.size(); ++k) {
            const double gap = std::abs(el(i) - er(k));
            if (gap < tol) {
                std::ostringstream os;
                os << "solve_sylvester: spectra of L and R nearly intersect at eigenvalue (" << el(i).real()
                   << (el(i).imag() < 0 ? "" : "+") << el(i).imag() << "i), gap " << gap << " < tol " << tol;
                throw SingularityError(os.str());
            }
        }
    }

    const Eigen::Index nl = l.rows(), nr = r.rows();
    // vec(XR - LX) = (R^T (x) I - I (x) L) vec(X), column-major vec.
    Mat k = Mat::Zero(nl * nr, nl * nr);
    for (Eigen::Index j = 0; j < nr; ++j)
        for (Eigen::Index i = 0; i < nr; ++i)
            k.block(j * nl, i * nl, nl, nl) = r(i, j) * Mat::Identity(nl, nl);
    for (Eigen::Index i = 0; i < nr; ++i)
        k.block(i * nl, i * nl, nl, nl) -= l;

    Vec vec_m(nl * nr);
    for (Eigen::Index j = 0; j < nr; ++j) vec_m.segment(j * nl, nl) = m.col(j);
    const Vec vec_x = k.partialPivLu().solve(vec_m);

    Mat x(nl, nr);
    for (Eigen::Index j = 0; j < nr; ++j) x.col(j) = vec_x.segment(j * nl, nl);
    if (!x.allFinite()) throw SingularityError("solve_sylvester: LU produced non-finite solution");
    return x;
}

/// int_0^dt e^{A(dt-s)} B e^{Cs} ds, evaluated exactly (up to expm accuracy) as the
/// top-right block of exp([[A, B], [0, C]] dt).
inline Mat expm_cross_integral(const Mat& a, const Mat& b, const Mat& c, double dt) {
    require_square(a, "expm_cross_integral A");
    require_square(c, "expm_cross_integral C");
    require_shape(b, a.rows(), c.rows(), "expm_cross_integral B");
    const Eigen::Index na = a.rows(), nc = c.rows();
    if (dt == 0.0) return Mat::Zero(na, nc);
    Mat blk = Mat::Zero(na + nc, na + nc);
    blk.topLeftCorner(na, na) = a;
    blk.topRightCorner(na, nc) = b;
    blk.bottomRightCorner(nc, nc) = c;
    return expm(blk, dt).topRightCorner(na, nc);
}

inline Eigen::Index rank_of(const Mat& m) {
    if (m.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<Mat> qr(m);
    return qr.rank();
}

/// (A, C) observability: rank [C; CA; ...; CA^{n-1}] == n.
inline bool is_observable(const Mat& a, const Mat& c) {
    require_square(a, "observability A");
    if (c.cols() != a.rows()) throw DimensionError("observability: C column count must match A");
    const Eigen::Index n = a.rows(), p = c.rows();
    Mat obs(p * n, n);
    Mat blk = c;
    for (Eigen::Index i = 0; i < n; ++i) {
        obs.middleRows(i * p, p) = blk;
        blk = blk * a;
    }
    return rank_of(obs) == n;
}

/// (A, B) reachability: rank [B, AB, ..., A^{n-1}B] == n.
inline bool is_reachable(const Mat& a, const Mat& b) {
    require_square(a, "reachability A");
    if (b.rows() != a.rows()) throw DimensionError("reachability: B row count must match A");
    const Eigen::Index n = a.rows(), m = b.cols();
    Mat ctr(n, m * n);
    Mat blk = b;
    for (Eigen::Index i = 0; i < n; ++i) {
        ctr.middleCols(i * m, m) = blk;
        blk = a * blk;
    }
    return rank_of(ctr) == n;
}

inline bool is_invertible(const Mat& a, double rel_tol = 1e-12) {
    require_square(a, "invertibility input");
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(rel_tol);
    return lu.isInvertible();
}

}  // namespace hymor
