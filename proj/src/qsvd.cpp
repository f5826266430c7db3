#include "qlr/qsvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace qlr {

namespace {

// Column-blocked layout used by the Jacobi kernel: quaternion column j of an
// M x N matrix occupies real columns 4j..4j+3 (components r, i, j, k), so each
// component vector is contiguous.
using Blocks = Eigen::MatrixXd;
using Block4 = Eigen::Matrix<double, Eigen::Dynamic, 4>;
using Mat4 = Eigen::Matrix4d;

constexpr double kEps = std::numeric_limits<double>::epsilon();

Blocks to_blocks(const QuatMatrix& a) {
    Blocks out(a.rows(), 4 * a.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        for (int c = 0; c < 4; ++c) {
            out.col(4 * j + c) = a.component(c).col(j);
        }
    }
    return out;
}

QuatMatrix from_blocks(const Blocks& b, Index cols) {
    QuatMatrix out(b.rows(), cols);
    for (Index j = 0; j < cols; ++j) {
        for (int c = 0; c < 4; ++c) {
            out.component(c).col(j) = b.col(4 * j + c);
        }
    }
    return out;
}

// Matrix M with (row vector q) * M == q * w (Hamilton, w on the right).
Mat4 right_mul_matrix(const Quaternion& w) {
    Mat4 m;
    m << w.r, w.i, w.j, w.k,
        -w.i, w.r, -w.k, w.j,
        -w.j, w.k, w.r, -w.i,
        -w.k, -w.j, w.i, w.r;
    return m;
}

// p* q for two blocked columns.
template <typename P, typename Q>
Quaternion inner(const P& p, const Q& q) {
    Mat4 d;
    for (int c = 0; c < 4; ++c) {
        for (int e = 0; e < 4; ++e) {
            d(c, e) = p.col(c).dot(q.col(e));
        }
    }
    return {d(0, 0) + d(1, 1) + d(2, 2) + d(3, 3),
            d(0, 1) - d(1, 0) - d(2, 3) + d(3, 2),
            d(0, 2) + d(1, 3) - d(2, 0) - d(3, 1),
            d(0, 3) - d(1, 2) + d(2, 1) - d(3, 0)};
}

struct Oriented {
    Blocks work;   // M x 4N, converges to U * Sigma
    Blocks right;  // N x 4N, converges to the right singular vectors
    int sweeps = 0;
};

void jacobi_sweeps(Oriented& o, double norm_a, int max_sweeps) {
    const Index rows = o.work.rows();
    const Index n = o.work.cols() / 4;
    const double tiny = (kEps * norm_a) * (kEps * norm_a);
    const double tol = 4.0 * static_cast<double>(std::max<Index>(rows, 1)) * kEps;

    Block4 p_new(rows, 4), q_rot(rows, 4);
    Block4 vp_new(o.right.rows(), 4), vq_rot(o.right.rows(), 4);

    Eigen::VectorXd col_sq(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        // Column norms are refreshed every sweep and updated in closed form
        // after each rotation.
        for (Index j = 0; j < n; ++j) {
            col_sq(j) = o.work.middleCols<4>(4 * j).squaredNorm();
        }
        for (Index ip = 0; ip + 1 < n; ++ip) {
            for (Index iq = ip + 1; iq < n; ++iq) {
                auto p = o.work.middleCols<4>(4 * ip);
                auto q = o.work.middleCols<4>(4 * iq);
                const double a = col_sq(ip);
                const double b = col_sq(iq);
                if (a <= tiny || b <= tiny) {
                    continue;
                }
                const Quaternion g = inner(p, q);
                const double gn = modulus(g);
                if (!(gn > tol * std::sqrt(a * b))) {
                    continue;
                }
                rotated = true;

                // Rotate q by conj(g/|g|) so p* q becomes real, then apply a
                // real Jacobi rotation to the 2x2 Gram matrix [[a, gn], [gn, b]].
                const Quaternion w = conj(g) * (1.0 / gn);
                const double zeta = (b - a) / (2.0 * gn);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Mat4 mw = right_mul_matrix(w);

                q_rot.noalias() = q * mw;
                p_new = c * p - s * q_rot;
                q = s * p + c * q_rot;
                p = p_new;
                col_sq(ip) = std::max(a - t * gn, 0.0);
                col_sq(iq) = b + t * gn;

                auto vp = o.right.middleCols<4>(4 * ip);
                auto vq = o.right.middleCols<4>(4 * iq);
                vq_rot.noalias() = vq * mw;
                vp_new = c * vp - s * vq_rot;
                vq = s * vp + c * vq_rot;
                vp = vp_new;
            }
        }
        o.sweeps = sweep + 1;
        if (!rotated) {
            return;
        }
    }
    std::ostringstream ss;
    ss << "qsvd: Jacobi sweeps did not converge within " << max_sweeps << " sweeps";
    throw ConvergenceError(ss.str());
}

// Orthonormal completion of the columns listed in `targets`: each receives
// the canonical vector with the largest component outside the current span,
// orthogonalized twice against every filled column.
void complete_columns(Blocks& u, std::vector<Index>& filled, const std::vector<Index>& targets) {
    const Index rows = u.rows();
    Eigen::VectorXd outside = Eigen::VectorXd::Ones(rows);
    for (Index b : filled) {
        outside -= u.middleCols<4>(4 * b).rowwise().squaredNorm();
    }
    Block4 x(rows, 4);
    for (Index col : targets) {
        Index t = 0;
        outside.maxCoeff(&t);
        x.setZero();
        x(t, 0) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (Index b : filled) {
                auto ub = u.middleCols<4>(4 * b);
                const Quaternion proj = inner(ub, x);
                x.noalias() -= ub * right_mul_matrix(proj);
            }
        }
        const double nrm = x.norm();
        if (!(nrm > 1e-3)) {
            throw ConvergenceError("qsvd: orthonormal completion failed");
        }
        u.middleCols<4>(4 * col) = x / nrm;
        outside -= u.middleCols<4>(4 * col).rowwise().squaredNorm();
        filled.push_back(col);
    }
}

QsvdFactors finish(Oriented& o, bool transposed) {
    const Index big = o.work.rows();
    const Index k = o.work.cols() / 4;
    const double zero_tol = kEps * o.work.norm();

    Eigen::VectorXd norms(k);
    for (Index j = 0; j < k; ++j) {
        norms(j) = o.work.middleCols<4>(4 * j).norm();
    }
    std::vector<Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return norms(x) > norms(y); });

    Blocks u(big, 4 * k);
    Blocks v(o.right.rows(), 4 * k);
    Eigen::VectorXd sigma(k);
    std::vector<Index> filled;
    std::vector<Index> deficient;
    for (Index dst = 0; dst < k; ++dst) {
        const Index src = order[static_cast<std::size_t>(dst)];
        sigma(dst) = norms(src);
        v.middleCols<4>(4 * dst) = o.right.middleCols<4>(4 * src);
        if (norms(src) > zero_tol && norms(src) > 0.0) {
            u.middleCols<4>(4 * dst) = o.work.middleCols<4>(4 * src) / norms(src);
            filled.push_back(dst);
        } else {
            deficient.push_back(dst);
        }
    }
    complete_columns(u, filled, deficient);

    // In the transposed problem the roles of the factors swap.
    Blocks& left = transposed ? v : u;
    Blocks& right = transposed ? u : v;
    for (Index j = 0; j < k; ++j) {
        auto col = left.middleCols<4>(4 * j);
        for (Index t = 0; t < col.rows(); ++t) {
            const Quaternion e{col(t, 0), col(t, 1), col(t, 2), col(t, 3)};
            const double mod = modulus(e);
            if (mod > 1e-8) {
                const Mat4 phase = right_mul_matrix(conj(e) * (1.0 / mod));
                col = (col * phase).eval();
                auto rcol = right.middleCols<4>(4 * j);
                rcol = (rcol * phase).eval();
                col(t, 1) = col(t, 2) = col(t, 3) = 0.0;
                break;
            }
        }
    }

    QsvdFactors f;
    f.sigma = std::move(sigma);
    f.sweeps = o.sweeps;
    f.U = from_blocks(left, k);
    f.V = from_blocks(right, k);
    return f;
}

QsvdFactors run(const QuatMatrix& a, const QuatMatrix* start, const QsvdOptions& opts) {
    const Index m = a.rows();
    const Index n = a.cols();
    if (m < 1 || n < 1) {
        throw DimensionError("qsvd: matrix must be at least 1x1");
    }
    if (opts.max_sweeps < 1) {
        throw ValidationError("qsvd: max_sweeps must be positive");
    }
    const bool transposed = m < n;
    const QuatMatrix oriented = transposed ? conj_transpose(a) : a;
    const Index k = oriented.cols();

    Oriented o;
    if (start != nullptr) {
        o.work = to_blocks(qmat_mul(oriented, *start));
        o.right = to_blocks(*start);
    } else {
        o.work = to_blocks(oriented);
        o.right = to_blocks(QuatMatrix::identity(k));
    }
    jacobi_sweeps(o, frobenius_norm(a), opts.max_sweeps);
    return finish(o, transposed);
}

}  // namespace

QsvdFactors qsvd(const QuatMatrix& a, const QsvdOptions& opts) { return run(a, nullptr, opts); }

QsvdFactors qsvd(const QuatMatrix& a, const QsvdFactors& previous, const QsvdOptions& opts) {
    const bool transposed = a.rows() < a.cols();
    const QuatMatrix& basis = transposed ? previous.U : previous.V;
    const Index k = std::min(a.rows(), a.cols());
    if (basis.rows() != k || basis.cols() != k) {
        return run(a, nullptr, opts);
    }
    return run(a, &basis, opts);
}

QuatMatrix truncate(const QsvdFactors& f, Index r) {
    const Index k = f.sigma.size();
    if (r < 1 || r > k) {
        std::ostringstream ss;
        ss << "truncate: rank " << r << " outside [1, " << k << "]";
        throw ValidationError(ss.str());
    }
    QuatMatrix us(f.U.rows(), r);
    for (int c = 0; c < 4; ++c) {
        us.component(c) = f.U.component(c).leftCols(r) * f.sigma.head(r).asDiagonal();
    }
    QuatMatrix vr(f.V.rows(), r);
    for (int c = 0; c < 4; ++c) {
        vr.component(c) = f.V.component(c).leftCols(r);
    }
    return qmat_mul(us, conj_transpose(vr));
}

Eigen::VectorXd singular_values(const QuatMatrix& a) { return qsvd(a).sigma; }

Index numerical_rank(const Eigen::VectorXd& sigma, double rel_tol) {
    if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
        return 0;
    }
    const double cut = rel_tol * sigma(0);
    return static_cast<Index>((sigma.array() > cut).count());
}

Index numerical_rank(const QuatMatrix& a, double rel_tol) { return numerical_rank(singular_values(a), rel_tol); }

}  // namespace qlr
