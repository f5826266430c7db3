#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "qlr/errors.hpp"
#include "qlr/quaternion.hpp"

namespace qlr {

using Index = Eigen::Index;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense m x n quaternion matrix A = A0 + A1 i + A2 j + A3 k, stored as four
/// real row-major component matrices of equal shape.
class QuatMatrix {
public:
    QuatMatrix() = default;

    /// Zero matrix.
    QuatMatrix(Index rows, Index cols);

    /// Takes ownership of the four components. Shapes must agree and every
    /// entry must be finite.
    QuatMatrix(RealMatrix a0, RealMatrix a1, RealMatrix a2, RealMatrix a3);

    static QuatMatrix identity(Index n);

    /// Pure matrix 0 + r i + g j + b k.
    static QuatMatrix pure(RealMatrix a1, RealMatrix a2, RealMatrix a3);

    Index rows() const { return c_[0].rows(); }
    Index cols() const { return c_[0].cols(); }
    bool empty() const { return c_[0].size() == 0; }

    const RealMatrix& component(int c) const { return c_[static_cast<std::size_t>(c)]; }
    /// Mutable access. Callers must not resize a single component.
    RealMatrix& component(int c) { return c_[static_cast<std::size_t>(c)]; }

    const RealMatrix& a0() const { return c_[0]; }
    const RealMatrix& a1() const { return c_[1]; }
    const RealMatrix& a2() const { return c_[2]; }
    const RealMatrix& a3() const { return c_[3]; }

    Quaternion operator()(Index row, Index col) const {
        return {c_[0](row, col), c_[1](row, col), c_[2](row, col), c_[3](row, col)};
    }
    void set(Index row, Index col, const Quaternion& q) {
        c_[0](row, col) = q.r;
        c_[1](row, col) = q.i;
        c_[2](row, col) = q.j;
        c_[3](row, col) = q.k;
    }

    /// True iff every entry of the real component is exactly zero.
    bool is_pure() const;

    QuatMatrix& operator+=(const QuatMatrix& o);
    QuatMatrix& operator-=(const QuatMatrix& o);
    QuatMatrix& operator*=(double s);

    bool operator==(const QuatMatrix& o) const;

private:
    std::array<RealMatrix, 4> c_;
};

QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator*(QuatMatrix a, double s);
QuatMatrix operator*(double s, QuatMatrix a);

/// Quaternion matrix product (Hamilton products of entries, summed).
QuatMatrix qmat_mul(const QuatMatrix& a, const QuatMatrix& b);
inline QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b) { return qmat_mul(a, b); }

/// (A*)_ij = conj(A_ji).
QuatMatrix conj_transpose(const QuatMatrix& a);

/// Partial conjugates: the named pair of imaginary components is negated,
/// the third is kept. IJ gives A0 - A1 i - A2 j + A3 k.
enum class PartialConj { IJ, IK, JK };
QuatMatrix partial_conj(const QuatMatrix& a, PartialConj which);

/// Structured 4m x 4n real representation of an m x n quaternion matrix:
///
///     [ A0 -A1 -A2 -A3 ]
///     [ A1  A0 -A3  A2 ]
///     [ A2  A3  A0 -A1 ]
///     [ A3 -A2  A1  A0 ]
///
/// phi(AB) = phi(A) phi(B), phi(A*) = phi(A)^T.
struct RealRep {
    Eigen::MatrixXd data;
    Index m = 0;
    Index n = 0;
};

RealRep to_real_rep(const QuatMatrix& a);

/// Inverse of to_real_rep. Each component is the average of its four copies;
/// copies disagreeing by more than rel_tol * max|data| raise StructureError.
QuatMatrix from_real_rep(const RealRep& x, double rel_tol = 1e-12);

double frobenius_norm_sq(const QuatMatrix& a);
double frobenius_norm(const QuatMatrix& a);
const RealMatrix& real_part(const QuatMatrix& a);
QuatMatrix pure_part(const QuatMatrix& a);

void require_same_shape(const QuatMatrix& a, const QuatMatrix& b, const char* what);

// JSON document {"m":int,"n":int,"a0":[[...]],...,"a3":[[...]]}, row-major.
nlohmann::json to_json(const QuatMatrix& a);
QuatMatrix quat_matrix_from_json(const nlohmann::json& doc);

QuatMatrix load_quat_matrix(const std::string& path);
void save_quat_matrix(const QuatMatrix& a, const std::string& path);

}  // namespace qlr
