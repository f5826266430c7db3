#include "qlr/quat_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlr/io.hpp"

namespace qlr {

namespace {

struct Slot {
    int block_row;
    int block_col;
    double sign;
};

// Where each component appears in the real representation.
constexpr Slot kSlots[4][4] = {
    {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}},
    {{1, 0, 1.0}, {0, 1, -1.0}, {3, 2, 1.0}, {2, 3, -1.0}},
    {{2, 0, 1.0}, {0, 2, -1.0}, {3, 1, -1.0}, {1, 3, 1.0}},
    {{3, 0, 1.0}, {0, 3, -1.0}, {2, 1, 1.0}, {1, 2, -1.0}},
};

void check_finite(const RealMatrix& m) {
    if (!m.allFinite()) {
        throw ValidationError("quaternion matrix entries must be finite");
    }
}

}  // namespace

QuatMatrix::QuatMatrix(Index rows, Index cols) {
    if (rows < 0 || cols < 0) {
        throw DimensionError("negative matrix dimension");
    }
    for (auto& c : c_) {
        c = RealMatrix::Zero(rows, cols);
    }
}

QuatMatrix::QuatMatrix(RealMatrix a0, RealMatrix a1, RealMatrix a2, RealMatrix a3)
    : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {
    for (const auto& c : c_) {
        if (c.rows() != c_[0].rows() || c.cols() != c_[0].cols()) {
            throw DimensionError("quaternion components must share one shape");
        }
        check_finite(c);
    }
}

QuatMatrix QuatMatrix::identity(Index n) {
    QuatMatrix out(n, n);
    out.c_[0].setIdentity();
    return out;
}

QuatMatrix QuatMatrix::pure(RealMatrix a1, RealMatrix a2, RealMatrix a3) {
    RealMatrix zero = RealMatrix::Zero(a1.rows(), a1.cols());
    return {std::move(zero), std::move(a1), std::move(a2), std::move(a3)};
}

bool QuatMatrix::is_pure() const { return (c_[0].array() == 0.0).all(); }

QuatMatrix& QuatMatrix::operator+=(const QuatMatrix& o) {
    require_same_shape(*this, o, "addition");
    for (int c = 0; c < 4; ++c) {
        c_[c] += o.c_[c];
    }
    return *this;
}

QuatMatrix& QuatMatrix::operator-=(const QuatMatrix& o) {
    require_same_shape(*this, o, "subtraction");
    for (int c = 0; c < 4; ++c) {
        c_[c] -= o.c_[c];
    }
    return *this;
}

QuatMatrix& QuatMatrix::operator*=(double s) {
    for (auto& c : c_) {
        c *= s;
    }
    return *this;
}

bool QuatMatrix::operator==(const QuatMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols()) {
        return false;
    }
    for (int c = 0; c < 4; ++c) {
        if (c_[c] != o.c_[c]) {
            return false;
        }
    }
    return true;
}

QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b) { return a += b; }
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b) { return a -= b; }
QuatMatrix operator*(QuatMatrix a, double s) { return a *= s; }
QuatMatrix operator*(double s, QuatMatrix a) { return a *= s; }

void require_same_shape(const QuatMatrix& a, const QuatMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream ss;
        ss << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
           << b.cols();
        throw DimensionError(ss.str());
    }
}

QuatMatrix qmat_mul(const QuatMatrix& a, const QuatMatrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream ss;
        ss << "product: inner dimensions differ (" << a.rows() << "x" << a.cols() << " * " << b.rows()
           << "x" << b.cols() << ")";
        throw DimensionError(ss.str());
    }
    const auto& a0 = a.a0();
    const auto& a1 = a.a1();
    const auto& a2 = a.a2();
    const auto& a3 = a.a3();
    const auto& b0 = b.a0();
    const auto& b1 = b.a1();
    const auto& b2 = b.a2();
    const auto& b3 = b.a3();

    QuatMatrix out(a.rows(), b.cols());
    auto& c0 = out.component(0);
    auto& c1 = out.component(1);
    auto& c2 = out.component(2);
    auto& c3 = out.component(3);
    c0.noalias() = a0 * b0;
    c0.noalias() -= a1 * b1;
    c0.noalias() -= a2 * b2;
    c0.noalias() -= a3 * b3;
    c1.noalias() = a0 * b1;
    c1.noalias() += a1 * b0;
    c1.noalias() += a2 * b3;
    c1.noalias() -= a3 * b2;
    c2.noalias() = a0 * b2;
    c2.noalias() -= a1 * b3;
    c2.noalias() += a2 * b0;
    c2.noalias() += a3 * b1;
    c3.noalias() = a0 * b3;
    c3.noalias() += a1 * b2;
    c3.noalias() -= a2 * b1;
    c3.noalias() += a3 * b0;
    return out;
}

QuatMatrix conj_transpose(const QuatMatrix& a) {
    return {a.a0().transpose(), -a.a1().transpose(), -a.a2().transpose(), -a.a3().transpose()};
}

QuatMatrix partial_conj(const QuatMatrix& a, PartialConj which) {
    QuatMatrix out = a;
    switch (which) {
        case PartialConj::IJ:
            out.component(1) *= -1.0;
            out.component(2) *= -1.0;
            break;
        case PartialConj::IK:
            out.component(1) *= -1.0;
            out.component(3) *= -1.0;
            break;
        case PartialConj::JK:
            out.component(2) *= -1.0;
            out.component(3) *= -1.0;
            break;
    }
    return out;
}

RealRep to_real_rep(const QuatMatrix& a) {
    const Index m = a.rows();
    const Index n = a.cols();
    RealRep rep{Eigen::MatrixXd::Zero(4 * m, 4 * n), m, n};
    for (int c = 0; c < 4; ++c) {
        for (const Slot& s : kSlots[c]) {
            rep.data.block(s.block_row * m, s.block_col * n, m, n) = s.sign * a.component(c);
        }
    }
    return rep;
}

QuatMatrix from_real_rep(const RealRep& x, double rel_tol) {
    const Index m = x.m;
    const Index n = x.n;
    if (m < 0 || n < 0 || x.data.rows() != 4 * m || x.data.cols() != 4 * n) {
        throw DimensionError("real representation must be 4m x 4n");
    }
    const double scale = x.data.size() == 0 ? 0.0 : x.data.cwiseAbs().maxCoeff();
    const double tol = rel_tol * scale;
    QuatMatrix out(m, n);
    for (int c = 0; c < 4; ++c) {
        RealMatrix sum = RealMatrix::Zero(m, n);
        for (const Slot& s : kSlots[c]) {
            sum += s.sign * x.data.block(s.block_row * m, s.block_col * n, m, n);
        }
        sum *= 0.25;
        for (const Slot& s : kSlots[c]) {
            const double dev =
                m * n == 0 ? 0.0 : (s.sign * x.data.block(s.block_row * m, s.block_col * n, m, n) - sum).cwiseAbs().maxCoeff();
            if (dev > tol) {
                std::ostringstream ss;
                ss << "real representation violates the quaternion block pattern (component " << c
                   << ", block " << s.block_row << "," << s.block_col << ", deviation " << dev << ")";
                throw StructureError(ss.str());
            }
        }
        out.component(c) = std::move(sum);
    }
    return out;
}

double frobenius_norm_sq(const QuatMatrix& a) {
    return a.a0().squaredNorm() + a.a1().squaredNorm() + a.a2().squaredNorm() + a.a3().squaredNorm();
}

double frobenius_norm(const QuatMatrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

const RealMatrix& real_part(const QuatMatrix& a) { return a.a0(); }

QuatMatrix pure_part(const QuatMatrix& a) {
    QuatMatrix out = a;
    out.component(0).setZero();
    return out;
}

nlohmann::json to_json(const QuatMatrix& a) {
    nlohmann::json doc;
    doc["m"] = a.rows();
    doc["n"] = a.cols();
    static const char* names[4] = {"a0", "a1", "a2", "a3"};
    for (int c = 0; c < 4; ++c) {
        nlohmann::json rows = nlohmann::json::array();
        for (Index r = 0; r < a.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Index col = 0; col < a.cols(); ++col) {
                row.push_back(a.component(c)(r, col));
            }
            rows.push_back(std::move(row));
        }
        doc[names[c]] = std::move(rows);
    }
    return doc;
}

QuatMatrix quat_matrix_from_json(const nlohmann::json& doc) {
    try {
        const auto m = doc.at("m").get<Index>();
        const auto n = doc.at("n").get<Index>();
        if (m < 1 || n < 1) {
            throw ValidationError("matrix JSON: m and n must be positive");
        }
        static const char* names[4] = {"a0", "a1", "a2", "a3"};
        std::array<RealMatrix, 4> comps;
        for (int c = 0; c < 4; ++c) {
            const auto& rows = doc.at(names[c]);
            if (!rows.is_array() || static_cast<Index>(rows.size()) != m) {
                throw ValidationError(std::string("matrix JSON: ") + names[c] + " must have m rows");
            }
            comps[c].resize(m, n);
            for (Index r = 0; r < m; ++r) {
                const auto& row = rows[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<Index>(row.size()) != n) {
                    throw ValidationError(std::string("matrix JSON: ") + names[c] + " row has wrong length");
                }
                for (Index col = 0; col < n; ++col) {
                    comps[c](r, col) = row[static_cast<std::size_t>(col)].get<double>();
                }
            }
        }
        return {std::move(comps[0]), std::move(comps[1]), std::move(comps[2]), std::move(comps[3])};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("matrix JSON: ") + e.what());
    }
}

QuatMatrix load_quat_matrix(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    try {
        return quat_matrix_from_json(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void save_quat_matrix(const QuatMatrix& a, const std::string& path) {
    write_file_atomic(path, to_json(a).dump() + "\n");
}

}  // namespace qlr
