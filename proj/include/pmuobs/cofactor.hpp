#pragma once

// Determinants, adjugates and Cramer solves for small fixed-size matrices by
// direct cofactor expansion. The point of doing this by hand instead of going
// through a pivoted factorization is that the adjugate and the Cramer route
// are then exact-formula consistent with each other: both are polynomial in
// the entries, so their agreement is a meaningful cross-check rather than a
// tautology of one shared decomposition.

#include <Eigen/Dense>

namespace pmuobs {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;

inline double det2(double a, double b, double c, double d) {
    return a * d - b * c;
}

inline double det3(const double m[3][3]) {
    return m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2])
         - m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2])
         + m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
}

inline double det3(const Eigen::Matrix3d& m) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = m(i, j);
    return det3(a);
}

inline double det4(const double m[4][4]) {
    double acc = 0.0;
    double sub[3][3];
    for (int c = 0; c < 4; ++c) {
        for (int i = 1; i < 4; ++i) {
            int jj = 0;
            for (int j = 0; j < 4; ++j) {
                if (j == c) continue;
                sub[i - 1][jj++] = m[i][j];
            }
        }
        const double cof = ((c % 2) ? -1.0 : 1.0) * m[0][c] * det3(sub);
        acc += cof;
    }
    return acc;
}

// Minor of a 5x5 with row r and column c struck out.
inline double minor5(const Matrix5d& m, int r, int c) {
    double sub[4][4];
    int ii = 0;
    for (int i = 0; i < 5; ++i) {
        if (i == r) continue;
        int jj = 0;
        for (int j = 0; j < 5; ++j) {
            if (j == c) continue;
            sub[ii][jj++] = m(i, j);
        }
        ++ii;
    }
    return det4(sub);
}

inline double det5(const Matrix5d& m) {
    double acc = 0.0;
    for (int c = 0; c < 5; ++c) {
        const double sign = (c % 2) ? -1.0 : 1.0;
        acc += sign * m(0, c) * minor5(m, 0, c);
    }
    return acc;
}

// adj(M)(i,j) = (-1)^{i+j} * minor(j,i); satisfies adj(M) M = det(M) I.
inline Matrix5d adjugate5(const Matrix5d& m) {
    Matrix5d adj;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double sign = ((i + j) % 2) ? -1.0 : 1.0;
            adj(i, j) = sign * minor5(m, j, i);
        }
    return adj;
}

// Cramer numerators for M x = b: i-th component is det of M with column i
// replaced by b (the i-th row of M^T replaced by b^T), which equals
// (adj(M) b)_i without forming the adjugate.
inline Vector5d cramer5(const Matrix5d& m, const Vector5d& b) {
    Vector5d out;
    for (int i = 0; i < 5; ++i) {
        Matrix5d repl = m;
        repl.col(i) = b;
        out(i) = det5(repl);
    }
    return out;
}

}  // namespace pmuobs
