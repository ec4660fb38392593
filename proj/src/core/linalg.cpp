#include "linalg.hpp"

#include "errors.hpp"

namespace pnsurf {

namespace {

// Gauss-Jordan to reduced row echelon form; returns pivot column per row.
std::vector<size_t> rref(QMatrix& M) {
    std::vector<size_t> pivots;
    if (M.empty()) return pivots;
    size_t rows = M.size(), cols = M[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && M[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(M[p], M[r]);
        Rational inv = 1 / M[r][c];
        for (size_t j = c; j < cols; ++j) M[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::vector<QVector> nullspace(const QMatrix& M) {
    if (M.empty()) return {};
    size_t cols = M[0].size();
    QMatrix R = M;
    std::vector<size_t> pivots = rref(R);

    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;

    std::vector<QVector> basis;
    for (size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        QVector v(cols, Rational(0));
        v[free_c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -R[i][free_c];
        basis.push_back(std::move(v));
    }
    return basis;
}

size_t matrix_rank(QMatrix M) {
    return rref(M).size();
}

Rational det3(const Mat3Q& M) {
    return M[0].x * (M[1].y * M[2].z - M[1].z * M[2].y) -
           M[0].y * (M[1].x * M[2].z - M[1].z * M[2].x) +
           M[0].z * (M[1].x * M[2].y - M[1].y * M[2].x);
}

Vec3Q solve3(const Mat3Q& M, const Vec3Q& b) {
    Rational d = det3(M);
    if (d == 0)
        throw Error(ErrorCode::singular_matrix, "singular 3x3 system");
    Mat3Q Mx = M, My = M, Mz = M;
    for (int r = 0; r < 3; ++r) {
        Mx[r].x = b[r];
        My[r].y = b[r];
        Mz[r].z = b[r];
    }
    return {det3(Mx) / d, det3(My) / d, det3(Mz) / d};
}

} // namespace pnsurf
