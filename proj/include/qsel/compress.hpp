// compress.hpp - Operators on tensor products: sesquilinear compressions A(u,v),
// partial trace over the second factor, and exchange-map ampliations A^(n,eps_k).

#pragma once

#include <numeric>
#include <vector>

#include "qsel/ops.hpp"

namespace qsel::ops {

// Operator on a tensor product; the last factor is the "system" factor
// (the Fock/environment space H), everything before it is initial-space slots.
struct ProductOperator {
    std::vector<Index> factor_dims;
    Matrix matrix;

    ProductOperator(std::vector<Index> dims, Matrix m)
        : factor_dims(std::move(dims)), matrix(std::move(m)) {
        Index total = 1;
        for (Index d : factor_dims) {
            if (d <= 0) throw std::invalid_argument("ProductOperator: factor dims must be positive");
            total *= d;
        }
        if (matrix.rows() != total || matrix.cols() != total)
            throw std::invalid_argument("ProductOperator: matrix side must equal product of factor dims");
    }

    Index front_dim() const {
        Index d = 1;
        for (std::size_t i = 0; i + 1 < factor_dims.size(); ++i) d *= factor_dims[i];
        return d;
    }
    Index last_dim() const { return factor_dims.back(); }

    ProductOperator adjoint() const { return ProductOperator(factor_dims, matrix.adjoint()); }

    // A^(eps): A for eps=0, A* for eps=1
    ProductOperator epsilon(int eps) const { return eps ? adjoint() : *this; }
};

struct EpsilonWord {
    std::vector<int> bits;

    explicit EpsilonWord(std::vector<int> b) : bits(std::move(b)) {
        for (int x : bits)
            if (x != 0 && x != 1) throw std::invalid_argument("EpsilonWord: entries must be 0 or 1");
    }
    int parity() const {
        int p = 0;
        for (int x : bits) p ^= x;
        return p;
    }
};

// A(u,v) on the last factor: <x, A(u,v) y> = <u⊗x, A v⊗y>.
// Anti-linear in u, linear in v; u may live on the combined front factors.
inline Matrix compress(const ProductOperator& A, const Vector& u, const Vector& v) {
    const Index dh = A.front_dim();
    const Index dH = A.last_dim();
    if (u.size() != dh || v.size() != dh)
        throw std::invalid_argument("compress: vector dimension does not match front factors");
    Matrix R = Matrix::Zero(dH, dH);
    for (Index a = 0; a < dh; ++a) {
        if (u(a) == Complex(0.0)) continue;
        for (Index b = 0; b < dh; ++b) {
            if (v(b) == Complex(0.0)) continue;
            R += std::conj(u(a)) * v(b) * A.matrix.block(a * dH, b * dH, dH, dH);
        }
    }
    return R;
}

// AB(u,v) = Σ_j A(u,e_j) B(e_j,v) over an orthonormal basis of the front space
inline Matrix compress_product_identity(const ProductOperator& A, const ProductOperator& B,
                                        const Vector& u, const Vector& v,
                                        const std::vector<Vector>& basis) {
    if (A.front_dim() != B.front_dim() || A.last_dim() != B.last_dim())
        throw std::invalid_argument("compress_product_identity: operator shapes differ");
    const Index dh = A.front_dim();
    if (static_cast<Index>(basis.size()) != dh)
        throw std::invalid_argument("compress_product_identity: basis must span the front space");
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const Complex g = basis[i].dot(basis[j]);
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-12)
                throw std::invalid_argument("compress_product_identity: basis is not orthonormal");
        }
    Matrix R = Matrix::Zero(A.last_dim(), A.last_dim());
    for (const auto& e : basis) R += compress(A, u, e) * compress(B, e, v);
    return R;
}

// Tr_H over the second factor of a two-factor operator
inline Matrix partial_trace_second(const ProductOperator& B) {
    if (B.factor_dims.size() != 2)
        throw std::invalid_argument("partial_trace_second: expected exactly two factors");
    const Index dh = B.factor_dims[0];
    const Index dH = B.factor_dims[1];
    Matrix R = Matrix::Zero(dh, dh);
    for (Index a = 0; a < dh; ++a)
        for (Index b = 0; b < dh; ++b)
            R(a, b) = B.matrix.block(a * dH, b * dH, dH, dH).trace();
    return R;
}

// Exchange permutation P_{k,n} on h^{⊗n}⊗H, acting on product vectors as
// u_1⊗...⊗u_n⊗x -> u_{tau(1)}⊗...⊗u_{tau(n)}⊗x with tau = (k k+1 ... n).
// 1-based k as in the defining cycle.
inline Matrix exchange_permutation(Index dim_h, Index dim_H, int k, int n) {
    if (k < 1 || k > n) throw std::out_of_range("exchange_permutation: k out of range");
    Index dhn = 1;
    for (int i = 0; i < n; ++i) dhn *= dim_h;
    const Index total = dhn * dim_H;
    std::vector<int> tau(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tau[static_cast<std::size_t>(i)] = i + 1; // identity, 0-based slots
    for (int i = 0; i < n; ++i) {
        const int s = i + 1;
        if (s < k) tau[static_cast<std::size_t>(i)] = s;
        else if (s < n) tau[static_cast<std::size_t>(i)] = s + 1;
        else tau[static_cast<std::size_t>(i)] = k;
    }
    Matrix P = Matrix::Zero(total, total);
    std::vector<Index> digits(static_cast<std::size_t>(n));
    for (Index col = 0; col < total; ++col) {
        Index rest = col;
        const Index x = rest % dim_H;
        rest /= dim_H;
        for (int i = n - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = rest % dim_h;
            rest /= dim_h;
        }
        // new slot i carries u_{tau(i)}
        Index row = 0;
        for (int i = 0; i < n; ++i) row = row * dim_h + digits[static_cast<std::size_t>(tau[static_cast<std::size_t>(i)] - 1)];
        row = row * dim_H + x;
        P(row, col) = 1.0;
    }
    return P;
}

// A^{(n,eps_k)} = P_{k,n}^* (1_{h^{⊗(n-1)}} ⊗ A^{(eps)}) P_{k,n}: places A on the
// k-th initial-space slot and the system factor. Built entrywise; the middle
// operator only couples slot k and H, all other slots are deltas.
inline ProductOperator exchange_ampliate(const ProductOperator& A, int k, int n, int eps = 0) {
    if (A.factor_dims.size() != 2)
        throw std::invalid_argument("exchange_ampliate: expected a two-factor operator");
    if (k < 1 || k > n) throw std::out_of_range("exchange_ampliate: k out of range");
    const Index dh = A.factor_dims[0];
    const Index dH = A.factor_dims[1];
    const Matrix Ae = eps ? Matrix(A.matrix.adjoint()) : A.matrix;
    Index dhn = 1;
    for (int i = 0; i < n; ++i) dhn *= dh;
    const Index total = dhn * dH;
    Matrix R = Matrix::Zero(total, total);
    const Index stride_k = [&] {
        Index s = dH;
        for (int i = n - 1; i > k - 1; --i) s *= dh;
        return s;
    }();
    for (Index col = 0; col < total; ++col) {
        const Index jk = (col / stride_k) % dh;
        const Index y = col % dH;
        const Index base = col - jk * stride_k - y;
        for (Index ik = 0; ik < dh; ++ik)
            for (Index x = 0; x < dH; ++x) {
                const Complex val = Ae(ik * dH + x, jk * dH + y);
                if (val == Complex(0.0)) continue;
                R(base + ik * stride_k + x, col) += val;
            }
    }
    std::vector<Index> dims(static_cast<std::size_t>(n), dh);
    dims.push_back(dH);
    return ProductOperator(std::move(dims), std::move(R));
}

} // namespace qsel::ops
