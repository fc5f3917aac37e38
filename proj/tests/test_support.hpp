#pragma once

#include <random>

#include "nmrsim/complex_matrix.hpp"

namespace nmrsim::test {

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            if (i == j) {
                m.at(i, i) = u(rng);
            } else {
                const Complex v(u(rng), u(rng));
                m.at(i, j) = v;
                m.at(j, i) = std::conj(v);
            }
        }
    }
    return m;
}

inline ComplexMatrix random_traceless_hermitian(int dim, std::mt19937_64& rng) {
    ComplexMatrix m = random_hermitian(dim, rng);
    const Complex t = trace(m) / static_cast<double>(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) -= t;
    return m;
}

inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
    return expm_generator(random_hermitian(dim, rng), 1.0);
}

// Independent route to the largest singular value: power iteration on A†A.
// Kept free of the library's eigensolver so norm checks are dual-sourced.
inline double power_iteration_spectral_norm(const ComplexMatrix& a, int iters = 500) {
    const ComplexMatrix g = a.adjoint() * a;
    const int n = g.dim();
    std::vector<Complex> v(n, Complex(1.0, 0.5));
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<Complex> w(n, Complex(0, 0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) w[i] += g.at(i, j) * v[j];
        }
        double norm = 0.0;
        for (const auto& x : w) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (auto& x : w) x /= norm;
        lambda = norm;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

}  // namespace nmrsim::test
