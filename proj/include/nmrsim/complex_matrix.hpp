#pragma once

#include <complex>
#include <initializer_list>

#include <Eigen/Dense>

namespace nmrsim {

using Complex = std::complex<double>;

// Dense square complex matrix; the carrier for density matrices, Hamiltonians
// and unitaries. Everything in this project is 2x2 or 4x4, so all operations
// are eager, by value, and exact up to double round-off.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : m_(Eigen::MatrixXcd::Zero(dim, dim)) {}
    explicit ComplexMatrix(Eigen::MatrixXcd m);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
    // Row-major entry list, e.g. {{1, 0}, {0, -1}}.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    int dim() const { return static_cast<int>(m_.rows()); }
    Complex at(int r, int c) const { return m_(r, c); }
    Complex& at(int r, int c) { return m_(r, c); }

    ComplexMatrix adjoint() const { return ComplexMatrix(m_.adjoint()); }
    ComplexMatrix conjugate() const { return ComplexMatrix(m_.conjugate()); }

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-10) const;
    double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

    const Eigen::MatrixXcd& eigen() const { return m_; }

  private:
    Eigen::MatrixXcd m_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexMatrix operator*(double s, const ComplexMatrix& a);

/// Standard matrix product (same as operator*); throws on dimension mismatch.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product with `a` as the slow (left) index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(-i t h) for a Hermitian generator h in angular-frequency units, via
// eigendecomposition. Hamiltonians are stored as H/hbar throughout, so hbar
// never appears in an exponent.
ComplexMatrix expm_generator(const ComplexMatrix& h, double t_seconds);

/// Largest singular value, computed as sqrt of the largest eigenvalue of A†A.
double spectral_norm(const ComplexMatrix& a);

Complex trace(const ComplexMatrix& a);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Pauli matrices and the spin-1/2 operators I = sigma/2.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix spin_x();
ComplexMatrix spin_y();
ComplexMatrix spin_z();
/// Raising operator I+ = I_x + i I_y = |0><1| (I_z|0> = +1/2|0>).
ComplexMatrix raising();

/// Embed a one-spin operator into an n-qubit space at `slot` (0 = leftmost/slow).
ComplexMatrix embed(const ComplexMatrix& op, int slot, int n_qubits);

}  // namespace nmrsim
