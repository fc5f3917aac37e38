#include "nmrsim/complex_matrix.hpp"

#include <stdexcept>

namespace nmrsim {

namespace {

void require_square(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("ComplexMatrix requires a square matrix");
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    require_square(m_);
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXcd m(n, n);
    int r = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("from_rows: ragged row list");
        }
        int c = 0;
        for (const auto& v : row) m(r, c++) = v;
        ++r;
    }
    return ComplexMatrix(std::move(m));
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool ComplexMatrix::is_unitary(double tol) const {
    Eigen::MatrixXcd p = m_ * m_.adjoint();
    p -= Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
    return p.cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator+");
    return ComplexMatrix(a.eigen() + b.eigen());
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator-");
    return ComplexMatrix(a.eigen() - b.eigen());
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "matmul");
    return ComplexMatrix(a.eigen() * b.eigen());
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    return ComplexMatrix(s * a.eigen());
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) {
    return ComplexMatrix(s * a.eigen());
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim();
    const int nb = b.dim();
    Eigen::MatrixXcd out(na * nb, na * nb);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.at(i, j) * b.eigen();
        }
    }
    return ComplexMatrix(std::move(out));
}

ComplexMatrix expm_generator(const ComplexMatrix& h, double t_seconds) {
    if (!h.is_hermitian(1e-12)) {
        throw std::invalid_argument("expm_generator: generator is not Hermitian to 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.eigen());
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("expm_generator: eigendecomposition failed");
    }
    const Eigen::VectorXd w = es.eigenvalues();
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::VectorXcd ph(w.size());
    for (int k = 0; k < w.size(); ++k) {
        ph(k) = std::exp(Complex(0.0, -t_seconds * w(k)));
    }
    return ComplexMatrix(v * ph.asDiagonal() * v.adjoint());
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.dim() == 0) return 0.0;
    Eigen::MatrixXcd g = a.eigen().adjoint() * a.eigen();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const double lmax = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(lmax, 0.0));
}

Complex trace(const ComplexMatrix& a) {
    return a.eigen().trace();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }
ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1, 0}, {0, -1}}); }
ComplexMatrix spin_x() { return 0.5 * pauli_x(); }
ComplexMatrix spin_y() { return 0.5 * pauli_y(); }
ComplexMatrix spin_z() { return 0.5 * pauli_z(); }
ComplexMatrix raising() { return ComplexMatrix::from_rows({{0, 1}, {0, 0}}); }

ComplexMatrix embed(const ComplexMatrix& op, int slot, int n_qubits) {
    if (slot < 0 || slot >= n_qubits) {
        throw std::invalid_argument("embed: slot out of range");
    }
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (int k = 0; k < n_qubits; ++k) {
        out = kron(out, k == slot ? op : ComplexMatrix::identity(2));
    }
    return out;
}

}  // namespace nmrsim
