#pragma once

// Dense complex matrices at desk scale (N up to a few hundred) with the few
// factorizations the toolkit needs: Hermitian eigenvalues by cyclic Jacobi,
// determinants by LU, and Householder QR.

#include <complex>
#include <vector>

namespace freeconv::linalg {

using Complex = std::complex<double>;

/// Square n x n complex matrix, row-major.
class ComplexMatrix
{
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n);
    ComplexMatrix(int n, std::vector<Complex> entries);

    static ComplexMatrix identity(int n);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    int size() const { return n_; }
    Complex& operator()(int i, int j) { return a_[index(i, j)]; }
    const Complex& operator()(int i, int j) const { return a_[index(i, j)]; }
    const std::vector<Complex>& entries() const { return a_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// Tr/N.
    Complex normalized_trace() const { return trace() / static_cast<double>(n_); }

  private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<Complex> a_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

/// Tr(a b) / N without forming the product.
Complex normalized_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
/// max |a_ij - conj(a_ji)|.
double hermitian_residual(const ComplexMatrix& a);
/// max |(u* u - I)_ij|.
double unitarity_residual(const ComplexMatrix& u);

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi
/// rotations until the off-diagonal norm drops below tol * ||H||_F.
/// Throws NumericalError if the sweep cap is reached first.
std::vector<double> hermitian_eigenvalues(ComplexMatrix h, double tol = 1e-10, int max_sweeps = 100);

/// Eigenvalues of a real symmetric matrix (row-major r x r), ascending, by cyclic Jacobi.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int r, double tol = 1e-12, int max_sweeps = 100);

/// Determinant by LU with partial pivoting.
Complex lu_determinant(ComplexMatrix a);

struct QrFactors
{
    ComplexMatrix q;
    ComplexMatrix r;
};

/// Householder QR: a = q r with q unitary and r upper triangular.
QrFactors householder_qr(const ComplexMatrix& a);

}  // namespace freeconv::linalg
