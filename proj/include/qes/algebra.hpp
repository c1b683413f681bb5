#ifndef QES_ALGEBRA_HPP
#define QES_ALGEBRA_HPP

#include <span>
#include <vector>

namespace qes {

/// Family member (n, k, beta): n fixes the invariant polynomial module,
/// k >= 0 the centrifugal strength, beta the quartic/quadratic mix.
struct ModelParams {
    int n = 0;
    double k = 0.0;
    double beta = 0.0;

    void validate() const;  // throws std::domain_error
};

/// Even polynomial phi(x) = sum_j a_j x^(2j), stored by half-degree j.
/// The declared degree bound d is coeffs().size() - 1; trailing zeros allowed.
class EvenPolynomial {
public:
    EvenPolynomial() : coeffs_(1, 0.0) {}
    explicit EvenPolynomial(std::vector<double> coeffs);
    static EvenPolynomial zero(int degree_bound);
    static EvenPolynomial basis(int j, int degree_bound);  // x^(2j)

    int degree_bound() const { return static_cast<int>(coeffs_.size()) - 1; }
    double operator[](int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
    double& operator[](int j) { return coeffs_[static_cast<std::size_t>(j)]; }
    std::span<const double> coeffs() const { return coeffs_; }

    /// phi(x), Horner in x^2.
    double operator()(double x) const;

    EvenPolynomial& operator+=(const EvenPolynomial& other);
    EvenPolynomial& operator*=(double s);
    friend EvenPolynomial operator+(EvenPolynomial a, const EvenPolynomial& b) { return a += b; }
    friend EvenPolynomial operator*(double s, EvenPolynomial p) { return p *= s; }

    double norm2() const;  // coefficient 2-norm

private:
    std::vector<double> coeffs_;
};

/// sl(2) generators realized on even polynomials:
///   lowering  (2x)^-1 d/dx : a_j j          -> half-degree j-1
///   cartan    (x/2) d/dx - n/2 : a_j (j - n/2)   in place
///   raising   (x^3/2) d/dx - n x^2 : a_j (j - n) -> half-degree j+1
enum class Sl2Generator { lowering, cartan, raising };

EvenPolynomial apply_generator(Sl2Generator which, int n, const EvenPolynomial& p);

/// The quasi-exactly solvable operator
///   H0 = -J- J0 + J+ + beta J0 - (n + 2k - 1)/2 J- + (beta/2)(n + k + 1/2)
/// applied through the generator actions. Raises the degree bound by one;
/// on the invariant module the top coefficient is exactly zero.
EvenPolynomial apply_h0(const ModelParams& params, const EvenPolynomial& p);

/// Matrix of H0 on the module span{x^(2j), 0 <= j <= n}.
/// upper[m] couples column m+1 into row m; lower[m] couples column m into row m+1.
struct TridiagonalMatrix {
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> lower;

    int dim() const { return static_cast<int>(diag.size()); }
    EvenPolynomial apply(const EvenPolynomial& p) const;
    double inf_norm() const;
};

/// Builds the matrix by applying H0 to each basis vector through the
/// generators, asserts tridiagonality and module invariance, then
/// cross-checks every band entry against the closed forms
///   diag[m]  = beta (m + (2k+1)/4)
///   upper[m] = -(m+1)(m + k + 1/2)
///   lower[m] = m - n
/// The two routes must agree to 1e-14.
TridiagonalMatrix build_h0_matrix(const ModelParams& params);

/// Diagonal similarity taking a tridiagonal matrix with
/// upper[m]*lower[m] >= 0 to symmetric form with off-diagonals
/// sign(upper[m]) * sqrt(upper[m]*lower[m]).
/// scale[m] is the diagonal D with D[0]=1, D[m+1]=D[m]*sqrt(lower[m]/upper[m]);
/// the symmetric matrix is D^-1 M D, so eigenvectors map as a = D w.
struct SymmetrizedTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;    // size dim-1
    std::vector<double> scale;  // D, size dim
};

SymmetrizedTridiagonal symmetrize(const TridiagonalMatrix& m);

/// Symmetric tridiagonal QL with implicit shifts, eigenvalues only
/// (diag and off are consumed as workspace). Unsorted.
/// Throws numeric_error after 50 iterations on one eigenvalue.
std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag,
                                                      std::vector<double> off);

/// Same kernel accumulating eigenvectors. Returns eigenvalues;
/// vectors[i] is the (orthonormal) eigenvector of the i-th returned value.
std::vector<double> symmetric_tridiagonal_eigensystem(std::vector<double> diag,
                                                      std::vector<double> off,
                                                      std::vector<std::vector<double>>& vectors);

/// Algebraic spectrum of H0 on the module.
struct SpectralData {
    std::vector<double> eigenvalues;           // ascending
    std::vector<EvenPolynomial> eigenvectors;  // unit coefficient 2-norm,
                                               // first nonzero coefficient positive
};

/// Symmetrize, run QL, back-transform, sort ascending and fix signs.
/// Guards the result: relative eigen-residual must be <= 1e-12.
SpectralData eigensolve(const TridiagonalMatrix& m);

/// max over pairs of ||M a - lambda a||_inf / (||M||_inf ||a||_inf).
double eigen_residual(const TridiagonalMatrix& m, const SpectralData& s);

/// Smallest gap between consecutive eigenvalues, scaled by the spectral
/// spread. Diagnostic for near-degeneracy; 1x1 spectra report +inf.
double min_eigenvalue_gap(const SpectralData& s);

}  // namespace qes

#endif
