#include "qes/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qes/errors.hpp"

namespace qes {

void ModelParams::validate() const {
    if (n < 0) throw std::domain_error("params.n: must be a non-negative integer");
    if (!(k >= 0.0)) throw std::domain_error("params.k: must be >= 0");
    if (!std::isfinite(beta)) throw std::domain_error("params.beta: must be finite");
}

EvenPolynomial::EvenPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.assign(1, 0.0);
}

EvenPolynomial EvenPolynomial::zero(int degree_bound) {
    return EvenPolynomial(std::vector<double>(static_cast<std::size_t>(degree_bound) + 1, 0.0));
}

EvenPolynomial EvenPolynomial::basis(int j, int degree_bound) {
    EvenPolynomial p = zero(degree_bound);
    p[j] = 1.0;
    return p;
}

double EvenPolynomial::operator()(double x) const {
    const double y = x * x;
    double acc = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * y + coeffs_[j];
    return acc;
}

EvenPolynomial& EvenPolynomial::operator+=(const EvenPolynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
    return *this;
}

EvenPolynomial& EvenPolynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double EvenPolynomial::norm2() const {
    double acc = 0.0;
    for (double c : coeffs_) acc += c * c;
    return std::sqrt(acc);
}

EvenPolynomial apply_generator(Sl2Generator which, int n, const EvenPolynomial& p) {
    const int d = p.degree_bound();
    switch (which) {
        case Sl2Generator::lowering: {
            EvenPolynomial q = EvenPolynomial::zero(std::max(d - 1, 0));
            for (int j = 1; j <= d; ++j) q[j - 1] += p[j] * static_cast<double>(j);
            return q;
        }
        case Sl2Generator::cartan: {
            EvenPolynomial q = EvenPolynomial::zero(d);
            for (int j = 0; j <= d; ++j) q[j] = p[j] * (static_cast<double>(j) - 0.5 * n);
            return q;
        }
        case Sl2Generator::raising: {
            EvenPolynomial q = EvenPolynomial::zero(d + 1);
            for (int j = 0; j <= d; ++j) q[j + 1] = p[j] * static_cast<double>(j - n);
            return q;
        }
    }
    throw std::logic_error("apply_generator: unknown generator");
}

EvenPolynomial apply_h0(const ModelParams& params, const EvenPolynomial& p) {
    const int n = params.n;
    const double k = params.k;
    const double beta = params.beta;

    const EvenPolynomial j0p = apply_generator(Sl2Generator::cartan, n, p);
    EvenPolynomial out = -1.0 * apply_generator(Sl2Generator::lowering, n, j0p);
    out += apply_generator(Sl2Generator::raising, n, p);
    out += beta * j0p;
    out += (-0.5 * (n + 2.0 * k - 1.0)) * apply_generator(Sl2Generator::lowering, n, p);
    out += (0.5 * beta * (n + k + 0.5)) * p;
    return out;
}

EvenPolynomial TridiagonalMatrix::apply(const EvenPolynomial& p) const {
    const int d = dim();
    EvenPolynomial q = EvenPolynomial::zero(d - 1);
    for (int m = 0; m < d; ++m) {
        double acc = diag[m] * p[m];
        if (m > 0) acc += lower[m - 1] * p[m - 1];
        if (m + 1 < d) acc += upper[m] * p[m + 1];
        q[m] = acc;
    }
    return q;
}

double TridiagonalMatrix::inf_norm() const {
    const int d = dim();
    double best = 0.0;
    for (int m = 0; m < d; ++m) {
        double row = std::abs(diag[m]);
        if (m > 0) row += std::abs(lower[m - 1]);
        if (m + 1 < d) row += std::abs(upper[m]);
        best = std::max(best, row);
    }
    return best;
}

TridiagonalMatrix build_h0_matrix(const ModelParams& params) {
    params.validate();
    const int n = params.n;
    const int dim = n + 1;

    TridiagonalMatrix m;
    m.diag.assign(dim, 0.0);
    m.upper.assign(std::max(dim - 1, 0), 0.0);
    m.lower.assign(std::max(dim - 1, 0), 0.0);

    for (int col = 0; col < dim; ++col) {
        const EvenPolynomial image = apply_h0(params, EvenPolynomial::basis(col, n));
        // module invariance: the x^(2(n+1)) coefficient carries an exact (j - n) factor
        if (image.degree_bound() > n && image[n + 1] != 0.0)
            throw std::logic_error("build_h0_matrix: module invariance violated");
        for (int row = 0; row <= std::min(image.degree_bound(), n); ++row) {
            const double v = image[row];
            if (v == 0.0) continue;
            if (row == col)
                m.diag[row] = v;
            else if (row == col - 1)
                m.upper[row] = v;
            else if (row == col + 1)
                m.lower[col] = v;
            else
                throw std::logic_error("build_h0_matrix: entry outside the three bands");
        }
    }

    // cross-check the generator route against the closed-form band entries
    const double k = params.k;
    const double beta = params.beta;
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-14 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    for (int j = 0; j < dim; ++j) {
        const double want = beta * (j + 0.25 * (2.0 * k + 1.0));
        if (!close(m.diag[j], want))
            throw std::logic_error("build_h0_matrix: diagonal disagrees with closed form");
    }
    for (int j = 0; j + 1 < dim; ++j) {
        const double want_upper = -(j + 1.0) * (j + k + 0.5);
        const double want_lower = static_cast<double>(j - n);
        if (!close(m.upper[j], want_upper) || !close(m.lower[j], want_lower))
            throw std::logic_error("build_h0_matrix: band disagrees with closed form");
    }
    return m;
}

SymmetrizedTridiagonal symmetrize(const TridiagonalMatrix& m) {
    const int dim = m.dim();
    SymmetrizedTridiagonal s;
    s.diag = m.diag;
    s.off.assign(std::max(dim - 1, 0), 0.0);
    s.scale.assign(dim, 1.0);
    for (int j = 0; j + 1 < dim; ++j) {
        const double prod = m.upper[j] * m.lower[j];
        if (prod < 0.0)
            throw std::domain_error("symmetrize: upper*lower < 0, matrix is not symmetrizable");
        if (prod == 0.0 && (m.upper[j] != 0.0 || m.lower[j] != 0.0))
            throw std::domain_error(
                "symmetrize: one-sided zero coupling, matrix is block-reducible");
        s.scale[j + 1] =
            (prod == 0.0) ? s.scale[j] : s.scale[j] * std::sqrt(m.lower[j] / m.upper[j]);
        // off-diagonal of D^-1 M D: upper[j] * D[j+1]/D[j] = sign(upper) sqrt(upper*lower)
        s.off[j] = (prod == 0.0) ? 0.0 : std::copysign(std::sqrt(prod), m.upper[j]);
    }
    return s;
}

namespace {

// One QL pass over [l, next]; shared between the eigenvalue-only and
// eigensystem variants. vectors, when non-null, holds dim column-major
// orthogonal accumulators that get rotated along.
void ql_implicit_shifts(std::vector<double>& d, std::vector<double>& e,
                        std::vector<std::vector<double>>* vectors) {
    const int dim = static_cast<int>(d.size());
    if (dim == 0) return;
    e.push_back(0.0);  // sentinel e[dim-1]

    for (int l = 0; l < dim; ++l) {
        int iterations = 0;
        for (;;) {
            int split = l;
            for (; split < dim - 1; ++split) {
                const double scale = std::abs(d[split]) + std::abs(d[split + 1]);
                if (std::abs(e[split]) <= std::numeric_limits<double>::epsilon() * scale) break;
            }
            if (split == l) break;
            if (++iterations > 50)
                throw numeric_error("eigensolve: QL failed to converge within 50 iterations");

            // implicit shift from the 2x2 block at l
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[split] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = split - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // recover from underflow: drop the rotation and retry
                    d[i + 1] -= p;
                    e[split] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (vectors) {
                    auto& z = *vectors;
                    for (std::size_t row = 0; row < z.size(); ++row) {
                        f = z[row][static_cast<std::size_t>(i + 1)];
                        z[row][static_cast<std::size_t>(i + 1)] =
                            s * z[row][static_cast<std::size_t>(i)] + c * f;
                        z[row][static_cast<std::size_t>(i)] =
                            c * z[row][static_cast<std::size_t>(i)] - s * f;
                    }
                }
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[split] = 0.0;
        }
    }
}

}  // namespace

std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag,
                                                      std::vector<double> off) {
    if (off.size() + 1 != diag.size() && !(diag.empty() && off.empty()))
        throw std::invalid_argument("symmetric_tridiagonal_eigenvalues: off must have size dim-1");
    ql_implicit_shifts(diag, off, nullptr);
    return diag;
}

std::vector<double> symmetric_tridiagonal_eigensystem(std::vector<double> diag,
                                                      std::vector<double> off,
                                                      std::vector<std::vector<double>>& vectors) {
    const std::size_t dim = diag.size();
    if (off.size() + 1 != dim && dim != 0)
        throw std::invalid_argument("symmetric_tridiagonal_eigensystem: off must have size dim-1");
    // identity accumulator, vectors[row][col]
    vectors.assign(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) vectors[i][i] = 1.0;
    ql_implicit_shifts(diag, off, &vectors);
    return diag;
}

SpectralData eigensolve(const TridiagonalMatrix& m) {
    const int dim = m.dim();
    if (dim == 0) throw std::invalid_argument("eigensolve: empty matrix");

    const SymmetrizedTridiagonal sym = symmetrize(m);
    std::vector<std::vector<double>> z;
    std::vector<double> values = symmetric_tridiagonal_eigensystem(sym.diag, sym.off, z);

    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });

    SpectralData out;
    out.eigenvalues.reserve(values.size());
    out.eigenvectors.reserve(values.size());
    for (int idx : order) {
        out.eigenvalues.push_back(values[static_cast<std::size_t>(idx)]);
        EvenPolynomial vec = EvenPolynomial::zero(dim - 1);
        for (int row = 0; row < dim; ++row)
            vec[row] = sym.scale[static_cast<std::size_t>(row)] *
                       z[static_cast<std::size_t>(row)][static_cast<std::size_t>(idx)];
        const double norm = vec.norm2();
        if (norm == 0.0) throw numeric_error("eigensolve: zero eigenvector");
        vec *= 1.0 / norm;
        double amax = 0.0;
        for (int j = 0; j < dim; ++j) amax = std::max(amax, std::abs(vec[j]));
        for (int j = 0; j < dim; ++j) {
            if (std::abs(vec[j]) > 1e-12 * amax) {
                if (vec[j] < 0.0) vec *= -1.0;
                break;
            }
        }
        out.eigenvectors.push_back(std::move(vec));
    }

    const double residual = eigen_residual(m, out);
    if (!(residual <= 1e-12)) {
        std::ostringstream os;
        os << "eigensolve: eigenpair residual " << residual << " exceeds 1e-12";
        throw numeric_error(os.str());
    }
    return out;
}

double eigen_residual(const TridiagonalMatrix& m, const SpectralData& s) {
    if (static_cast<int>(s.eigenvalues.size()) != m.dim() ||
        s.eigenvectors.size() != s.eigenvalues.size())
        throw std::invalid_argument("eigen_residual: dimension mismatch");
    const double mnorm = m.inf_norm();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const EvenPolynomial& a = s.eigenvectors[i];
        const EvenPolynomial ma = m.apply(a);
        double rmax = 0.0;
        double amax = 0.0;
        for (int j = 0; j < m.dim(); ++j) {
            rmax = std::max(rmax, std::abs(ma[j] - s.eigenvalues[i] * a[j]));
            amax = std::max(amax, std::abs(a[j]));
        }
        const double denom = std::max(mnorm * amax, std::numeric_limits<double>::min());
        worst = std::max(worst, rmax / denom);
    }
    return worst;
}

double min_eigenvalue_gap(const SpectralData& s) {
    const std::size_t count = s.eigenvalues.size();
    if (count < 2) return std::numeric_limits<double>::infinity();
    const double spread =
        std::max(s.eigenvalues.back() - s.eigenvalues.front(), std::numeric_limits<double>::min());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < count; ++i)
        gap = std::min(gap, (s.eigenvalues[i + 1] - s.eigenvalues[i]) / spread);
    return gap;
}

}  // namespace qes
