#include "sstat/pca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "sstat/errors.hpp"

namespace sstat {

namespace {

constexpr double kOffTolerance = 1e-12; // times ||M||_F
constexpr std::size_t kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j)
        for (std::size_t k = j + 1; k < a.cols(); ++k) s += 2.0 * a(j, k) * a(j, k);
    return std::sqrt(s);
}

} // namespace

EigenDecomposition eigh_symmetric(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigh_symmetric: matrix must be square");
    const std::size_t p = m.rows();
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k)
            if (!std::isfinite(m(j, k)))
                throw std::invalid_argument("eigh_symmetric: non-finite entry at (" +
                                            std::to_string(j) + "," + std::to_string(k) + ")");

    Matrix a(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) a(j, k) = 0.5 * (m(j, k) + m(k, j));
    Matrix v = Matrix::identity(p);

    const double norm = frobenius_norm(a);
    const double tol = kOffTolerance * norm;

    EigenDecomposition result;
    result.off_diagonal_norm = off_diagonal_norm(a);
    while (result.off_diagonal_norm > tol && result.sweeps < kMaxSweeps) {
        for (std::size_t q = 1; q < p; ++q)
            for (std::size_t j = 0; j < q; ++j) {
                const double apq = a(j, q);
                if (apq == 0.0) continue;
                const double app = a(j, j);
                const double aqq = a(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                double t;
                if (std::fabs(theta) > 1e150) {
                    t = 0.5 / theta; // avoid theta^2 overflow
                } else {
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(j, j) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(j, q) = a(q, j) = 0.0;
                for (std::size_t i = 0; i < p; ++i) {
                    if (i == j || i == q) continue;
                    const double aij = a(i, j);
                    const double aiq = a(i, q);
                    a(i, j) = a(j, i) = aij - s * (aiq + tau * aij);
                    a(i, q) = a(q, i) = aiq + s * (aij - tau * aiq);
                }
                for (std::size_t i = 0; i < p; ++i) {
                    const double vij = v(i, j);
                    const double viq = v(i, q);
                    v(i, j) = vij - s * (viq + tau * vij);
                    v(i, q) = viq + s * (vij - tau * viq);
                }
            }
        ++result.sweeps;
        result.off_diagonal_norm = off_diagonal_norm(a);
    }

    // Sort descending; stable so exactly equal eigenvalues keep index order.
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    result.eigenvalues.resize(p);
    result.eigenvectors = Matrix(p, p);
    for (std::size_t col = 0; col < p; ++col) {
        const std::size_t src = order[col];
        result.eigenvalues[col] = a(src, src);
        // Sign convention: largest-magnitude entry positive (first such
        // entry wins on exact ties).
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double mag = std::fabs(v(i, src));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < p; ++i) result.eigenvectors(i, col) = sign * v(i, src);
    }
    return result;
}

PcaResult run_pca(const SuffStats& ss, PcaBasis basis, const PcaOptions& options) {
    AnalysisOptions analysis_options;
    analysis_options.include_identifiers = options.include_identifiers;
    analysis_options.extra_drop = options.extra_drop;
    analysis_options.ddof = options.ddof;
    AnalysisResult analysis = analyze(ss, analysis_options);

    PcaResult result;
    result.basis = basis;
    result.included_columns = analysis.included_columns;
    result.column_names = analysis.column_names;
    result.n = analysis.n;

    Matrix basis_matrix;
    if (basis == PcaBasis::Correlation) {
        // when variances are not all positive this throws the typed
        // CancellationError naming the offending columns
        basis_matrix = analysis.correlation.has_value() ? *analysis.correlation
                                                        : correlation(analysis.covariance);
    } else {
        basis_matrix = analysis.covariance;
        result.negative_variance_flagged =
            !analysis.diagnostics.negative_variance_columns.empty();
    }

    EigenDecomposition eig = eigh_symmetric(basis_matrix);
    result.eigenvalues = std::move(eig.eigenvalues);
    result.loadings = std::move(eig.eigenvectors);

    const std::size_t p = result.eigenvalues.size();
    const double total = std::accumulate(result.eigenvalues.begin(), result.eigenvalues.end(), 0.0);
    result.variance_percent.resize(p);
    result.cumulative_percent.resize(p);
    double running = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        result.variance_percent[i] = total != 0.0 ? result.eigenvalues[i] / total * 100.0 : 0.0;
        running += result.variance_percent[i];
        result.cumulative_percent[i] = running;
    }
    return result;
}

std::string format_pca_table(const PcaResult& result) {
    std::string out = "PCA Results (";
    out += result.basis == PcaBasis::Correlation ? "correlation" : "covariance";
    out += " basis)\n";
    char line[160];
    const std::size_t p = result.eigenvalues.size();
    for (std::size_t i = 0; i < p; ++i) {
        std::snprintf(line, sizeof line,
                      "PC%zu: Eigenvalue = %.7f  Variance %% = %.5f  Cumulative %% = %.5f\n",
                      i + 1, result.eigenvalues[i], result.variance_percent[i],
                      result.cumulative_percent[i]);
        out += line;
    }
    out += "Loadings (rows = PCs):\n";
    for (std::size_t i = 0; i < p; ++i) {
        std::snprintf(line, sizeof line, "PC%zu:", i + 1);
        out += line;
        for (std::size_t j = 0; j < p; ++j) {
            std::snprintf(line, sizeof line, "\t%.6f", result.loadings(j, i));
            out += line;
        }
        out += "\n";
    }
    if (result.negative_variance_flagged)
        out += "warning: basis matrix has non-positive variance entries\n";
    return out;
}

} // namespace sstat
