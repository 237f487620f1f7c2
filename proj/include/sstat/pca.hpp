#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sstat/analysis.hpp"
#include "sstat/linalg.hpp"
#include "sstat/suffstats.hpp"

namespace sstat {

struct EigenDecomposition {
    std::vector<double> eigenvalues; // descending, ties keep index order
    Matrix eigenvectors;             // column i pairs with eigenvalues[i]
    std::size_t sweeps = 0;
    double off_diagonal_norm = 0.0;
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// The input is symmetrized as (M + M^T)/2 first; sweeps run until the
/// off-diagonal Frobenius norm falls below 1e-12 * ||M||_F, capped at 100
/// sweeps. Eigenvalues come back sorted descending; every eigenvector
/// column is normalized so its largest-magnitude entry is positive.
EigenDecomposition eigh_symmetric(const Matrix& m);

enum class PcaBasis { Covariance, Correlation };

struct PcaResult {
    PcaBasis basis = PcaBasis::Correlation;
    std::vector<double> eigenvalues;       // descending
    std::vector<double> variance_percent;  // lambda_i / sum(lambda) * 100
    std::vector<double> cumulative_percent;
    Matrix loadings;                       // column i = unit eigenvector of lambda_i
    std::vector<std::size_t> included_columns;
    std::vector<std::string> column_names;
    std::uint64_t n = 0;
    /// Covariance basis only: the basis matrix had a non-positive diagonal
    /// entry. It is still decomposed, but flagged.
    bool negative_variance_flagged = false;
};

struct PcaOptions {
    bool include_identifiers = false;
    std::vector<std::size_t> extra_drop;
    int ddof = 1;
};

/// PCA at the sufficient-statistics boundary: derives the basis matrix
/// (covariance or correlation) from SuffStats alone and decomposes it.
/// Correlation basis propagates CancellationError when a variance is not
/// positive.
PcaResult run_pca(const SuffStats& ss, PcaBasis basis, const PcaOptions& options = {});

/// The per-component report rows (eigenvalue, variance %, cumulative %)
/// followed by the loading matrix with components as rows.
std::string format_pca_table(const PcaResult& result);

} // namespace sstat
