#include "prodiv/diversity.hpp"

#include "prodiv/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>

namespace prodiv::diversity {

AbundanceCounts count_classes(std::span<const int> class_of_each_firm)
{
    std::map<int, std::size_t> tally;
    for (const int c : class_of_each_firm) {
        ++tally[c];
    }
    AbundanceCounts out;
    for (const auto& [c, n] : tally) {
        out.classes.push_back(c);
        out.counts.push_back(n);
    }
    return out;
}

std::size_t richness(const AbundanceCounts& counts)
{
    return static_cast<std::size_t>(
        std::count_if(counts.counts.begin(), counts.counts.end(), [](std::size_t c) { return c > 0; }));
}

double shannon_entropy(const AbundanceCounts& counts)
{
    double total = 0.0;
    for (const auto c : counts.counts) {
        total += static_cast<double>(c);
    }
    if (!(total > 0.0)) {
        throw ComputeError("entropy of an empty distribution");
    }
    double h = 0.0;
    for (const auto c : counts.counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

double normalized_entropy(const AbundanceCounts& counts)
{
    const auto k = richness(counts);
    if (k < 2) {
        throw ComputeError("normalized entropy is undefined with fewer than two instantiated classes");
    }
    return shannon_entropy(counts) / std::log(static_cast<double>(k));
}

double q_diversity(const simspace::ClassProfile& profile, double q)
{
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw ConfigError("diversity order q must be a finite value >= 0");
    }
    const Eigen::VectorXd& a = profile.abundance;
    const Eigen::VectorXd za = profile.similarity * a;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > 0.0 && !(za(i) > 0.0)) {
            throw ComputeError("similarity row of class " + std::to_string(profile.classes[static_cast<std::size_t>(i)]) +
                               " is degenerate: (Za)_i = 0");
        }
    }
    if (q == 1.0) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) > 0.0) {
                s += a(i) * std::log(za(i));
            }
        }
        return std::exp(-s);
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > 0.0) {
            s += a(i) * std::pow(za(i), q - 1.0);
        }
    }
    return std::pow(s, 1.0 / (1.0 - q));
}

double adjusted_q_diversity(const simspace::ClassProfile& profile, double q)
{
    return q_diversity(profile, q) / static_cast<double>(profile.size());
}

std::size_t pca_diversity(const Eigen::MatrixXd& rows, double threshold)
{
    if (rows.rows() < 2) {
        throw InputError("PCA diversity needs at least two vectors");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw ConfigError("PCA variance threshold must lie in (0, 1]");
    }
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const Eigen::MatrixXd centered = rows.rowwise() - mean;

    // The nonzero spectrum of the covariance equals that of the Gram matrix;
    // take whichever side is smaller.
    const Eigen::MatrixXd scatter = centered.rows() <= centered.cols() ? Eigen::MatrixXd(centered * centered.transpose())
                                                                       : Eigen::MatrixXd(centered.transpose() * centered);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ComputeError("eigendecomposition failed in PCA diversity");
    }
    std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    for (double& e : eig) {
        e = std::max(e, 0.0);
    }
    std::sort(eig.begin(), eig.end(), std::greater<>());
    double total = 0.0;
    for (double e : eig) {
        total += e;
    }
    const double scale = rows.squaredNorm();
    if (!(total > 1e-12 * std::max(scale, 1e-300))) {
        return 0;
    }
    const double target = threshold * total * (1.0 - 1e-12);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < eig.size(); ++k) {
        cumulative += eig[k];
        if (cumulative >= target) {
            return k + 1;
        }
    }
    return eig.size();
}

std::size_t pca_diversity(std::span<const embed::FirmVector> vectors, double threshold)
{
    if (vectors.size() < 2) {
        throw InputError("PCA diversity needs at least two vectors");
    }
    const auto dim = vectors.front().dim();
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].dim() != dim) {
            throw InputError("dimension mismatch in PCA diversity");
        }
        const auto dense = vectors[i].to_dense();
        for (std::size_t k = 0; k < dim; ++k) {
            rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = dense[k];
        }
    }
    return pca_diversity(rows, threshold);
}

SpecificityParts industry_specificity_parts(const simspace::SimilarityMatrix& matrix, std::span<const int> classes)
{
    const auto n = matrix.size();
    if (classes.size() != n) {
        throw InputError("every firm of the similarity matrix needs a class");
    }
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        members[classes[i]].push_back(i);
    }
    if (members.size() < 2) {
        throw ComputeError("industry specificity needs at least two classes");
    }

    const auto& m = matrix.values;
    const auto at = [&](std::size_t i, std::size_t j) {
        return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    double within_sum = 0.0;
    std::size_t within_classes = 0;
    double between_sum = 0.0;
    for (const auto& [label, rows] : members) {
        const double size = static_cast<double>(rows.size());
        if (rows.size() >= 2) {
            double s = 0.0;
            for (const auto i : rows) {
                for (const auto j : rows) {
                    if (i != j) {
                        s += at(i, j);
                    }
                }
            }
            within_sum += s / (size * (size - 1.0));
            ++within_classes;
        }
        double s = 0.0;
        for (const auto i : rows) {
            for (std::size_t j = 0; j < n; ++j) {
                if (classes[j] != label) {
                    s += at(i, j);
                }
            }
        }
        between_sum += s / (size * (static_cast<double>(n) - size));
    }
    if (within_classes == 0) {
        throw ComputeError("industry specificity needs a class with at least two firms");
    }
    SpecificityParts parts;
    parts.within = within_sum / static_cast<double>(within_classes);
    parts.between = between_sum / static_cast<double>(members.size());
    if (parts.between == 0.0) {
        throw ComputeError("mean between-class similarity is zero");
    }
    parts.ratio = parts.within / parts.between;
    return parts;
}

double industry_specificity(const simspace::SimilarityMatrix& matrix, std::span<const int> classes)
{
    return industry_specificity_parts(matrix, classes).ratio;
}

} // namespace prodiv::diversity
