#pragma once

#include "prodiv/embed.hpp"
#include "prodiv/simspace.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace prodiv::diversity {

// Per-class document counts of one year.
struct AbundanceCounts {
    std::vector<int> classes;
    std::vector<std::size_t> counts;
};

AbundanceCounts count_classes(std::span<const int> class_of_each_firm);

// Number of classes with a positive count.
std::size_t richness(const AbundanceCounts& counts);

// -sum p ln p over classes with positive count. Throws ComputeError when the
// total count is zero.
double shannon_entropy(const AbundanceCounts& counts);

// Shannon entropy divided by ln(richness). Throws ComputeError (undefined
// evenness) when fewer than two classes are instantiated.
double normalized_entropy(const AbundanceCounts& counts);

// Similarity-sensitive diversity of order q:
//   (sum_i a_i (Z a)_i^(q-1))^(1/(1-q)),
// and for q = 1 the limit exp(-sum_i a_i ln (Z a)_i). Throws ConfigError for
// q < 0 and ComputeError when (Z a)_i = 0 for a class with a_i > 0.
double q_diversity(const simspace::ClassProfile& profile, double q);

// q_diversity divided by the number of classes.
double adjusted_q_diversity(const simspace::ClassProfile& profile, double q);

// Smallest number of principal components whose variance reaches `threshold`
// of the total variance of the mean-centered vectors. Zero total variance
// gives 0. Throws InputError for fewer than two vectors.
std::size_t pca_diversity(std::span<const embed::FirmVector> vectors, double threshold = 0.9);

// Same, for rows of a dense matrix (one observation per row).
std::size_t pca_diversity(const Eigen::MatrixXd& rows, double threshold = 0.9);

struct SpecificityParts {
    double within = 0.0;
    double between = 0.0;
    double ratio = 0.0;
};

// Mean within-class over mean between-class firm similarity, each averaged
// class by class. Within-class means skip single-firm classes; between-class
// means normalize by the true number of cross-class pairs of each class.
// `classes[i]` is the class of matrix row i.
SpecificityParts industry_specificity_parts(const simspace::SimilarityMatrix& matrix, std::span<const int> classes);
double industry_specificity(const simspace::SimilarityMatrix& matrix, std::span<const int> classes);

} // namespace prodiv::diversity
