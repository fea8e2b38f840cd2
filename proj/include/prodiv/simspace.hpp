#pragma once

#include "prodiv/embed.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace prodiv::simspace {

// Labeled, dense, symmetric pairwise similarity.
struct SimilarityMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd values;

    std::size_t size() const { return labels.size(); }
};

// Label used for firm-year rows: "<cik>_<year>".
std::string firm_label(std::int64_t cik, int year);

// Entry (i, j) is the dot product of unit vectors i and j. Throws InputError
// on dimension mismatch.
SimilarityMatrix cosine_matrix(std::span<const embed::FirmVector> vectors);

// Class similarity matrix and normalized abundance vector of one year.
struct ClassProfile {
    int year = 0;
    std::vector<int> classes; // ascending 4-digit codes
    Eigen::MatrixXd similarity;
    Eigen::VectorXd abundance;

    std::size_t size() const { return classes.size(); }
};

// Groups the year's vectors by SIC code. Each class is represented by the
// unit-normalized centroid of its members (summed in CIK order); Z is the
// class dot product clamped to [0, 1] with an exact unit diagonal; abundance is
// the share of firms. Vectors of other years are ignored.
ClassProfile aggregate_classes(std::span<const embed::FirmVector> vectors,
                               const std::map<std::int64_t, int>& sic_map, int year);

// Builds a profile from per-class firm counts and an explicit class similarity.
ClassProfile make_profile(int year, std::vector<int> classes, const std::vector<std::size_t>& counts,
                          Eigen::MatrixXd similarity);

struct FirmMeta {
    std::int64_t cik = 0;
    int sic_code = 0;
};

// Reorders rows and columns by (sic_code, cik). Throws InputError when a label
// has no metadata.
SimilarityMatrix order_for_heatmap(const SimilarityMatrix& matrix, const std::map<std::string, FirmMeta>& metadata);

// CSV with labels in the first row and column.
std::string matrix_csv(const SimilarityMatrix& matrix);
// Cell raster with a grayscale ramp from `low` (black) to 1 (white).
std::string matrix_svg(const SimilarityMatrix& matrix, double low = 0.0);

struct HeatmapFiles {
    std::filesystem::path csv;
    std::filesystem::path svg;
};

// Writes `<stem>.csv` and `<stem>.svg` of the reordered matrix. `header` is
// written as a comment line on top of both files when non-empty.
HeatmapFiles export_heatmap(const SimilarityMatrix& matrix, const std::map<std::string, FirmMeta>& metadata,
                            const std::filesystem::path& stem, const std::string& header = {});

} // namespace prodiv::simspace
