#pragma once

#include "prodiv/simspace.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prodiv::sicmodel {

// One row of the tree file: a 4-digit code and the labels of its ancestors.
struct SicEntry {
    int code = 0;
    std::string industry_group;
    std::string major_group;
    std::string division;
};

// Four-level classification tree: Division > Major Group > Industry Group >
// Code. Leaf counts of every node are precomputed.
class SicTree {
public:
    // Throws InputError when a code repeats or a node has two parents.
    explicit SicTree(std::vector<SicEntry> entries);

    bool contains(int code) const { return by_code_.contains(code); }
    const SicEntry& entry(int code) const;
    std::span<const SicEntry> entries() const { return entries_; }

    std::size_t leaf_count() const { return entries_.size(); }
    std::size_t division_leaf_count(std::string_view division) const;
    std::size_t major_group_leaf_count(std::string_view major_group) const;
    std::size_t industry_group_leaf_count(std::string_view industry_group) const;

    std::size_t division_count() const { return division_leaves_.size(); }
    std::size_t major_group_count() const { return major_leaves_.size(); }
    std::size_t industry_group_count() const { return industry_leaves_.size(); }

private:
    std::vector<SicEntry> entries_;
    std::map<int, std::size_t> by_code_;
    std::map<std::string, std::size_t, std::less<>> division_leaves_;
    std::map<std::string, std::size_t, std::less<>> major_leaves_;
    std::map<std::string, std::size_t, std::less<>> industry_leaves_;
};

// CSV `code,industry_group,major_group,division`.
SicTree load_tree(const std::filesystem::path& path);
SicTree parse_tree(std::istream& in, std::string_view source_name);
std::string tree_csv(const SicTree& tree);

// Builds a tree for the given codes with the standard SIC layout: industry
// group = first three digits, major group = first two digits, division from
// the major-group ranges (A 01-09, B 10-14, C 15-17, D 20-39, E 40-49,
// F 50-51, G 52-59, H 60-67, I 70-89, J 91-99).
SicTree standard_tree(std::span<const int> codes);
std::string standard_division(int code);

struct TreeSummary {
    std::size_t divisions = 0;
    std::size_t major_groups = 0;
    std::size_t industry_groups = 0;
    std::size_t codes = 0;

    bool operator==(const TreeSummary&) const = default;
};

TreeSummary tree_summary(const SicTree& tree);

// Number of codes under the lowest common ancestor of the two codes (the
// highest node on the shortest walk between them). Throws InputError for an
// unknown code.
std::size_t sic_distance(int code_a, int code_b, const SicTree& tree);

// Maps a tree distance and the tree's total leaf count to a similarity.
using DistanceToSimilarity = std::function<double(std::size_t distance, std::size_t total_leaves)>;

// 1 - (distance - 1) / (leaves - 1); a single-leaf tree maps everything to 1.
double affine_similarity(std::size_t distance, std::size_t total_leaves);

struct Firm {
    std::int64_t cik = 0;
    int code = 0;
};

// Similarity of every firm pair from their codes' tree distance. Labels are
// the firm CIKs.
simspace::SimilarityMatrix sic_similarity_matrix(std::span<const Firm> firms, const SicTree& tree,
                                                 const DistanceToSimilarity& map = affine_similarity);

// Class similarity between codes, for building ^qD inputs from the tree alone.
double code_similarity(int code_a, int code_b, const SicTree& tree,
                       const DistanceToSimilarity& map = affine_similarity);

} // namespace prodiv::sicmodel
