#pragma once

#include "prodiv/textprep.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prodiv::embed {

enum class ModelTag : std::uint8_t { boolean = 0, tfidf = 1, pvdm = 2 };

std::string_view to_string(ModelTag tag);
ModelTag parse_model_tag(std::string_view text);

// Unit-length embedding of one firm-year. Bag-of-words models store the
// nonzero coordinates only; PV-DM vectors are dense.
class FirmVector {
public:
    // Both factories normalize to unit length and throw ComputeError naming
    // (cik, year) when the input is the zero vector.
    static FirmVector dense(std::int64_t cik, int year, ModelTag model, std::vector<double> values);
    static FirmVector sparse(std::int64_t cik, int year, ModelTag model, std::size_t dim,
                             std::vector<std::uint32_t> indices, std::vector<double> values);

    std::int64_t cik() const { return cik_; }
    int year() const { return year_; }
    ModelTag model() const { return model_; }
    std::size_t dim() const { return dim_; }
    bool is_sparse() const { return sparse_; }
    // For dense vectors `indices()` is empty and `values()` has `dim()` entries.
    std::span<const std::uint32_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }

    double norm() const;
    std::vector<double> to_dense() const;
    // acc += scale * this
    void accumulate(std::span<double> acc, double scale = 1.0) const;

private:
    FirmVector() = default;
    void normalize();

    std::int64_t cik_ = 0;
    int year_ = 0;
    ModelTag model_ = ModelTag::boolean;
    std::size_t dim_ = 0;
    bool sparse_ = false;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

// Throws InputError on dimension mismatch.
double dot(const FirmVector& a, const FirmVector& b);

// One model's vectors, one row per firm-year document.
struct EmbeddingMatrix {
    ModelTag model = ModelTag::boolean;
    std::size_t dim = 0;
    std::vector<FirmVector> rows;
};

// Sparse nonnegative weights before normalization, indices ascending.
struct SparseWeights {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
};

FirmVector embed_boolean(const textprep::TokenizedDoc& doc, const textprep::Vocabulary& vocab);

// count(w, p) * ln(|F| / docs(w, F)) with F = `docs`.
std::vector<SparseWeights> tfidf_weights(std::span<const textprep::TokenizedDoc> docs,
                                         const textprep::Vocabulary& vocab);
std::vector<FirmVector> embed_tfidf(std::span<const textprep::TokenizedDoc> docs, const textprep::Vocabulary& vocab);

struct PvdmParams {
    std::size_t dim = 300;
    std::size_t window = 8;
    std::size_t epochs = 20;
    double learning_rate = 0.025;
    // Rate reached after the last epoch; the rate decays linearly per epoch.
    double min_learning_rate = 0.0001;
    std::size_t negative_samples = 5;
    std::uint64_t seed = 1;

    // Throws ConfigError on invalid settings.
    void validate() const;
};

struct PvdmResult {
    EmbeddingMatrix vectors;
    // Mean negative-sampling loss per training example, one entry per epoch.
    std::vector<double> epoch_loss;
};

// Distributed-memory paragraph vectors trained with negative sampling. The
// `window` words preceding each position, averaged with the document vector,
// predict the word at that position. Identical inputs and seed give bitwise
// identical output.
PvdmResult train_pvdm(std::span<const textprep::TokenizedDoc> docs, const PvdmParams& params);

// Binary matrix file: magic, provenance text, model tag, storage kind, dim,
// row count, then rows. Companion CSV index `cik,year,row`.
void save_matrix(const EmbeddingMatrix& matrix, const std::filesystem::path& path, std::string_view provenance);
EmbeddingMatrix load_matrix(const std::filesystem::path& path);
std::string index_csv(const EmbeddingMatrix& matrix);
// Dense CSV `cik,year,v0,...` for external projection tools.
std::string export_csv(const EmbeddingMatrix& matrix);

} // namespace prodiv::embed
