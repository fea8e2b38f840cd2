#include "prodiv/embed.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace prodiv::embed {

namespace {

std::string firm_label(std::int64_t cik, int year)
{
    return "(cik " + std::to_string(cik) + ", year " + std::to_string(year) + ")";
}

} // namespace

std::string_view to_string(ModelTag tag)
{
    switch (tag) {
    case ModelTag::boolean: return "boolean";
    case ModelTag::tfidf: return "tfidf";
    case ModelTag::pvdm: return "pvdm";
    }
    return "boolean";
}

ModelTag parse_model_tag(std::string_view text)
{
    if (text == "boolean") return ModelTag::boolean;
    if (text == "tfidf") return ModelTag::tfidf;
    if (text == "pvdm") return ModelTag::pvdm;
    throw ConfigError("unknown embedding model '" + std::string(text) + "'");
}

FirmVector FirmVector::dense(std::int64_t cik, int year, ModelTag model, std::vector<double> values)
{
    FirmVector v;
    v.cik_ = cik;
    v.year_ = year;
    v.model_ = model;
    v.dim_ = values.size();
    v.sparse_ = false;
    v.values_ = std::move(values);
    v.normalize();
    return v;
}

FirmVector FirmVector::sparse(std::int64_t cik, int year, ModelTag model, std::size_t dim,
                              std::vector<std::uint32_t> indices, std::vector<double> values)
{
    if (indices.size() != values.size()) {
        throw InputError("sparse vector index/value length mismatch for " + firm_label(cik, year));
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= dim || (i > 0 && indices[i] <= indices[i - 1])) {
            throw InputError("sparse vector indices must be ascending and below dim for " + firm_label(cik, year));
        }
    }
    FirmVector v;
    v.cik_ = cik;
    v.year_ = year;
    v.model_ = model;
    v.dim_ = dim;
    v.sparse_ = true;
    // Explicit zeros are dropped so the stored pattern is the support.
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (values[i] != 0.0) {
            v.indices_.push_back(indices[i]);
            v.values_.push_back(values[i]);
        }
    }
    v.normalize();
    return v;
}

double FirmVector::norm() const
{
    double s = 0.0;
    for (double x : values_) {
        s += x * x;
    }
    return std::sqrt(s);
}

void FirmVector::normalize()
{
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ComputeError("zero vector for " + firm_label(cik_, year_) + " under model " +
                           std::string(to_string(model_)));
    }
    // Already-unit vectors (e.g. reloaded from disk) keep their exact bits.
    if (std::abs(n - 1.0) <= 1e-12) {
        return;
    }
    for (double& x : values_) {
        x /= n;
    }
}

std::vector<double> FirmVector::to_dense() const
{
    if (!sparse_) {
        return values_;
    }
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        out[indices_[i]] = values_[i];
    }
    return out;
}

void FirmVector::accumulate(std::span<double> acc, double scale) const
{
    if (acc.size() != dim_) {
        throw InputError("accumulator dimension mismatch");
    }
    if (sparse_) {
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            acc[indices_[i]] += scale * values_[i];
        }
    } else {
        for (std::size_t i = 0; i < dim_; ++i) {
            acc[i] += scale * values_[i];
        }
    }
}

double dot(const FirmVector& a, const FirmVector& b)
{
    if (a.dim() != b.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    const auto av = a.values();
    const auto bv = b.values();
    double s = 0.0;
    if (a.is_sparse() && b.is_sparse()) {
        const auto ai = a.indices();
        const auto bi = b.indices();
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ai.size() && j < bi.size()) {
            if (ai[i] == bi[j]) {
                s += av[i++] * bv[j++];
            } else if (ai[i] < bi[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    } else if (a.is_sparse()) {
        const auto ai = a.indices();
        for (std::size_t i = 0; i < ai.size(); ++i) {
            s += av[i] * bv[ai[i]];
        }
    } else if (b.is_sparse()) {
        return dot(b, a);
    } else {
        for (std::size_t i = 0; i < av.size(); ++i) {
            s += av[i] * bv[i];
        }
    }
    return s;
}

FirmVector embed_boolean(const textprep::TokenizedDoc& doc, const textprep::Vocabulary& vocab)
{
    if (vocab.empty()) {
        throw InputError("vocabulary is empty");
    }
    std::vector<std::uint32_t> indices;
    for (const auto& token : doc.tokens) {
        if (const auto idx = vocab.index_of(token)) {
            indices.push_back(static_cast<std::uint32_t>(*idx));
        }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    std::vector<double> values(indices.size(), 1.0);
    return FirmVector::sparse(doc.cik, doc.year, ModelTag::boolean, vocab.size(), std::move(indices),
                              std::move(values));
}

std::vector<SparseWeights> tfidf_weights(std::span<const textprep::TokenizedDoc> docs,
                                         const textprep::Vocabulary& vocab)
{
    if (vocab.empty()) {
        throw InputError("vocabulary is empty");
    }
    std::vector<std::map<std::uint32_t, std::size_t>> counts(docs.size());
    std::vector<std::size_t> df(vocab.size(), 0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& token : docs[d].tokens) {
            if (const auto idx = vocab.index_of(token)) {
                ++counts[d][static_cast<std::uint32_t>(*idx)];
            }
        }
        for (const auto& [idx, c] : counts[d]) {
            ++df[idx];
        }
    }
    const auto corpus_size = static_cast<double>(docs.size());
    std::vector<SparseWeights> out(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& [idx, c] : counts[d]) {
            out[d].indices.push_back(idx);
            out[d].values.push_back(static_cast<double>(c) * std::log(corpus_size / static_cast<double>(df[idx])));
        }
    }
    return out;
}

std::vector<FirmVector> embed_tfidf(std::span<const textprep::TokenizedDoc> docs, const textprep::Vocabulary& vocab)
{
    auto weights = tfidf_weights(docs, vocab);
    std::vector<FirmVector> out;
    out.reserve(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        out.push_back(FirmVector::sparse(docs[d].cik, docs[d].year, ModelTag::tfidf, vocab.size(),
                                         std::move(weights[d].indices), std::move(weights[d].values)));
    }
    return out;
}

void PvdmParams::validate() const
{
    if (dim < 2) throw ConfigError("pvdm dim must be >= 2");
    if (window < 1) throw ConfigError("pvdm window must be >= 1");
    if (epochs < 1) throw ConfigError("pvdm epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("pvdm learning rate must be > 0");
    if (!(min_learning_rate >= 0.0) || min_learning_rate > learning_rate) {
        throw ConfigError("pvdm min learning rate must lie in [0, learning rate]");
    }
}

namespace {

// Owns every piece of mutable training state for one PV-DM run.
class PvdmTrainer {
public:
    PvdmTrainer(std::span<const textprep::TokenizedDoc> docs, const PvdmParams& params)
        : docs_(docs), params_(params), rng_(params.seed)
    {
        build_word_index();
        const std::size_t d = params_.dim;
        doc_vectors_.resize(docs_.size() * d);
        word_vectors_.resize(words_.size() * d);
        output_vectors_.assign(words_.size() * d, 0.0);
        for (double& x : doc_vectors_) {
            x = (uniform() - 0.5) / static_cast<double>(d);
        }
        for (double& x : word_vectors_) {
            x = (uniform() - 0.5) / static_cast<double>(d);
        }
        build_noise_table();
        hidden_.resize(d);
        hidden_grad_.resize(d);
    }

    double run_epoch(std::size_t epoch)
    {
        const double span = params_.learning_rate - params_.min_learning_rate;
        const double alpha =
            params_.learning_rate - span * static_cast<double>(epoch) / static_cast<double>(params_.epochs);

        std::vector<std::size_t> order(docs_.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(i)]);
        }

        double loss = 0.0;
        std::size_t examples = 0;
        for (const auto doc : order) {
            const auto& seq = encoded_[doc];
            for (std::size_t t = params_.window; t < seq.size(); ++t) {
                loss += train_example(doc, seq, t, alpha);
                ++examples;
            }
        }
        return loss / static_cast<double>(examples);
    }

    EmbeddingMatrix vectors() const
    {
        EmbeddingMatrix m;
        m.model = ModelTag::pvdm;
        m.dim = params_.dim;
        m.rows.reserve(docs_.size());
        for (std::size_t i = 0; i < docs_.size(); ++i) {
            const auto begin = doc_vectors_.begin() + static_cast<std::ptrdiff_t>(i * params_.dim);
            std::vector<double> v(begin, begin + static_cast<std::ptrdiff_t>(params_.dim));
            m.rows.push_back(FirmVector::dense(docs_[i].cik, docs_[i].year, ModelTag::pvdm, std::move(v)));
        }
        return m;
    }

private:
    void build_word_index()
    {
        std::map<std::string_view, std::size_t> frequency;
        for (const auto& doc : docs_) {
            for (const auto& token : doc.tokens) {
                ++frequency[token];
            }
        }
        std::unordered_map<std::string_view, std::uint32_t> index;
        for (const auto& [word, count] : frequency) {
            index.emplace(word, static_cast<std::uint32_t>(words_.size()));
            words_.push_back(word);
            counts_.push_back(count);
        }
        encoded_.reserve(docs_.size());
        for (const auto& doc : docs_) {
            std::vector<std::uint32_t> seq;
            seq.reserve(doc.tokens.size());
            for (const auto& token : doc.tokens) {
                seq.push_back(index.at(token));
            }
            encoded_.push_back(std::move(seq));
        }
    }

    // Cumulative unigram^0.75 distribution for negative draws.
    void build_noise_table()
    {
        noise_cdf_.resize(counts_.size());
        double total = 0.0;
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            total += std::pow(static_cast<double>(counts_[i]), 0.75);
            noise_cdf_[i] = total;
        }
        for (double& c : noise_cdf_) {
            c /= total;
        }
    }

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    std::uint32_t draw_negative()
    {
        const double u = uniform();
        const auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), u);
        const auto idx = static_cast<std::size_t>(std::distance(noise_cdf_.begin(), it));
        return static_cast<std::uint32_t>(std::min(idx, noise_cdf_.size() - 1));
    }

    static double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

    double train_example(std::size_t doc, const std::vector<std::uint32_t>& seq, std::size_t t, double alpha)
    {
        const std::size_t d = params_.dim;
        double* doc_vec = &doc_vectors_[doc * d];
        const double inv = 1.0 / static_cast<double>(params_.window + 1);

        std::copy(doc_vec, doc_vec + d, hidden_.begin());
        for (std::size_t c = t - params_.window; c < t; ++c) {
            const double* w = &word_vectors_[seq[c] * d];
            for (std::size_t k = 0; k < d; ++k) {
                hidden_[k] += w[k];
            }
        }
        for (double& h : hidden_) {
            h *= inv;
        }
        std::fill(hidden_grad_.begin(), hidden_grad_.end(), 0.0);

        const auto target = seq[t];
        double loss = 0.0;
        for (std::size_t s = 0; s <= params_.negative_samples; ++s) {
            std::uint32_t word = target;
            double label = 1.0;
            if (s > 0) {
                word = draw_negative();
                if (word == target) {
                    continue;
                }
                label = 0.0;
            }
            double* out = &output_vectors_[word * d];
            double f = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                f += hidden_[k] * out[k];
            }
            const double sigma = 1.0 / (1.0 + std::exp(-f));
            loss += label > 0.0 ? softplus(-f) : softplus(f);
            const double g = (label - sigma) * alpha;
            for (std::size_t k = 0; k < d; ++k) {
                hidden_grad_[k] += g * out[k];
                out[k] += g * hidden_[k];
            }
        }

        for (std::size_t k = 0; k < d; ++k) {
            doc_vec[k] += hidden_grad_[k];
        }
        for (std::size_t c = t - params_.window; c < t; ++c) {
            double* w = &word_vectors_[seq[c] * d];
            for (std::size_t k = 0; k < d; ++k) {
                w[k] += hidden_grad_[k];
            }
        }
        return loss;
    }

    std::span<const textprep::TokenizedDoc> docs_;
    PvdmParams params_;
    std::mt19937_64 rng_;

    std::vector<std::string_view> words_;
    std::vector<std::size_t> counts_;
    std::vector<std::vector<std::uint32_t>> encoded_;
    std::vector<double> noise_cdf_;

    std::vector<double> doc_vectors_;
    std::vector<double> word_vectors_;
    std::vector<double> output_vectors_;
    std::vector<double> hidden_;
    std::vector<double> hidden_grad_;
};

} // namespace

PvdmResult train_pvdm(std::span<const textprep::TokenizedDoc> docs, const PvdmParams& params)
{
    params.validate();
    if (docs.empty()) {
        throw InputError("cannot train PV-DM on an empty corpus");
    }
    for (const auto& doc : docs) {
        if (doc.tokens.size() < params.window + 1) {
            throw InputError("document " + firm_label(doc.cik, doc.year) + " has " + std::to_string(doc.tokens.size()) +
                             " tokens; PV-DM with window " + std::to_string(params.window) + " needs at least " +
                             std::to_string(params.window + 1));
        }
    }

    PvdmTrainer trainer(docs, params);
    PvdmResult result;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        const double loss = trainer.run_epoch(epoch);
        if (!std::isfinite(loss)) {
            throw ComputeError("PV-DM training diverged: non-finite loss at epoch " + std::to_string(epoch + 1));
        }
        result.epoch_loss.push_back(loss);
    }
    result.vectors = trainer.vectors();
    return result;
}

namespace {

constexpr char matrix_magic[8] = {'P', 'D', 'E', 'M', 'B', '0', '0', '1'};

static_assert(std::endian::native == std::endian::little, "embedding files are little-endian");

template <typename T>
void write_pod(std::ostream& out, const T& value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& path)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw InputError("truncated embedding file " + path.string());
    }
    return value;
}

} // namespace

void save_matrix(const EmbeddingMatrix& matrix, const std::filesystem::path& path, std::string_view provenance)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    const bool sparse = !matrix.rows.empty() && matrix.rows.front().is_sparse();
    out.write(matrix_magic, sizeof matrix_magic);
    write_pod(out, static_cast<std::uint32_t>(provenance.size()));
    out.write(provenance.data(), static_cast<std::streamsize>(provenance.size()));
    write_pod(out, static_cast<std::uint8_t>(matrix.model));
    write_pod(out, static_cast<std::uint8_t>(sparse ? 1 : 0));
    write_pod(out, static_cast<std::uint64_t>(matrix.dim));
    write_pod(out, static_cast<std::uint64_t>(matrix.rows.size()));
    for (const auto& row : matrix.rows) {
        if (row.is_sparse() != sparse || row.dim() != matrix.dim) {
            throw InputError("embedding rows differ in storage kind or dimension");
        }
        write_pod(out, static_cast<std::int64_t>(row.cik()));
        write_pod(out, static_cast<std::int32_t>(row.year()));
        if (sparse) {
            write_pod(out, static_cast<std::uint64_t>(row.indices().size()));
            out.write(reinterpret_cast<const char*>(row.indices().data()),
                      static_cast<std::streamsize>(row.indices().size_bytes()));
        }
        out.write(reinterpret_cast<const char*>(row.values().data()),
                  static_cast<std::streamsize>(row.values().size_bytes()));
    }
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

EmbeddingMatrix load_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open embedding file " + path.string());
    }
    char magic[sizeof matrix_magic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, matrix_magic, sizeof magic) != 0) {
        throw InputError("not an embedding file: " + path.string());
    }
    const auto header_len = read_pod<std::uint32_t>(in, path);
    std::string header(header_len, '\0');
    in.read(header.data(), header_len);
    const auto tag = read_pod<std::uint8_t>(in, path);
    if (tag > static_cast<std::uint8_t>(ModelTag::pvdm)) {
        throw InputError("unknown model tag in " + path.string());
    }
    const bool sparse = read_pod<std::uint8_t>(in, path) != 0;
    EmbeddingMatrix m;
    m.model = static_cast<ModelTag>(tag);
    m.dim = read_pod<std::uint64_t>(in, path);
    const auto rows = read_pod<std::uint64_t>(in, path);
    m.rows.reserve(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
        const auto cik = read_pod<std::int64_t>(in, path);
        const auto year = read_pod<std::int32_t>(in, path);
        const std::uint64_t nnz = sparse ? read_pod<std::uint64_t>(in, path) : m.dim;
        if (nnz > m.dim) {
            throw InputError("corrupt row in " + path.string());
        }
        std::vector<std::uint32_t> indices(sparse ? nnz : 0);
        if (sparse) {
            in.read(reinterpret_cast<char*>(indices.data()), static_cast<std::streamsize>(nnz * sizeof(std::uint32_t)));
        }
        std::vector<double> values(nnz);
        in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(nnz * sizeof(double)));
        if (!in) {
            throw InputError("truncated embedding file " + path.string());
        }
        m.rows.push_back(sparse ? FirmVector::sparse(cik, year, m.model, m.dim, std::move(indices), std::move(values))
                                : FirmVector::dense(cik, year, m.model, std::move(values)));
    }
    return m;
}

std::string index_csv(const EmbeddingMatrix& matrix)
{
    std::string out = "cik,year,row\n";
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        out += std::to_string(matrix.rows[i].cik()) + "," + std::to_string(matrix.rows[i].year()) + "," +
               std::to_string(i) + "\n";
    }
    return out;
}

std::string export_csv(const EmbeddingMatrix& matrix)
{
    std::string out = "cik,year";
    for (std::size_t k = 0; k < matrix.dim; ++k) {
        out += ",v" + std::to_string(k);
    }
    out += "\n";
    for (const auto& row : matrix.rows) {
        out += std::to_string(row.cik()) + "," + std::to_string(row.year());
        for (double x : row.to_dense()) {
            out += "," + artifacts::format_real(x);
        }
        out += "\n";
    }
    return out;
}

} // namespace prodiv::embed
