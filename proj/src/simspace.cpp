#include "prodiv/simspace.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace prodiv::simspace {

std::string firm_label(std::int64_t cik, int year)
{
    return std::to_string(cik) + "_" + std::to_string(year);
}

SimilarityMatrix cosine_matrix(std::span<const embed::FirmVector> vectors)
{
    const auto n = static_cast<Eigen::Index>(vectors.size());
    SimilarityMatrix m;
    m.values.resize(n, n);
    m.labels.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (v.dim() != vectors.front().dim()) {
            throw InputError("dimension mismatch in cosine_matrix: " + std::to_string(v.dim()) + " vs " +
                             std::to_string(vectors.front().dim()));
        }
        m.labels.push_back(firm_label(v.cik(), v.year()));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& vi = vectors[static_cast<std::size_t>(i)];
        m.values(i, i) = embed::dot(vi, vi);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = embed::dot(vi, vectors[static_cast<std::size_t>(j)]);
            m.values(i, j) = s;
            m.values(j, i) = s;
        }
    }
    return m;
}

ClassProfile make_profile(int year, std::vector<int> classes, const std::vector<std::size_t>& counts,
                          Eigen::MatrixXd similarity)
{
    const auto s = static_cast<Eigen::Index>(classes.size());
    if (classes.empty() || counts.size() != classes.size() || similarity.rows() != s || similarity.cols() != s) {
        throw InputError("class profile shapes disagree");
    }
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    ClassProfile p;
    p.year = year;
    p.classes = std::move(classes);
    p.similarity = std::move(similarity);
    p.abundance.resize(s);
    for (Eigen::Index i = 0; i < s; ++i) {
        if (counts[static_cast<std::size_t>(i)] == 0) {
            throw InputError("class " + std::to_string(p.classes[static_cast<std::size_t>(i)]) + " has no firms");
        }
        p.abundance(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / total;
    }
    return p;
}

ClassProfile aggregate_classes(std::span<const embed::FirmVector> vectors, const std::map<std::int64_t, int>& sic_map,
                               int year)
{
    // code -> members, each member list ordered by cik
    std::map<int, std::vector<const embed::FirmVector*>> members;
    std::size_t dim = 0;
    for (const auto& v : vectors) {
        if (v.year() != year) {
            continue;
        }
        const auto it = sic_map.find(v.cik());
        if (it == sic_map.end()) {
            throw InputError("no SIC code for cik " + std::to_string(v.cik()));
        }
        if (dim != 0 && v.dim() != dim) {
            throw InputError("dimension mismatch in aggregate_classes");
        }
        dim = v.dim();
        members[it->second].push_back(&v);
    }
    if (members.empty()) {
        throw InputError("no firms for year " + std::to_string(year));
    }

    std::vector<int> classes;
    std::vector<std::size_t> counts;
    std::vector<std::vector<double>> centroids;
    for (auto& [code, list] : members) {
        std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->cik() < b->cik(); });
        std::vector<double> c(dim, 0.0);
        for (const auto* v : list) {
            v->accumulate(c);
        }
        double norm = 0.0;
        for (double x : c) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) {
            throw ComputeError("class " + std::to_string(code) + " has a zero centroid in year " + std::to_string(year));
        }
        for (double& x : c) {
            x /= norm;
        }
        classes.push_back(code);
        counts.push_back(list.size());
        centroids.push_back(std::move(c));
    }

    const auto s = static_cast<Eigen::Index>(classes.size());
    Eigen::MatrixXd z(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        z(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < s; ++j) {
            const auto& a = centroids[static_cast<std::size_t>(i)];
            const auto& b = centroids[static_cast<std::size_t>(j)];
            double d = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                d += a[k] * b[k];
            }
            d = std::clamp(d, 0.0, 1.0);
            z(i, j) = d;
            z(j, i) = d;
        }
    }
    return make_profile(year, std::move(classes), counts, std::move(z));
}

SimilarityMatrix order_for_heatmap(const SimilarityMatrix& matrix, const std::map<std::string, FirmMeta>& metadata)
{
    std::vector<std::size_t> order(matrix.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<FirmMeta> meta;
    meta.reserve(matrix.size());
    for (const auto& label : matrix.labels) {
        const auto it = metadata.find(label);
        if (it == metadata.end()) {
            throw InputError("no heatmap metadata for firm '" + label + "'");
        }
        meta.push_back(it->second);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(meta[a].sic_code, meta[a].cik) < std::tie(meta[b].sic_code, meta[b].cik);
    });
    SimilarityMatrix out;
    const auto n = static_cast<Eigen::Index>(matrix.size());
    out.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto oi = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
        out.labels.push_back(matrix.labels[static_cast<std::size_t>(oi)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            out.values(i, j) = matrix.values(oi, static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]));
        }
    }
    return out;
}

std::string matrix_csv(const SimilarityMatrix& matrix)
{
    std::string out = "label";
    for (const auto& l : matrix.labels) {
        out += "," + artifacts::csv_field(l);
    }
    out += "\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out += artifacts::csv_field(matrix.labels[i]);
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out += "," + artifacts::format_real(
                             matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out += "\n";
    }
    return out;
}

std::string matrix_svg(const SimilarityMatrix& matrix, double low)
{
    constexpr int cell = 8;
    const int n = static_cast<int>(matrix.size());
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(n * cell) +
                      "\" height=\"" + std::to_string(n * cell) + "\" shape-rendering=\"crispEdges\">\n";
    char buffer[160];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = matrix.values(i, j);
            const double t = std::clamp((v - low) / (1.0 - low), 0.0, 1.0);
            const int g = static_cast<int>(std::lround(255.0 * t));
            std::snprintf(buffer, sizeof buffer,
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n", j * cell,
                          i * cell, cell, cell, g, g, g);
            out += buffer;
        }
    }
    out += "</svg>\n";
    return out;
}

HeatmapFiles export_heatmap(const SimilarityMatrix& matrix, const std::map<std::string, FirmMeta>& metadata,
                            const std::filesystem::path& stem, const std::string& header)
{
    const auto ordered = order_for_heatmap(matrix, metadata);
    HeatmapFiles files{stem, stem};
    files.csv += ".csv";
    files.svg += ".svg";
    const double low = std::min(0.0, ordered.values.size() > 0 ? ordered.values.minCoeff() : 0.0);
    std::string csv = header.empty() ? std::string() : "# " + header + "\n";
    csv += matrix_csv(ordered);
    std::string svg = header.empty() ? std::string() : "<!-- " + header + " -->\n";
    svg += matrix_svg(ordered, low);
    artifacts::write_text_file(files.csv, csv);
    artifacts::write_text_file(files.svg, svg);
    return files;
}

} // namespace prodiv::simspace
