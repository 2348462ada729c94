#include "rstar/learn/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace rstar::learn {

std::size_t Dataset::count(int label) const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void Dataset::validate() const {
    if (features.rows() != labels.size()) throw Error("dataset: feature rows and labels differ in length");
    if (!years.empty() && years.size() != labels.size()) throw Error("dataset: years column has wrong length");
    if (!ids.empty() && ids.size() != labels.size()) throw Error("dataset: ids column has wrong length");
    if (!feature_names.empty() && feature_names.size() != features.cols())
        throw Error("dataset: feature_names has wrong length");
    for (int y : labels)
        if (y != 0 && y != 1) throw Error("dataset: labels must be 0 or 1");
}

void Dataset::add_row(std::span<const double> values, int label, int year, std::string id) {
    features.append_row(values);
    labels.push_back(label);
    years.push_back(year);
    ids.push_back(std::move(id));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.features = Matrix(0, features.cols());
    for (auto r : rows) {
        out.features.append_row(features.row(r));
        out.labels.push_back(labels.at(r));
        out.years.push_back(years.empty() ? 0 : years[r]);
        out.ids.push_back(ids.empty() ? std::string() : ids[r]);
    }
    return out;
}

Dataset Dataset::select_features(std::span<const std::size_t> columns) const {
    Dataset out;
    out.labels = labels;
    out.years = years;
    out.ids = ids;
    out.features = Matrix(features.rows(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] >= features.cols()) throw Error("dataset: feature index out of range");
        if (!feature_names.empty()) out.feature_names.push_back(feature_names[columns[c]]);
        for (std::size_t r = 0; r < features.rows(); ++r) out.features(r, c) = features(r, columns[c]);
    }
    return out;
}

std::vector<std::size_t> Dataset::rows_in_years(std::span<const int> wanted) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < years.size(); ++r)
        if (std::find(wanted.begin(), wanted.end(), years[r]) != wanted.end()) out.push_back(r);
    return out;
}

Standardizer::Standardizer(const Matrix& x) : mean_(x.cols(), 0.0), scale_(x.cols(), 1.0) {
    const auto n = static_cast<double>(x.rows());
    if (x.rows() == 0) return;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) m += x(r, c);
        m /= n;
        double v = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) v += (x(r, c) - m) * (x(r, c) - m);
        const double sd = std::sqrt(v / n);
        mean_[c] = m;
        scale_[c] = sd > 0.0 ? sd : 1.0;
    }
}

Matrix Standardizer::transform(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
    return out;
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    if (in.size() != mean_.size()) throw Error("standardizer: dimensionality mismatch");
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean_[c]) / scale_[c];
}

} // namespace rstar::learn
