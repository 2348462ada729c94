#pragma once

#include <span>
#include <string>
#include <vector>

#include "rstar/matrix.hpp"

namespace rstar::learn {

/// Labelled rows with the first-publication year used for temporal splits.
struct Dataset {
    Matrix features; ///< rows x dimensionality
    std::vector<int> labels;
    std::vector<int> years;
    std::vector<std::string> ids;
    std::vector<std::string> feature_names;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t dimensionality() const noexcept { return features.cols(); }
    [[nodiscard]] std::size_t count(int label) const noexcept;

    /// Throws when the columns are inconsistent.
    void validate() const;

    void add_row(std::span<const double> values, int label, int year = 0, std::string id = {});
    [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
    [[nodiscard]] Dataset select_features(std::span<const std::size_t> columns) const;
    /// Rows whose year is in `years`, in original order.
    [[nodiscard]] std::vector<std::size_t> rows_in_years(std::span<const int> years) const;
};

/// Per-column affine map to zero mean and unit population variance; constant columns keep scale 1.
class Standardizer {
public:
    Standardizer() = default;
    explicit Standardizer(const Matrix& x);

    [[nodiscard]] Matrix transform(const Matrix& x) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;
    [[nodiscard]] const std::vector<double>& means() const noexcept { return mean_; }
    [[nodiscard]] const std::vector<double>& scales() const noexcept { return scale_; }

private:
    std::vector<double> mean_;
    std::vector<double> scale_;
};

} // namespace rstar::learn
