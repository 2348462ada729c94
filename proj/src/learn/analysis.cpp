#include "rstar/learn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rstar/io.hpp"
#include "rstar/stats.hpp"

namespace rstar::learn {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("pearson: length mismatch");
    if (x.size() < 2) throw Error("pearson: need at least two points");
    const double mx = stats::mean(x), my = stats::mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error("welch_t: each sample needs at least two values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = stats::variance(a, 1) / na, vb = stats::variance(b, 1) / nb;
    const double diff = stats::mean(a) - stats::mean(b);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (va + vb == 0.0) return {diff == 0.0 ? 0.0 : nan, nan};
    const double df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    return {diff / std::sqrt(va + vb), df};
}

double discrete_mode(std::span<const double> xs) {
    if (xs.empty()) throw Error("mode: empty input");
    std::map<double, std::size_t> counts;
    for (double x : xs) ++counts[x];
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error("quantile: empty input");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double histogram_mode(std::span<const double> xs) {
    if (xs.empty()) throw Error("mode: empty input");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    const double lo = s.front(), range = s.back() - lo;
    if (width <= 0.0 || range <= 0.0) return discrete_mode(s);
    const auto bins = static_cast<std::size_t>(std::min(1e6, std::max(1.0, std::ceil(range / width))));
    std::vector<std::size_t> counts(bins, 0);
    for (double x : s) ++counts[std::min(bins - 1, static_cast<std::size_t>((x - lo) / width))];
    const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    return lo + (static_cast<double>(best) + 0.5) * width;
}

namespace {

GroupStats summarize(const std::vector<double>& xs, bool integral) {
    GroupStats g;
    g.n = xs.size();
    if (xs.empty()) return g;
    g.mode = integral ? discrete_mode(xs) : histogram_mode(xs);
    g.mean = stats::mean(xs);
    g.sigma = stats::stddev(xs, 0);
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    g.min = *mn;
    g.max = *mx;
    return g;
}

} // namespace

std::vector<GroupRow> group_comparison(std::span<const std::string> names, const Matrix& values,
                                       std::span<const int> labels) {
    if (values.rows() != labels.size()) throw Error("group_comparison: row/label count mismatch");
    if (names.size() != values.cols()) throw Error("group_comparison: name count mismatch");
    if (labels.empty()) throw Error("group_comparison: no rows");
    std::vector<GroupRow> out;
    for (std::size_t c = 0; c < values.cols(); ++c) {
        std::vector<double> by_class[2];
        bool integral = true;
        for (std::size_t r = 0; r < values.rows(); ++r) {
            const double v = values(r, c);
            integral = integral && v == std::floor(v);
            by_class[labels[r] == 1 ? 1 : 0].push_back(v);
        }
        GroupRow row;
        row.feature = names[c];
        for (int k = 0; k < 2; ++k) row.cls[k] = summarize(by_class[k], integral);
        if (by_class[0].size() >= 2 && by_class[1].size() >= 2) row.welch = welch_t(by_class[1], by_class[0]);
        else row.welch_defined = false;
        out.push_back(std::move(row));
    }
    return out;
}

std::string group_comparison_csv(std::span<const GroupRow> rows) {
    std::string out = "feature,class,n,mode,mean,sigma,min,max,t,df\n";
    for (const auto& row : rows) {
        for (int k : {1, 0}) {
            const auto& g = row.cls[k];
            out += io::csv_escape(row.feature) + (k == 1 ? ",rising," : ",non_rising,") + std::to_string(g.n) + ',';
            if (g.n == 0)
                out += "NA,NA,NA,NA,NA,";
            else
                out += io::format_double(g.mode) + ',' + io::format_double(g.mean) + ',' + io::format_double(g.sigma) +
                       ',' + io::format_double(g.min) + ',' + io::format_double(g.max) + ',';
            if (row.welch_defined)
                out += io::format_double(row.welch.t) + ',' + io::format_double(row.welch.df);
            else
                out += "NA,NA";
            out += '\n';
        }
    }
    return out;
}

std::vector<std::vector<std::optional<double>>> correlation_matrix(const Matrix& values) {
    const std::size_t d = values.cols();
    std::vector<std::vector<double>> cols(d, std::vector<double>(values.rows()));
    for (std::size_t r = 0; r < values.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) cols[c][r] = values(r, c);
    std::vector<std::vector<std::optional<double>>> m(d, std::vector<std::optional<double>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            try {
                m[i][j] = m[j][i] = pearson(cols[i], cols[j]);
            } catch (const Error&) {
                // zero variance or too few rows: left undefined
            }
        }
    return m;
}

std::string correlation_csv(std::span<const std::string> names,
                            const std::vector<std::vector<std::optional<double>>>& m) {
    std::string out = "feature";
    for (const auto& n : names) out += ',' + io::csv_escape(n);
    out += '\n';
    for (std::size_t i = 0; i < names.size(); ++i) {
        out += io::csv_escape(names[i]);
        for (std::size_t j = 0; j < names.size(); ++j) out += ',' + io::format_optional(m[i][j]);
        out += '\n';
    }
    return out;
}

} // namespace rstar::learn
