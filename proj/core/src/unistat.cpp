#include "pqcnn/unistat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pqcnn::unistat {

namespace {

constexpr double kUniformityThreshold = 0.05;
constexpr int kMaxIterations = 500;
constexpr double kConvergence = 1e-16;
constexpr double kTiny = 1e-300;

double lower_gamma_series(double a, double z) {
    double term = 1.0 / a;
    double sum = term;
    for (int i = 1; i <= kMaxIterations; ++i) {
        term *= z / (a + i);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kConvergence)
            break;
    }
    return sum * std::exp(-z + a * std::log(z) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, z).
double upper_gamma_cf(double a, double z) {
    double b = z + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kConvergence)
            break;
    }
    return std::exp(-z + a * std::log(z) - std::lgamma(a)) * h;
}

std::vector<double> bin_centers(int bins) {
    std::vector<double> centers(static_cast<std::size_t>(bins));
    for (int j = 0; j < bins; ++j)
        centers[static_cast<std::size_t>(j)] = (j + 0.5) / bins;
    return centers;
}

void require_bins(int bins) {
    if (bins < 2)
        throw std::invalid_argument("unistat: need at least 2 bins");
}

void require_unit_range(std::span<const double> h) {
    for (double v : h)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("unistat: normalized values must lie in [0,1]");
}

} // namespace

std::vector<double> normalize(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("unistat::normalize: need at least 2 values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> out(values.size());
    if (hi == lo) {
        std::fill(out.begin(), out.end(), 0.5);
        return out;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = (values[i] - lo) / range;
    return out;
}

std::vector<double> histogram_hard(std::span<const double> normalized, int bins) {
    require_bins(bins);
    require_unit_range(normalized);
    std::vector<double> p(static_cast<std::size_t>(bins), 0.0);
    for (double h : normalized) {
        int j = static_cast<int>(h * bins);
        if (j >= bins)
            j = bins - 1; // h == 1.0 belongs to the last bin
        p[static_cast<std::size_t>(j)] += 1.0;
    }
    const double n = static_cast<double>(normalized.size());
    for (double& v : p)
        v /= n;
    return p;
}

double chi_square(std::span<const double> probabilities) {
    const int m = static_cast<int>(probabilities.size());
    require_bins(m);
    double total = 0.0;
    for (double p : probabilities)
        total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("unistat::chi_square: probabilities sum to " + std::to_string(total));
    const double expected = 1.0 / m;
    double acc = 0.0;
    for (double p : probabilities) {
        const double d = p - expected;
        acc += d * d;
    }
    return m * acc;
}

double chi2_cdf(double x, int dof) {
    if (x < 0.0)
        throw std::domain_error("unistat::chi2_cdf: x must be nonnegative");
    if (dof < 1)
        throw std::invalid_argument("unistat::chi2_cdf: dof must be at least 1");
    if (x == 0.0)
        return 0.0;
    const double a = 0.5 * dof;
    const double z = 0.5 * x;
    if (x < dof + 1.0)
        return lower_gamma_series(a, z);
    return 1.0 - upper_gamma_cf(a, z);
}

double chi2_cdf_derivative(double x, int dof) {
    if (x < 0.0)
        throw std::domain_error("unistat::chi2_cdf_derivative: x must be nonnegative");
    if (dof < 1)
        throw std::invalid_argument("unistat::chi2_cdf_derivative: dof must be at least 1");
    const double a = 0.5 * dof;
    const double z = 0.5 * x;
    if (z <= 0.0)
        return 0.0; // density at the origin taken as 0 for every dof
    return 0.5 * std::exp((a - 1.0) * std::log(z) - z - std::lgamma(a));
}

UniformityReport uniformity_report(std::span<const double> values, int bins) {
    const auto h = normalize(values);
    const auto p = histogram_hard(h, bins);
    UniformityReport report;
    report.bin_count = bins;
    report.dof = bins - 1;
    report.chi_square = chi_square(p);
    report.theta = chi2_cdf(report.chi_square, report.dof);
    report.uniform = report.theta < kUniformityThreshold;
    return report;
}

std::vector<double> histogram_soft(std::span<const double> normalized, int bins, double bandwidth) {
    return histogram_soft_with_grad(normalized, bins, bandwidth).probabilities;
}

SoftHistogram histogram_soft_with_grad(std::span<const double> normalized, int bins, double bandwidth) {
    require_bins(bins);
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("unistat::histogram_soft: bandwidth must be positive");

    const int n = static_cast<int>(normalized.size());
    const auto centers = bin_centers(bins);
    const double inv_bw2 = 1.0 / (bandwidth * bandwidth);

    SoftHistogram out;
    out.probabilities.assign(static_cast<std::size_t>(bins), 0.0);
    out.jacobian = Eigen::MatrixXd::Zero(bins, n);

    std::vector<double> logits(static_cast<std::size_t>(bins));
    std::vector<double> weights(static_cast<std::size_t>(bins));
    for (int i = 0; i < n; ++i) {
        const double h = normalized[static_cast<std::size_t>(i)];
        double top = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < bins; ++j) {
            const double d = h - centers[static_cast<std::size_t>(j)];
            logits[static_cast<std::size_t>(j)] = -0.5 * d * d * inv_bw2;
            top = std::max(top, logits[static_cast<std::size_t>(j)]);
        }
        double denom = 0.0;
        for (int j = 0; j < bins; ++j) {
            weights[static_cast<std::size_t>(j)] = std::exp(logits[static_cast<std::size_t>(j)] - top);
            denom += weights[static_cast<std::size_t>(j)];
        }
        // softmax weights q_j and their derivative wrt the sample value
        double mean_slope = 0.0;
        for (int j = 0; j < bins; ++j) {
            weights[static_cast<std::size_t>(j)] /= denom;
            const double slope = -(h - centers[static_cast<std::size_t>(j)]) * inv_bw2;
            mean_slope += weights[static_cast<std::size_t>(j)] * slope;
        }
        for (int j = 0; j < bins; ++j) {
            const double q = weights[static_cast<std::size_t>(j)];
            out.probabilities[static_cast<std::size_t>(j)] += q / n;
            const double slope = -(h - centers[static_cast<std::size_t>(j)]) * inv_bw2;
            out.jacobian(j, i) = q * (slope - mean_slope) / n;
        }
    }
    return out;
}

ThetaGrad theta_soft_with_grad(std::span<const double> values, int bins, double bandwidth) {
    const int n = static_cast<int>(values.size());
    if (n < 2)
        throw std::invalid_argument("unistat::theta_soft_with_grad: need at least 2 values");

    ThetaGrad out;
    out.gradient.assign(static_cast<std::size_t>(n), 0.0);

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) {
        // Degenerate spread: constant histogram input, zero gradient.
        std::vector<double> h(static_cast<std::size_t>(n), 0.5);
        const auto soft = histogram_soft(h, bins, bandwidth);
        out.chi_square = chi_square(soft);
        out.theta = chi2_cdf(out.chi_square, bins - 1);
        return out;
    }

    const double range = hi - lo;
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        h[static_cast<std::size_t>(i)] = (values[static_cast<std::size_t>(i)] - lo) / range;

    const auto soft = histogram_soft_with_grad(h, bins, bandwidth);
    out.chi_square = chi_square(soft.probabilities);
    out.theta = chi2_cdf(out.chi_square, bins - 1);

    const double dtheta_dchi2 = chi2_cdf_derivative(out.chi_square, bins - 1);
    const double expected = 1.0 / bins;

    // d theta / d h_i through the soft histogram and the statistic.
    Eigen::VectorXd grad_h = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < bins; ++j) {
        const double coeff = dtheta_dchi2 * 2.0 * bins *
                             (soft.probabilities[static_cast<std::size_t>(j)] - expected);
        grad_h += coeff * soft.jacobian.row(j).transpose();
    }

    // Pull back through the min-max map. With a = argmin, b = argmax:
    // h_i = (v_i - v_a)/R, so v_a and v_b pick up the collected terms.
    const auto a = static_cast<int>(lo_it - values.begin());
    const auto b = static_cast<int>(hi_it - values.begin());
    const double grad_sum = grad_h.sum();
    double grad_dot_h = 0.0;
    for (int i = 0; i < n; ++i)
        grad_dot_h += grad_h(i) * h[static_cast<std::size_t>(i)];

    for (int i = 0; i < n; ++i)
        out.gradient[static_cast<std::size_t>(i)] = grad_h(i) / range;
    out.gradient[static_cast<std::size_t>(a)] += (grad_dot_h - grad_sum) / range;
    out.gradient[static_cast<std::size_t>(b)] -= grad_dot_h / range;
    return out;
}

} // namespace pqcnn::unistat
