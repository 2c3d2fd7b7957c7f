#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace pqcnn::unistat {

// Uniformity statistics for ciphertext vectors. The chi-squared statistic
// here is taken over bin probabilities, not counts:
//
//     chi2 = m * sum_j (p_j - 1/m)^2
//
// which is the count-based Pearson statistic divided by the sample count.
// The verdict convention follows suit: a CDF value theta below 0.05 is
// declared "uniform". Both choices are deliberate and match the cipher's
// training objective; they are NOT the textbook goodness-of-fit test, whose
// rejection rule points the other way.

struct UniformityReport {
    double chi_square = 0.0;
    int dof = 0;          // bin_count - 1
    double theta = 0.0;   // chi-squared CDF of chi_square at dof
    bool uniform = false; // theta < 0.05
    int bin_count = 0;
};

// Min-max map onto [0,1]. A constant vector maps to all 0.5 rather than
// erroring, which keeps training robust when a layer starts out saturated;
// the histogram then sees it as maximally non-uniform.
std::vector<double> normalize(std::span<const double> values);

// Bin j (1-based) covers [(j-1)/m, j/m), the last bin closed at 1.
// Returns bin probabilities (counts / n).
std::vector<double> histogram_hard(std::span<const double> normalized, int bins);

double chi_square(std::span<const double> probabilities);

// Regularized lower incomplete gamma P(dof/2, x/2): series expansion below
// x < dof+1, Lentz continued fraction above. Absolute error <= 1e-10.
double chi2_cdf(double x, int dof);

// d/dx of chi2_cdf at fixed dof (the chi-squared density).
double chi2_cdf_derivative(double x, int dof);

UniformityReport uniformity_report(std::span<const double> values, int bins);

// Differentiable surrogate for histogram_hard: every sample spreads over
// the bins with softmax weights -((h - center)/bandwidth)^2 / 2, so bin
// probabilities stay positive, sum to one, and have nonzero gradients.
// Converges to the hard histogram as bandwidth -> 0 (off bin boundaries).
std::vector<double> histogram_soft(std::span<const double> normalized, int bins, double bandwidth);

// Soft histogram plus its Jacobian d p_j / d h_i (bins x samples).
struct SoftHistogram {
    std::vector<double> probabilities;
    Eigen::MatrixXd jacobian;
};

SoftHistogram histogram_soft_with_grad(std::span<const double> normalized, int bins, double bandwidth);

// The full differentiable chain normalize -> soft histogram -> chi-squared
// -> CDF, with the gradient of theta taken back to the raw values. Used as
// the uniformity term of the training loss.
struct ThetaGrad {
    double theta = 0.0;
    double chi_square = 0.0;
    std::vector<double> gradient; // d theta / d values_i
};

ThetaGrad theta_soft_with_grad(std::span<const double> values, int bins, double bandwidth);

} // namespace pqcnn::unistat
