#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsl::quad {

/// Running integral I[k] = int_{x[base]}^{x[k]} f by the trapezoid rule,
/// signed (nodes left of base get the negated integral over [x[k], x[base]]).
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f, std::size_t base);

/// Same running integral by composite Simpson. Nodes an even number of
/// intervals from base are pure Simpson pairs; the others add one
/// interval integrated through the neighbouring quadratic, so every node
/// carries fourth-order accuracy. Two-node axes fall back to the trapezoid.
std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> f, std::size_t base);

/// Weights (w0, w1, w2) with int_a^b p = w0 f0 + w1 f1 + w2 f2 for the
/// quadratic p through (x0,f0), (x1,f1), (x2,f2).
std::vector<double> quadratic_weights(double x0, double x1, double x2, double a, double b);

}  // namespace lsl::quad
