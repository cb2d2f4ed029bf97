#include "frechet/graded_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frechet/errors.hpp"

namespace frechet {

double phi(double x)
{
    if (!(x >= 0.0)) {
        throw DomainError("phi: negative or NaN argument " + std::to_string(x));
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    return x / (1.0 + x);
}

double phi_inverse(double y)
{
    if (!(y >= 0.0) || y > 1.0) {
        throw DomainError("phi_inverse: argument outside [0,1]");
    }
    if (y == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return y / (1.0 - y);
}

double WeightSequence::at(std::size_t n) const
{
    if (n < values.size()) {
        return values[n];
    }
    if (continuation_ratio <= 0.0 || values.empty()) {
        return 0.0;
    }
    return values.back() * std::pow(continuation_ratio, static_cast<double>(n - values.size() + 1));
}

double WeightSequence::remaining(std::size_t n) const
{
    double tail = 0.0;
    if (continuation_ratio > 0.0 && !values.empty()) {
        const double r = continuation_ratio;
        if (n < values.size()) {
            tail = values.back() * r / (1.0 - r);
        } else {
            tail = at(n) / (1.0 - r);
        }
    }
    // Sum small terms first.
    for (std::size_t m = values.size(); m > n; --m) {
        tail += values[m - 1];
    }
    return tail;
}

void WeightSequence::validate() const
{
    if (values.empty()) {
        throw DomainError("weights: empty sequence");
    }
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!(values[n] > 0.0) || !std::isfinite(values[n])) {
            throw DomainError("weights: non-positive entry at " + std::to_string(n));
        }
        if (n > 0 && values[n] > values[n - 1]) {
            throw DomainError("weights: increasing at " + std::to_string(n));
        }
    }
    if (continuation_ratio < 0.0 || continuation_ratio >= 1.0) {
        throw DomainError("weights: continuation ratio outside [0,1)");
    }
}

WeightSequence geometric_weights(double r, std::size_t depth)
{
    if (!(r > 0.0 && r < 1.0)) {
        throw DomainError("geometric_weights: r must lie in (0,1)");
    }
    if (depth == 0) {
        throw DomainError("geometric_weights: depth must be positive");
    }
    WeightSequence w;
    w.values.resize(depth);
    double p = 1.0;
    for (std::size_t n = 0; n < depth; ++n) {
        p *= r;
        w.values[n] = p;
    }
    w.continuation_ratio = r;
    return w;
}

WeightSequence explicit_weights(std::vector<double> values)
{
    WeightSequence w{std::move(values), 0.0};
    w.validate();
    return w;
}

void GradedMetricConfig::validate() const
{
    weights.validate();
    if (truncation == 0) {
        throw ShapeError("metric config: truncation must be positive");
    }
    if (truncation > weights.size() && weights.continuation_ratio == 0.0) {
        throw ShapeError("metric config: truncation exceeds weight length");
    }
}

namespace {

void check_shape(const SeminormLadder& ladder, const GradedMetricConfig& cfg)
{
    if (ladder.size() != cfg.truncation) {
        throw ShapeError("ladder length " + std::to_string(ladder.size()) +
                         " does not match truncation " + std::to_string(cfg.truncation));
    }
}

}  // namespace

double standard_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg)
{
    check_shape(ladder, cfg);
    double sum = 0.0;
    for (std::size_t n = 0; n < ladder.size(); ++n) {
        sum += cfg.weights.at(n) * phi(ladder[n]);
    }
    if (cfg.hold_last_tail && !ladder.empty()) {
        sum += cfg.weights.remaining(ladder.size()) * phi(ladder.back());
    }
    return sum;
}

double sup_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg)
{
    check_shape(ladder, cfg);
    // Non-increasing weights make the held tail irrelevant here.
    double best = 0.0;
    for (std::size_t n = 0; n < ladder.size(); ++n) {
        best = std::max(best, cfg.weights.at(n) * phi(ladder[n]));
    }
    return best;
}

double graded_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg)
{
    return cfg.flavor == Flavor::Standard ? standard_metric(ladder, cfg) : sup_metric(ladder, cfg);
}

ComparabilityTriple comparability_check(const SeminormLadder& ladder, double r, std::size_t depth)
{
    if (ladder.size() < depth) {
        throw ShapeError("comparability_check: ladder shorter than depth");
    }
    const SeminormLadder head(ladder.begin(), ladder.begin() + static_cast<std::ptrdiff_t>(depth));
    GradedMetricConfig sq{Flavor::Standard, geometric_weights(r * r, depth), depth};
    GradedMetricConfig lin{Flavor::Standard, geometric_weights(r, depth), depth};
    GradedMetricConfig sup = lin;
    sup.flavor = Flavor::Supremum;
    return {standard_metric(head, sq), sup_metric(head, sup), standard_metric(head, lin)};
}

double piecewise_line_metric(double x, double y)
{
    const double t = std::abs(x - y);
    if (t <= 1.0) {
        return t;
    }
    if (t <= 2.0) {
        return 1.0 - (t - 1.0) / 2.0;
    }
    return 0.5 + (t - 2.0) / 3.0;
}

}  // namespace frechet
