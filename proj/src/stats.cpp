#include "levyma/stats.hpp"

#include <cmath>

#include "levyma/errors.hpp"

namespace levyma {

std::vector<double> increments(const std::vector<double>& values, int k) {
  if (k < 1) throw PreconditionError("increment order k must be >= 1");
  if (values.size() < 2) throw PreconditionError("a path needs at least two grid values");
  const auto n = static_cast<std::int64_t>(values.size()) - 1;
  if (k > n) throw PreconditionError("increment order k exceeds n");
  // Repeated first differences: exact on constants, and the accumulator below
  // performs the same subtractions in the same order.
  std::vector<double> d = values;
  for (int level = 0; level < k; ++level) {
    for (std::size_t i = d.size() - 1; i > 0; --i) d[i] -= d[i - 1];
    d.erase(d.begin());
  }
  return d;
}

std::vector<double> increments(const SamplePath& path, int k) { return increments(path.values, k); }

PowerVariationAccumulator::PowerVariationAccumulator(int k, double p)
    : k_(k), p_(p), last_(static_cast<std::size_t>(k), 0.0) {
  if (k < 1) throw PreconditionError("increment order k must be >= 1");
  if (!(p > 0.0)) throw PreconditionError("power variation needs p > 0");
}

void PowerVariationAccumulator::push(double x) {
  double cur = x;
  bool complete = true;
  for (int level = 0; level < k_; ++level) {
    auto& prev = last_[static_cast<std::size_t>(level)];
    if (seen_ <= level) {
      prev = cur;
      complete = false;
      break;
    }
    const double d = cur - prev;
    prev = cur;
    cur = d;
  }
  if (complete) {
    const double term = std::pow(std::abs(cur), p_);
    sum_ += term;
    if (term > max_term_) max_term_ = term;
    ++count_;
  }
  ++seen_;
}

PowerVariationReport make_report(double V, std::int64_t n, double p, int k, double alpha) {
  if (n < 2) throw PreconditionError("the log scaling needs n >= 2");
  PowerVariationReport r;
  r.p = p;
  r.k = k;
  r.n = n;
  r.V = V;
  r.alpha_used = alpha;
  r.scaled_r1 = std::pow(static_cast<double>(n), alpha * p) * V;
  r.scaled_r2 = r.scaled_r1 / std::log(static_cast<double>(n));
  return r;
}

PowerVariationReport power_variation(const std::vector<double>& values, double p, int k,
                                     double alpha) {
  if (!(p > 0.0)) throw PreconditionError("power variation needs p > 0");
  const auto inc = increments(values, k);
  double V = 0.0;
  for (double d : inc) V += std::pow(std::abs(d), p);
  return make_report(V, static_cast<std::int64_t>(values.size()) - 1, p, k, alpha);
}

PowerVariationReport power_variation(const SamplePath& path, double p, int k, double alpha) {
  return power_variation(path.values, p, k, alpha);
}

}  // namespace levyma
