#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "levyma/levy.hpp"
#include "levyma/rng.hpp"

// Small hand-rolled generators for the property tests. Every property draws
// from a fixed seed so failures reproduce.
namespace testgen {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed)
      : rng(levyma::make_stream(seed, 0, levyma::StreamDomain::generic)) {}

  double uniform(double a, double b) { return a + (b - a) * levyma::uniform_open(rng); }
  int integer(int a, int b) {
    return a + static_cast<int>(rng() % static_cast<std::uint64_t>(b - a + 1));
  }
  bool coin() { return (rng() & 1U) != 0; }

  // Strictly increasing times in (a, b) with sizes away from zero.
  levyma::JumpRecord record(levyma::Interval w, int max_jumps) {
    const int m = integer(0, max_jumps);
    std::vector<double> t;
    for (int i = 0; i < m; ++i) t.push_back(uniform(w.a, w.b));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<double> s;
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back((coin() ? 1.0 : -1.0) * uniform(0.1, 3.0));
    return levyma::JumpRecord(w, t, s);
  }
};

inline levyma::LevySpec gaussian_cp(double rate, std::uint64_t seed = 1) {
  levyma::LevySpec l;
  l.kind = levyma::CompoundPoisson{rate, levyma::GaussianLaw{1.0}};
  l.seed = seed;
  return l;
}

inline levyma::LevySpec stable(double beta, double cutoff, std::uint64_t seed = 1) {
  levyma::LevySpec l;
  l.kind = levyma::SymStable{beta, 1.0, cutoff, std::nullopt};
  l.seed = seed;
  return l;
}

}  // namespace testgen
