#include "mudsim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mudsim {

void BoxBounds::validate() const {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("bounds: dimension mismatch");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw std::invalid_argument("bounds: need finite lower < upper in every dimension");
    }
  }
}

void BoxBounds::clamp(std::vector<double>& x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

std::vector<double> BoxBounds::center() const {
  std::vector<double> c(size());
  for (std::size_t i = 0; i < size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
  return c;
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& start, const BoxBounds& bounds,
                          const SimplexOptions& options) {
  bounds.validate();
  const std::size_t n = bounds.size();
  if (start.size() != n) throw std::invalid_argument("nelder_mead: start dimension mismatch");

  // Adaptive coefficients; behave like the classic set for small n and stay
  // effective in higher dimensions.
  const double nd = static_cast<double>(n);
  const double coef_reflect = 1.0;
  const double coef_expand = 1.0 + 2.0 / nd;
  const double coef_contract = 0.75 - 0.5 / nd;
  const double coef_shrink = 1.0 - 1.0 / nd;

  SimplexResult result;
  double best_seen = std::numeric_limits<double>::infinity();

  auto evaluate = [&](std::vector<double> x) {
    bounds.clamp(x);
    const double f = objective(x);
    ++result.evaluations;
    if (f < best_seen) {
      best_seen = f;
      result.improvements.emplace_back(result.evaluations, f);
    }
    return Vertex{std::move(x), f};
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  {
    std::vector<double> x0 = start;
    bounds.clamp(x0);
    simplex.push_back(evaluate(x0));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> xi = x0;
      double step = options.init_step_rel * bounds.range(i);
      if (xi[i] + step > bounds.upper[i]) step = -step;
      xi[i] += step;
      simplex.push_back(evaluate(xi));
    }
  }

  auto order = [&]() {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  order();
  while (result.evaluations < options.max_evals) {
    // Convergence: objective spread and simplex extent both collapsed.
    const double f_spread = simplex.back().f - simplex.front().f;
    double x_spread = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = simplex[0].x[i], hi = simplex[0].x[i];
      for (const auto& v : simplex) {
        lo = std::min(lo, v.x[i]);
        hi = std::max(hi, v.x[i]);
      }
      x_spread = std::max(x_spread, (hi - lo) / bounds.range(i));
    }
    if (f_spread <= options.f_tol_abs && x_spread <= options.x_tol_rel) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
    }
    for (std::size_t i = 0; i < n; ++i) centroid[i] /= nd;

    auto along = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = centroid[i] + coef * (centroid[i] - simplex.back().x[i]);
      }
      return x;
    };

    const Vertex reflected = evaluate(along(coef_reflect));
    if (reflected.f < simplex.front().f) {
      const Vertex expanded = evaluate(along(coef_reflect * coef_expand));
      simplex.back() = expanded.f < reflected.f ? expanded : reflected;
    } else if (reflected.f < simplex[n - 1].f) {
      simplex.back() = reflected;
    } else {
      const bool outside = reflected.f < simplex.back().f;
      const Vertex contracted =
          evaluate(along(outside ? coef_reflect * coef_contract : -coef_contract));
      if (contracted.f < std::min(reflected.f, simplex.back().f)) {
        simplex.back() = contracted;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t v = 1; v <= n; ++v) {
          std::vector<double> x(n);
          for (std::size_t i = 0; i < n; ++i) {
            x[i] = simplex[0].x[i] + coef_shrink * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v] = evaluate(std::move(x));
          if (result.evaluations >= options.max_evals) break;
        }
      }
    }
    order();
  }

  order();
  result.x = simplex.front().x;
  result.f = simplex.front().f;
  return result;
}

namespace {

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& gen, std::size_t bound) {
  return static_cast<std::size_t>(gen() % bound);
}

}  // namespace

std::vector<std::vector<double>> latin_hypercube(const BoxBounds& bounds, int count,
                                                 std::uint64_t seed,
                                                 const std::vector<bool>& log_scale) {
  bounds.validate();
  if (count <= 0) return {};
  const std::size_t n = bounds.size();
  if (log_scale.size() != n) throw std::invalid_argument("latin_hypercube: mask size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (log_scale[i] && !(bounds.lower[i] > 0.0)) {
      throw std::invalid_argument("latin_hypercube: log dimension needs positive bounds");
    }
  }

  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> samples(count, std::vector<double>(n));
  std::vector<std::size_t> strata(count);
  for (std::size_t dim = 0; dim < n; ++dim) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    for (std::size_t i = strata.size(); i > 1; --i) {
      std::swap(strata[i - 1], strata[uniform_index(gen, i)]);
    }
    for (int s = 0; s < count; ++s) {
      const double u = (static_cast<double>(strata[s]) + unit_uniform(gen)) /
                       static_cast<double>(count);
      if (log_scale[dim]) {
        const double lo = std::log(bounds.lower[dim]);
        const double hi = std::log(bounds.upper[dim]);
        samples[s][dim] = std::exp(lo + u * (hi - lo));
      } else {
        samples[s][dim] = bounds.lower[dim] + u * bounds.range(dim);
      }
    }
  }
  return samples;
}

}  // namespace mudsim
