#include "ud/quadratic.hpp"

#include <memory>
#include <utility>

#include "ud/error.hpp"

namespace ud {

Problem make_quadratic_problem(std::size_t dimension, double mu, double L,
                               Vec center) {
  if (dimension < 1) throw Error(ErrorCode::CONFIG, "quadratic: dimension >= 1");
  if (!(mu > 0.0) || !(L > 0.0) || mu > L) {
    throw Error(ErrorCode::CONFIG, "quadratic: need 0 < mu <= L");
  }
  if (dimension == 1 && mu != L) {
    throw Error(ErrorCode::CONFIG,
                "quadratic: a single diagonal entry cannot attain both mu and L");
  }
  require_dimension(center, dimension, "quadratic: center dimension");

  auto diag = std::make_shared<Vec>(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    (*diag)[i] = dimension == 1
                     ? L
                     : mu + (L - mu) * static_cast<double>(i) /
                               static_cast<double>(dimension - 1);
  }
  auto c = std::make_shared<Vec>(std::move(center));

  Problem p;
  p.name = "quadratic";
  p.dimension = dimension;
  p.value = [diag, c](const Vec& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = x[i] - (*c)[i];
      acc += (*diag)[i] * v * v;
    }
    return 0.5 * acc;
  };
  p.gradient = [diag, c](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = (*diag)[i] * (x[i] - (*c)[i]);
    }
    return g;
  };
  p.known_minimizers = singleton(*c);
  p.known_fstar = 0.0;
  p.known_smoothness_L = L;
  return p;
}

}  // namespace ud
