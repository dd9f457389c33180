#include "largeness/common.hpp"

#include <cmath>
#include <stdexcept>

#include "largeness/errors.hpp"

namespace largeness {

const char* axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::Diagonal: return "diagonal";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Triangle: return "triangle";
    case Axiom::NonNegative: return "non-negative";
    case Axiom::Finite: return "finite";
  }
  return "unknown";
}

AxiomViolation::AxiomViolation(Axiom axiom, std::array<std::uint64_t, 3> witness,
                               double gap)
    : Error(std::string("metric axiom violated (") + axiom_name(axiom) + ") at (" +
            std::to_string(witness[0]) + "," + std::to_string(witness[1]) + "," +
            std::to_string(witness[2]) + "), gap " + std::to_string(gap)),
      axiom_(axiom),
      witness_(witness),
      gap_(gap) {}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientData("line fit needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace largeness
