#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "boqc/security.hpp"

namespace boqc::security {

ChiSquare delta_uniformity(const DeltaHistogram& h) {
  ChiSquare out;
  out.dof = static_cast<int>(h.visits.size()) - 1;
  std::uint64_t total = 0;
  for (auto c : h.visits) total += c;
  if (total == 0 || out.dof < 1) return out;
  const double expected = static_cast<double>(total) / static_cast<double>(h.visits.size());
  for (auto c : h.visits) {
    const double diff = static_cast<double>(c) - expected;
    out.statistic += diff * diff / expected;
  }
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

BlindnessReport check_blindness(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt) {
  BlindnessReport rep;
  rep.variant = v;
  rep.bob = bob.name;
  rep.options = opt;
  rep.real = real_view(s, v, bob, opt);
  rep.ideal = ideal_view(s, v, bob, opt);
  rep.distance = compare_views(rep.real, rep.ideal);

  bool p_ok = true;
  for (const auto& [node, h] : rep.real.delta) {
    rep.chi_square[node] = delta_uniformity(h);
    p_ok = p_ok && rep.chi_square[node].p_value >= kMinPValue;
    const auto [lo, hi] = std::minmax_element(h.visits.begin(), h.visits.end());
    rep.delta_uniform = rep.delta_uniform && *lo == *hi;
  }
  for (const auto& [node, m] : rep.real.received) {
    const double w = m.trace().real();
    const qsim::Matrix half = qsim::Matrix::Identity(2, 2) * 0.5;
    rep.max_pad_deviation = std::max(rep.max_pad_deviation, (m / w - half).cwiseAbs().maxCoeff());
  }
  if (opt.exhaustive) {
    rep.passed = rep.distance.classical_tvd <= kBlindnessTol && rep.distance.quantum_trace_distance <= kBlindnessTol;
  } else {
    rep.passed = p_ok;
  }
  return rep;
}

}  // namespace boqc::security
