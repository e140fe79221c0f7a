#pragma once

// Packet allocation over node-disjoint paths: single path, equal split, and
// the adaptive split that caps each path's energy-delay product at the
// equal-split average.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mpwsn/core/model.hpp"

namespace mpwsn {

using Packets = std::int64_t;

enum class Scheme { SinglePath = 1, EqualSplit = 2, Adaptive = 3 };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::SinglePath: return "single_path";
    case Scheme::EqualSplit: return "equal_split";
    case Scheme::Adaptive: return "adaptive";
  }
  return "unknown";
}

inline int scheme_number(Scheme s) { return static_cast<int>(s); }

/// Accepts 1/2/3 or the names returned by to_string.
inline Scheme parse_scheme(std::string_view text) {
  if (text == "1" || text == "single_path") return Scheme::SinglePath;
  if (text == "2" || text == "equal_split") return Scheme::EqualSplit;
  if (text == "3" || text == "adaptive") return Scheme::Adaptive;
  throw InvalidParameter("unknown scheme '" + std::string(text) + "'");
}

struct Allocation {
  int path_id{0};
  Packets packets{0};
};

template <typename Scalar = double>
struct Distribution {
  Scheme scheme{Scheme::EqualSplit};
  std::vector<Allocation> allocations;  // input path order
  Packets total{0};
  /// Adaptive only: real-valued per-path maxima from the quadratic.
  std::vector<Scalar> raw_capacity;
  /// Adaptive only: sum of raw capacities is below the demand.
  bool over_capacity{false};
  std::vector<std::string> warnings;

  Packets packets_for(int path_id) const {
    for (const auto& a : allocations) {
      if (a.path_id == path_id) return a.packets;
    }
    return 0;
  }

  Packets sum() const {
    Packets s = 0;
    for (const auto& a : allocations) s += a.packets;
    return s;
  }
};

using Distributiond = Distribution<double>;

/// A*x^2 + B*x = C, the equality form of the per-path EDP cap.
template <typename Scalar = double>
struct QuadraticCoefficients {
  Scalar a{0};
  Scalar b{0};
  Scalar c{0};
};

template <typename Scalar>
QuadraticCoefficients<Scalar> coefficients_for_path(const EnergyParams<Scalar>& ep,
                                                    const PathProfile<Scalar>& path,
                                                    Scalar edp_avg) {
  if (!(edp_avg >= Scalar(0))) throw InvalidParameter("EDP budget must be non-negative");
  const Scalar hops = static_cast<Scalar>(path.hops);
  const Scalar nodes = hops + Scalar(1);
  const Scalar per_bit = tx_energy_per_bit(ep, path.hop_distance()) + rx_energy_per_bit(ep);
  const Scalar delay_factor = path.tau * hops;
  return {per_bit * ep.packet_bits * nodes * delay_factor,
          ep.sensing_power * nodes * delay_factor, edp_avg};
}

/// Non-negative root of A x^2 + B x = C. Uses 2C / (B + sqrt(B^2 + 4AC)),
/// which does not cancel when B^2 >> 4AC.
template <typename Scalar>
Scalar solve_max_packets(const QuadraticCoefficients<Scalar>& q) {
  if (!(q.a > Scalar(0))) {
    throw DegeneratePathError("quadratic coefficient A must be positive (zero-delay or "
                              "zero-energy path)");
  }
  if (q.b < Scalar(0) || q.c < Scalar(0)) {
    throw InvalidParameter("quadratic coefficients B and C must be non-negative");
  }
  if (q.c == Scalar(0)) return Scalar(0);
  using std::sqrt;
  return Scalar(2) * q.c / (q.b + sqrt(q.b * q.b + Scalar(4) * q.a * q.c));
}

namespace detail {

// Hamilton apportionment: floor each share, hand the leftover units to the
// largest fractional parts. Fractions are compared on a 1e-9 grid so that
// rounding noise does not beat the lowest-path_id tiebreak.
inline std::vector<Packets> largest_remainder(const std::vector<double>& shares,
                                              const std::vector<int>& ids, Packets total) {
  const std::size_t n = shares.size();
  std::vector<Packets> out(n, 0);
  std::vector<std::int64_t> frac_key(n, 0);
  Packets assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fl = std::floor(shares[i]);
    out[i] = std::clamp<Packets>(static_cast<Packets>(fl), 0, total);
    frac_key[i] = std::llround((shares[i] - fl) * 1e9);
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (frac_key[x] != frac_key[y]) return frac_key[x] > frac_key[y];
    return ids[x] < ids[y];
  });
  Packets left = total - assigned;
  while (left > 0 && n > 0) {
    for (std::size_t idx : order) {
      if (left == 0) break;
      ++out[idx];
      --left;
    }
  }
  // Over-assignment can only come from float noise on exact integers.
  for (auto it = order.rbegin(); left < 0 && it != order.rend(); ++it) {
    if (out[*it] > 0) {
      --out[*it];
      ++left;
    }
  }
  return out;
}

}  // namespace detail

struct RawShare {
  int path_id{0};
  double capacity{0};
};

/// Scales raw capacities to sum to `total` and rounds to whole packets.
template <typename Scalar = double>
Distribution<Scalar> normalize_distribution(std::span<const RawShare> raw, Packets total) {
  if (total < 0) throw InvalidParameter("packet total must be non-negative");
  CompensatedSum<double> acc;
  for (const auto& r : raw) {
    if (!(r.capacity >= 0.0)) throw InvalidParameter("raw capacity must be non-negative");
    acc += r.capacity;
  }
  const double sum = acc.value();
  Distribution<Scalar> dist;
  dist.scheme = Scheme::Adaptive;
  dist.total = total;
  std::vector<double> shares(raw.size(), 0.0);
  std::vector<int> ids(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ids[i] = raw[i].path_id;
    dist.raw_capacity.push_back(static_cast<Scalar>(raw[i].capacity));
  }
  if (sum <= 0.0) {
    if (total > 0) throw NoCapacityError("no path has capacity for the requested packets");
  } else {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      shares[i] = raw[i].capacity / sum * static_cast<double>(total);
    }
  }
  const auto counts = detail::largest_remainder(shares, ids, total);
  for (std::size_t i = 0; i < raw.size(); ++i) dist.allocations.push_back({ids[i], counts[i]});
  if (sum < static_cast<double>(total)) {
    dist.over_capacity = true;
    std::ostringstream msg;
    msg << "aggregate path capacity " << sum << " is below the demand of " << total
        << " packets; allocation scaled up proportionally";
    dist.warnings.push_back(msg.str());
  }
  return dist;
}

template <typename Scalar = double>
Distribution<Scalar> normalize_distribution(const std::vector<RawShare>& raw, Packets total) {
  return normalize_distribution<Scalar>(std::span<const RawShare>(raw), total);
}

template <typename Scalar>
Distribution<Scalar> allocate(Scheme scheme, const EnergyParams<Scalar>& ep,
                              std::span<const PathProfile<Scalar>> paths, Packets total) {
  if (paths.empty()) throw InvalidParameter("at least one path is required");
  if (total < 0) throw InvalidParameter("packet total must be non-negative");

  std::vector<int> ids;
  for (const auto& p : paths) ids.push_back(p.path_id);

  switch (scheme) {
    case Scheme::SinglePath: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < paths.size(); ++i) {
        const auto& p = paths[i];
        const auto& b = paths[best];
        if (p.hops < b.hops || (p.hops == b.hops && p.path_id < b.path_id)) best = i;
      }
      Distribution<Scalar> dist;
      dist.scheme = scheme;
      dist.total = total;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        dist.allocations.push_back({ids[i], i == best ? total : Packets{0}});
      }
      return dist;
    }
    case Scheme::EqualSplit: {
      const std::vector<double> shares(
          paths.size(), static_cast<double>(total) / static_cast<double>(paths.size()));
      const auto counts = detail::largest_remainder(shares, ids, total);
      Distribution<Scalar> dist;
      dist.scheme = scheme;
      dist.total = total;
      for (std::size_t i = 0; i < paths.size(); ++i) dist.allocations.push_back({ids[i], counts[i]});
      return dist;
    }
    case Scheme::Adaptive: {
      const Scalar budget = average_edp(ep, paths, static_cast<Scalar>(total));
      std::vector<RawShare> raw;
      for (const auto& p : paths) {
        raw.push_back({p.path_id,
                       static_cast<double>(solve_max_packets(coefficients_for_path(ep, p, budget)))});
      }
      auto dist = normalize_distribution<Scalar>(std::span<const RawShare>(raw), total);
      dist.scheme = scheme;
      return dist;
    }
  }
  throw InvalidParameter("unknown scheme");
}

template <typename Scalar>
Distribution<Scalar> allocate(Scheme scheme, const EnergyParams<Scalar>& ep,
                              const std::vector<PathProfile<Scalar>>& paths, Packets total) {
  return allocate(scheme, ep, std::span<const PathProfile<Scalar>>(paths), total);
}

/// Relative slack allowed when comparing a path's EDP against the budget.
inline constexpr double kEdpBoundRelTol = 1e-9;

template <typename Scalar = double>
struct EdpPathCheck {
  int path_id{0};
  Packets packets{0};
  Scalar edp{0};
  bool pass{false};
};

template <typename Scalar = double>
struct EdpBoundReport {
  Scalar edp_avg{0};
  std::vector<EdpPathCheck<Scalar>> paths;
  bool pass{true};
  bool infeasible{false};
  std::vector<std::string> warnings;
};

template <typename Scalar>
EdpBoundReport<Scalar> verify_edp_bound(const EnergyParams<Scalar>& ep,
                                        std::span<const PathProfile<Scalar>> paths,
                                        const Distribution<Scalar>& dist) {
  EdpBoundReport<Scalar> report;
  report.edp_avg = average_edp(ep, paths, static_cast<Scalar>(dist.total));
  const auto set = PathSet<Scalar>::from(paths);
  typename PathSet<Scalar>::Array loads(set.size());
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    loads(i) = static_cast<Scalar>(dist.packets_for(set.ids(i)));
  }
  const auto edp = path_edp(ep, set, loads);
  const Scalar limit = report.edp_avg * (Scalar(1) + Scalar(kEdpBoundRelTol));
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    EdpPathCheck<Scalar> c{set.ids(i), dist.packets_for(set.ids(i)), edp(i), edp(i) <= limit};
    report.pass = report.pass && c.pass;
    report.paths.push_back(c);
  }
  if (dist.over_capacity) {
    report.infeasible = true;
    report.warnings.emplace_back(
        "demand exceeds the summed EDP-bounded capacity; some paths may exceed the budget");
  }
  return report;
}

template <typename Scalar>
EdpBoundReport<Scalar> verify_edp_bound(const EnergyParams<Scalar>& ep,
                                        const std::vector<PathProfile<Scalar>>& paths,
                                        const Distribution<Scalar>& dist) {
  return verify_edp_bound(ep, std::span<const PathProfile<Scalar>>(paths), dist);
}

}  // namespace mpwsn
