#pragma once

// Closed-form delay, energy and energy-delay-product model of a multipath
// transfer. Every function is pure; the scalar forms evaluate one path, the
// PathSet forms evaluate all paths of a route set at once.

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <vector>

#include "mpwsn/core/compensated_sum.hpp"
#include "mpwsn/core/params.hpp"

namespace mpwsn {

/// Time for one packet to cross one hop, queueing included.
template <typename Scalar>
Scalar per_hop_delay(Scalar packet_bits, const LinkParams<Scalar>& link) {
  return packet_bits / link.bit_rate + link.link_delay + link.queue_delay;
}

/// Energy to transmit one bit over distance d.
template <typename Scalar>
Scalar tx_energy_per_bit(const EnergyParams<Scalar>& ep, Scalar d) {
  return ep.transmit_power_at(d) * ep.tx_bit_time;
}

/// Energy to receive one bit.
template <typename Scalar>
Scalar rx_energy_per_bit(const EnergyParams<Scalar>& ep) {
  return ep.rx_power * ep.rx_bit_time;
}

namespace detail {

// Hop counts are real-valued here so the averaged path of the equal-split
// budget can share the expression with real paths.
template <typename Scalar>
Scalar energy_at(const EnergyParams<Scalar>& ep, Scalar hops, Scalar distance, Scalar load) {
  const Scalar nodes = hops + Scalar(1);
  const Scalar per_bit = tx_energy_per_bit(ep, distance / hops) + rx_energy_per_bit(ep);
  return per_bit * load * ep.packet_bits * nodes + ep.sensing_power * nodes;
}

template <typename Scalar>
Scalar delay_at(Scalar load, Scalar tau, Scalar hops) {
  return load * tau * hops;
}

}  // namespace detail

/// Time to push `load` packets one after another across the path.
template <typename Scalar>
Scalar path_delay(Scalar load, const PathProfile<Scalar>& path) {
  return detail::delay_at(load, path.tau, static_cast<Scalar>(path.hops));
}

/// Energy spent by all H+1 nodes of the path: radio traffic plus the sensing
/// term K_r (H+1). Affine in `load`.
template <typename Scalar>
Scalar path_energy(const EnergyParams<Scalar>& ep, const PathProfile<Scalar>& path, Scalar load) {
  return detail::energy_at(ep, static_cast<Scalar>(path.hops), path.distance, load);
}

/// Radio-traffic part of path_energy only (no sensing term).
template <typename Scalar>
Scalar path_traffic_energy(const EnergyParams<Scalar>& ep, const PathProfile<Scalar>& path,
                           Scalar load) {
  const Scalar nodes = static_cast<Scalar>(path.hops) + Scalar(1);
  const Scalar per_bit = tx_energy_per_bit(ep, path.hop_distance()) + rx_energy_per_bit(ep);
  return per_bit * load * ep.packet_bits * nodes;
}

template <typename Scalar>
Scalar path_edp(const EnergyParams<Scalar>& ep, const PathProfile<Scalar>& path, Scalar load) {
  return path_energy(ep, path, load) * path_delay(load, path);
}

/// Mean hop count, per-hop delay and distance of a route set.
template <typename Scalar>
struct PathAverages {
  Scalar hops{0};
  Scalar tau{0};
  Scalar distance{0};
};

template <typename Scalar>
PathAverages<Scalar> path_averages(std::span<const PathProfile<Scalar>> paths) {
  if (paths.empty()) throw InvalidParameter("path set is empty");
  CompensatedSum<Scalar> h, t, d;
  for (const auto& p : paths) {
    h += static_cast<Scalar>(p.hops);
    t += p.tau;
    d += p.distance;
  }
  const auto n = static_cast<Scalar>(paths.size());
  return {h.value() / n, t.value() / n, d.value() / n};
}

/// EDP of the equal split: one virtual path with the mean hop count and mean
/// per-hop delay carrying D/n packets (real-valued, never floored).
template <typename Scalar>
Scalar average_edp(const EnergyParams<Scalar>& ep, std::span<const PathProfile<Scalar>> paths,
                   Scalar total_packets) {
  const auto avg = path_averages(paths);
  const Scalar load = total_packets / static_cast<Scalar>(paths.size());
  return detail::energy_at(ep, avg.hops, avg.distance, load) *
         detail::delay_at(load, avg.tau, avg.hops);
}

template <typename Scalar>
Scalar average_edp(const EnergyParams<Scalar>& ep, const std::vector<PathProfile<Scalar>>& paths,
                   Scalar total_packets) {
  return average_edp(ep, std::span<const PathProfile<Scalar>>(paths), total_packets);
}

/// Column-wise view of a route set for evaluating every path at once.
template <typename Scalar = double>
struct PathSet {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Eigen::ArrayXi ids;
  Array hops;
  Array tau;
  Array distance;

  static PathSet from(std::span<const PathProfile<Scalar>> paths) {
    PathSet set;
    const auto n = static_cast<Eigen::Index>(paths.size());
    set.ids.resize(n);
    set.hops.resize(n);
    set.tau.resize(n);
    set.distance.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& p = paths[static_cast<std::size_t>(i)];
      set.ids(i) = p.path_id;
      set.hops(i) = static_cast<Scalar>(p.hops);
      set.tau(i) = p.tau;
      set.distance(i) = p.distance;
    }
    return set;
  }

  Eigen::Index size() const { return hops.size(); }
};

template <typename Scalar>
typename PathSet<Scalar>::Array path_delay(const PathSet<Scalar>& set,
                                           const typename PathSet<Scalar>::Array& loads) {
  return loads * set.tau * set.hops;
}

template <typename Scalar>
typename PathSet<Scalar>::Array path_energy(const EnergyParams<Scalar>& ep,
                                            const PathSet<Scalar>& set,
                                            const typename PathSet<Scalar>::Array& loads) {
  using Array = typename PathSet<Scalar>::Array;
  const Array nodes = set.hops + Scalar(1);
  const Array hop_dist = set.distance / set.hops;
  const Array per_bit = (ep.tx_power + ep.amp_coeff * hop_dist.pow(ep.path_loss_exp)) *
                            ep.tx_bit_time +
                        ep.rx_power * ep.rx_bit_time;
  return per_bit * loads * ep.packet_bits * nodes + ep.sensing_power * nodes;
}

template <typename Scalar>
typename PathSet<Scalar>::Array path_edp(const EnergyParams<Scalar>& ep,
                                         const PathSet<Scalar>& set,
                                         const typename PathSet<Scalar>::Array& loads) {
  return path_energy(ep, set, loads) * path_delay(set, loads);
}

}  // namespace mpwsn
