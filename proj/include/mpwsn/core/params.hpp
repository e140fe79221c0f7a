#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mpwsn/errors.hpp"

namespace mpwsn {

/// Radio and electronics constants of the first-order energy model.
///
/// Powers are in watts, bit times in seconds, packet size in bits. The
/// amplifier coefficient multiplies d^k where d is the hop distance in metres.
template <typename Scalar = double>
struct EnergyParams {
  Scalar tx_power{0};          ///< e_t, transmitter electronics
  Scalar amp_coeff{0};         ///< e_d, amplifier (per m^k)
  Scalar rx_power{0};          ///< e_r, receiver electronics
  Scalar path_loss_exp{2};     ///< k
  Scalar tx_bit_time{0};       ///< T_1b
  Scalar rx_bit_time{0};       ///< T_2b
  Scalar sensing_power{0};     ///< K_r, per node
  Scalar packet_bits{1000};    ///< S

  /// Power drawn while transmitting over distance d (e_t + e_d d^k).
  Scalar transmit_power_at(Scalar d) const {
    using std::pow;
    return tx_power + amp_coeff * pow(d, path_loss_exp);
  }

  /// Throws InvalidParameter on a hard violation. Returns soft warnings
  /// (path-loss exponent outside [2, 4]).
  std::vector<std::string> validate() const {
    const auto neg = [](Scalar v) { return !(v >= Scalar(0)); };
    if (neg(tx_power) || neg(amp_coeff) || neg(rx_power) || neg(path_loss_exp) ||
        neg(tx_bit_time) || neg(rx_bit_time) || neg(sensing_power)) {
      throw InvalidParameter("energy parameters must be non-negative");
    }
    if (!(packet_bits > Scalar(0))) {
      throw InvalidParameter("packet size must be positive");
    }
    std::vector<std::string> warnings;
    if (path_loss_exp < Scalar(2) || path_loss_exp > Scalar(4)) {
      warnings.emplace_back("path-loss exponent outside the usual range [2, 4]");
    }
    return warnings;
  }
};

/// Per-hop link characteristics: speed (bit/s), propagation delay and mean
/// queueing delay per packet (s).
template <typename Scalar = double>
struct LinkParams {
  Scalar bit_rate{1};
  Scalar link_delay{0};
  Scalar queue_delay{0};

  void validate() const {
    if (!(bit_rate > Scalar(0))) throw InvalidParameter("link bit rate must be positive");
    if (!(link_delay >= Scalar(0)) || !(queue_delay >= Scalar(0))) {
      throw InvalidParameter("link and queueing delays must be non-negative");
    }
  }
};

/// One discovered path as seen by the optimizer.
template <typename Scalar = double>
struct PathProfile {
  int path_id{0};
  int hops{1};          ///< H_j
  Scalar tau{0};        ///< per-packet per-hop delay
  Scalar distance{0};   ///< straight-line source-sink distance T

  /// Average inter-hop distance T / H.
  Scalar hop_distance() const { return distance / static_cast<Scalar>(hops); }

  /// `radio_range` <= 0 disables the geometric check.
  void validate(Scalar radio_range = Scalar(0)) const {
    if (hops < 1) throw InvalidParameter("path hop count must be at least 1");
    if (!(tau > Scalar(0))) throw InvalidParameter("per-hop delay must be positive");
    if (!(distance > Scalar(0))) throw InvalidParameter("source-sink distance must be positive");
    if (radio_range > Scalar(0) && hop_distance() > radio_range) {
      throw InvalidParameter("average hop distance exceeds the radio range");
    }
  }
};

using EnergyParamsd = EnergyParams<double>;
using LinkParamsd = LinkParams<double>;
using PathProfiled = PathProfile<double>;

}  // namespace mpwsn
