#pragma once

#include <vector>

#include "mpwsn/scenario.hpp"
#include "oracles/model_oracle.hpp"

namespace testing_support {

inline mpwsn::EnergyParamsd ref_energy() {
  mpwsn::EnergyParamsd ep;
  ep.tx_power = 1024e-6;
  ep.amp_coeff = 0.0;
  ep.rx_power = 819.2e-6;
  ep.path_loss_exp = 2.0;
  ep.tx_bit_time = 2e-5;
  ep.rx_bit_time = 2e-5;
  ep.sensing_power = 0.024;
  ep.packet_bits = 1000;
  return ep;
}

inline mpwsn::LinkParamsd ref_link() {
  mpwsn::LinkParamsd l;
  l.bit_rate = 50000;
  return l;
}

inline oracle::Radio radio_of(const mpwsn::EnergyParamsd& ep) {
  return {ep.tx_power,    ep.amp_coeff,     ep.rx_power,     ep.path_loss_exp,
          ep.tx_bit_time, ep.rx_bit_time,   ep.sensing_power, ep.packet_bits};
}

inline const std::vector<int>& five_path_hops() {
  static const std::vector<int> h = {9, 22, 5, 20, 7};
  return h;
}

inline std::vector<mpwsn::PathProfiled> profiles(const std::vector<int>& hops, double tau = 0.02,
                                                 double distance = 12.0) {
  std::vector<mpwsn::PathProfiled> out;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    out.push_back({static_cast<int>(i) + 1, hops[i], tau, distance});
  }
  return out;
}

/// Path-mode scenario with the reference radio and link constants.
inline mpwsn::ScenarioConfig lane_scenario(const std::vector<int>& hops, mpwsn::Packets packets) {
  mpwsn::ScenarioConfig cfg;
  mpwsn::PathSettings ps;
  ps.hops = hops;
  ps.distance = 12.0;
  cfg.paths = ps;
  cfg.energy = ref_energy();
  cfg.link = ref_link();
  cfg.packets = packets;
  cfg.initial_energy = 23760;
  cfg.idle_power = 409.6e-6;
  return cfg;
}

}  // namespace testing_support
