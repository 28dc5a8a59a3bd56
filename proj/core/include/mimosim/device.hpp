#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "mimosim/receiver.hpp"
#include "mimosim/transmitter.hpp"

namespace mimosim {

enum class Capability { Transmitter, Receiver, Transceiver };

// A named radio endpoint at a Cartesian position.  The capability decides
// which of the transmitter/receiver states are present.
struct Device {
  std::string name;
  Capability capability = Capability::Transceiver;
  Architecture architecture = Architecture::Digital;
  Eigen::Vector3d coordinate = Eigen::Vector3d::Zero();
  std::string marker = "xo";  // plot marker for show(): "x", "o", or "xo"
  std::optional<Transmitter> transmitter;
  std::optional<Receiver> receiver;
  std::optional<std::string> source_name;       // who transmits to this device
  std::optional<std::string> destination_name;  // who this device transmits to

  bool can_transmit() const { return transmitter.has_value(); }
  bool can_receive() const { return receiver.has_value(); }
};

std::string default_marker(Capability capability);

// Builds a device whose present states match the capability; the same array
// geometry is used for both sides of a transceiver.
Device make_device(std::string name, Capability capability, const ArrayGeometry& array,
                   Architecture architecture = Architecture::Digital, int rf_chains = 0);

}  // namespace mimosim
