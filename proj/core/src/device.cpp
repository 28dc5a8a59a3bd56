#include "mimosim/device.hpp"

#include <utility>

namespace mimosim {

std::string default_marker(Capability capability) {
  switch (capability) {
    case Capability::Transmitter:
      return "x";
    case Capability::Receiver:
      return "o";
    case Capability::Transceiver:
      return "xo";
  }
  return "xo";
}

Device make_device(std::string name, Capability capability, const ArrayGeometry& array,
                   Architecture architecture, int rf_chains) {
  Device device;
  device.name = std::move(name);
  device.capability = capability;
  device.architecture = architecture;
  device.marker = default_marker(capability);
  if (capability != Capability::Receiver)
    device.transmitter.emplace(array, architecture, rf_chains);
  if (capability != Capability::Transmitter)
    device.receiver.emplace(array, architecture, rf_chains);
  return device;
}

}  // namespace mimosim
