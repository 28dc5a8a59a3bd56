#include "mimosim/receiver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace mimosim {

namespace {

std::map<std::string, ReceiveStrategy>& strategy_registry() {
  static std::map<std::string, ReceiveStrategy> registry = {
      {"eigen", configure_eigen_combiner},
      {"mmse",
       [](Receiver& rx, const ChannelStateInformation& csi) {
         configure_mmse_combiner(rx, csi, false);
       }},
      {"mmse-int",
       [](Receiver& rx, const ChannelStateInformation& csi) {
         configure_mmse_combiner(rx, csi, true);
       }},
  };
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

// Desired channel as the combiner sees it: cascaded with the transmit
// precoder when the CSI carries one.
CMatrix combiner_target_channel(const ChannelStateInformation& csi) {
  const CMatrix& h = csi.desired.effective_channel;
  if (h.size() == 0) throw std::logic_error("combiner strategy needs a realized channel");
  if (csi.desired.precoder.size() == 0) return h;
  return h * csi.desired.precoder;
}

CMatrix eigen_combiner_target(const ChannelStateInformation& csi, int ns) {
  CMatrix h = combiner_target_channel(csi);
  if (ns > std::min(h.rows(), h.cols()))
    throw std::invalid_argument("num_streams exceeds channel rank bound");
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(ns);
}

// A = sqrt(Ptx) * G * H * F for one CSI entry; empty when no precoder is set.
CMatrix signal_matrix(const CsiEntry& entry) {
  if (entry.precoder.size() == 0) return CMatrix();
  return std::sqrt(entry.transmit_energy) * (entry.effective_channel * entry.precoder);
}

// Observation covariance at the antennas: desired + optional interference
// + noise floor.
CMatrix observation_covariance(const ChannelStateInformation& csi, const CMatrix& a,
                               bool include_interference) {
  const Eigen::Index nr = a.rows();
  CMatrix r = a * csi.desired.symbol_covariance * a.adjoint();
  if (include_interference) {
    for (const CsiEntry& entry : csi.interferers) {
      CMatrix ak = signal_matrix(entry);
      if (ak.size() == 0) continue;
      r += ak * entry.symbol_covariance * ak.adjoint();
    }
  }
  r += csi.noise_variance * CMatrix::Identity(nr, nr);
  return r;
}

// Entrywise phase extraction replicated cyclically across the analog columns.
CMatrix phase_extracted(const CMatrix& target, int columns) {
  CMatrix rf(target.rows(), columns);
  for (int l = 0; l < columns; ++l) {
    for (Eigen::Index i = 0; i < target.rows(); ++i) {
      double phase = std::arg(target(i, l % target.cols()));
      rf(i, l) = Complex(std::cos(phase), std::sin(phase));
    }
  }
  return rf;
}

}  // namespace

Receiver::Receiver(ArrayGeometry array, Architecture architecture, int rf_chains)
    : array_(std::move(array)), architecture_(architecture), rf_chains_(rf_chains) {
  if (architecture_ == Architecture::Hybrid) {
    if (rf_chains_ <= 0) throw std::invalid_argument("hybrid receiver needs rf_chains > 0");
    if (rf_chains_ > array_.num_elements())
      throw std::invalid_argument("rf_chains exceeds antenna count");
  } else {
    rf_chains_ = array_.num_elements();
  }
}

void Receiver::set_num_streams(int ns) {
  if (ns <= 0) throw std::invalid_argument("num_streams must be > 0");
  if (architecture_ == Architecture::Hybrid && ns > rf_chains_)
    throw std::invalid_argument("num_streams exceeds rf_chains");
  if (ns > array_.num_elements()) throw std::invalid_argument("num_streams exceeds antennas");
  num_streams_ = ns;
  combiner_.resize(0, 0);
  baseband_combiner_.resize(0, 0);
}

void Receiver::set_noise_variance(double sigma2) {
  if (sigma2 <= 0.0) throw std::invalid_argument("noise variance must be > 0");
  noise_variance_ = sigma2;
}

void Receiver::set_noise_psd_dbm_hz(double psd_dbm_hz) {
  noise_variance_ = noise_energy_from_psd_dbm_hz(psd_dbm_hz);
}

void Receiver::set_combiner(const CMatrix& w) {
  if (architecture_ != Architecture::Digital)
    throw std::logic_error("set_combiner applies to the digital architecture");
  if (w.rows() != array_.num_elements() || w.cols() != num_streams_)
    throw std::invalid_argument("combiner must be num_antennas x num_streams");
  combiner_ = w;
}

void Receiver::set_analog_combiner(const CMatrix& w) {
  if (architecture_ != Architecture::Hybrid)
    throw std::logic_error("set_analog_combiner applies to the hybrid architecture");
  if (w.rows() != array_.num_elements() || w.cols() != rf_chains_)
    throw std::invalid_argument("analog combiner must be num_antennas x rf_chains");
  analog_combiner_ = quantize_analog(w, constraints_);
}

void Receiver::set_baseband_combiner(const CMatrix& w) {
  if (architecture_ != Architecture::Hybrid)
    throw std::logic_error("set_baseband_combiner applies to the hybrid architecture");
  if (w.rows() != rf_chains_ || w.cols() != num_streams_)
    throw std::invalid_argument("baseband combiner must be rf_chains x num_streams");
  baseband_combiner_ = w;
}

CMatrix Receiver::effective_combiner() const {
  if (architecture_ == Architecture::Digital) return combiner_;
  if (analog_combiner_.size() == 0 || baseband_combiner_.size() == 0) return CMatrix();
  return analog_combiner_ * baseband_combiner_;
}

void Receiver::store_received_signal(const CVector& y) {
  if (y.size() != array_.num_elements())
    throw std::invalid_argument("received signal must have num_antennas entries");
  received_signal_ = y;
}

void Receiver::draw_and_store_noise(RandomStream& stream) {
  const int nr = array_.num_elements();
  noise_.resize(nr);
  for (int i = 0; i < nr; ++i) noise_(i) = stream.complex_normal(noise_variance_);
}

void Receiver::clear_signals() {
  received_signal_.resize(0);
  noise_.resize(0);
}

const CVector& Receiver::received_signal() const {
  if (received_signal_.size() == 0) throw std::logic_error("no received signal stored");
  return received_signal_;
}

const CVector& Receiver::noise() const {
  if (noise_.size() == 0) throw std::logic_error("no noise realization stored");
  return noise_;
}

const ChannelStateInformation& Receiver::csi() const {
  if (!csi_.has_value()) throw std::logic_error("receiver has no channel state information");
  return *csi_;
}

CVector Receiver::combine() const { return combine(received_signal(), noise()); }

CVector Receiver::combine(const CVector& y, const CVector& n) const {
  CMatrix w = effective_combiner();
  if (w.size() == 0) throw std::logic_error("receiver has no combiner");
  if (y.size() != w.rows() || n.size() != w.rows())
    throw std::invalid_argument("signal size does not match combiner");
  return w.adjoint() * (y + n);
}

void Receiver::configure(const std::string& strategy) {
  ReceiveStrategy fn;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = strategy_registry().find(strategy);
    if (it == strategy_registry().end())
      throw std::invalid_argument("unknown receive strategy: " + strategy);
    fn = it->second;
  }
  fn(*this, csi());
}

double noise_energy_from_psd_dbm_hz(double psd_dbm_hz) {
  return std::pow(10.0, (psd_dbm_hz - 30.0) / 10.0);
}

double noise_psd_dbm_hz_from_energy(double energy) {
  if (energy <= 0.0) throw std::invalid_argument("noise energy must be > 0");
  return 10.0 * std::log10(energy) + 30.0;
}

void register_receive_strategy(const std::string& name, ReceiveStrategy strategy) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  strategy_registry()[name] = std::move(strategy);
}

bool has_receive_strategy(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return strategy_registry().count(name) > 0;
}

void configure_eigen_combiner(Receiver& rx, const ChannelStateInformation& csi) {
  CMatrix target = eigen_combiner_target(csi, rx.num_streams());
  if (rx.architecture() == Architecture::Digital) {
    rx.set_combiner(target);
    return;
  }
  rx.set_analog_combiner(phase_extracted(target, rx.rf_chains()));
  const CMatrix& rf_q = rx.analog_combiner();
  rx.set_baseband_combiner(rf_q.completeOrthogonalDecomposition().solve(target));
}

void configure_mmse_combiner(Receiver& rx, const ChannelStateInformation& csi,
                             bool include_interference) {
  CMatrix a = signal_matrix(csi.desired);
  if (a.size() == 0)
    throw std::logic_error("mmse combiner needs the desired transmit precoder in the csi");
  double sigma2 = csi.noise_variance;
  if (sigma2 <= 0.0) throw std::invalid_argument("mmse combiner needs noise_variance > 0");
  CMatrix r = observation_covariance(csi, a, include_interference);
  CMatrix cross = a * csi.desired.symbol_covariance;

  if (rx.architecture() == Architecture::Digital) {
    rx.set_combiner(r.llt().solve(cross));
    return;
  }

  // Analog stage steers toward the eigen combiner; the baseband stage is the
  // LMMSE estimator for the projected observation W_RF^*(y + n), whose noise
  // is colored by W_RF^* W_RF.
  CMatrix target = eigen_combiner_target(csi, rx.num_streams());
  rx.set_analog_combiner(phase_extracted(target, rx.rf_chains()));
  const CMatrix& rf_q = rx.analog_combiner();
  CMatrix r_proj = rf_q.adjoint() * r * rf_q;
  rx.set_baseband_combiner(r_proj.llt().solve(rf_q.adjoint() * cross));
}

}  // namespace mimosim
