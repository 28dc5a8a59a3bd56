#include "mimosim/transmitter.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace mimosim {

namespace {

std::map<std::string, TransmitStrategy>& strategy_registry() {
  static std::map<std::string, TransmitStrategy> registry = {
      {"eigen", configure_eigen_precoder},
  };
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Transmitter::Transmitter(ArrayGeometry array, Architecture architecture, int rf_chains)
    : array_(std::move(array)), architecture_(architecture), rf_chains_(rf_chains) {
  if (architecture_ == Architecture::Hybrid) {
    if (rf_chains_ <= 0) throw std::invalid_argument("hybrid transmitter needs rf_chains > 0");
    if (rf_chains_ > array_.num_elements())
      throw std::invalid_argument("rf_chains exceeds antenna count");
  } else {
    rf_chains_ = array_.num_elements();
  }
  set_num_streams(1);
}

void Transmitter::set_transmit_power_watts(double watts) {
  if (watts < 0.0) throw std::invalid_argument("transmit power must be >= 0");
  power_watts_ = watts;
}

void Transmitter::set_transmit_power_dbm(double dbm) {
  power_watts_ = watts_from_dbm(dbm);
}

void Transmitter::set_symbol_bandwidth(double hz) {
  if (hz <= 0.0) throw std::invalid_argument("symbol bandwidth must be > 0");
  bandwidth_hz_ = hz;
}

double Transmitter::energy_per_symbol() const {
  return mimosim::energy_per_symbol(power_watts_, bandwidth_hz_);
}

void Transmitter::set_num_streams(int ns) {
  if (ns <= 0) throw std::invalid_argument("num_streams must be > 0");
  if (architecture_ == Architecture::Hybrid && ns > rf_chains_)
    throw std::invalid_argument("num_streams exceeds rf_chains");
  if (ns > array_.num_elements()) throw std::invalid_argument("num_streams exceeds antennas");
  num_streams_ = ns;
  precoder_budget_ = static_cast<double>(ns);
  digital_budget_ = static_cast<double>(ns);
  symbol_covariance_ = CMatrix::Identity(ns, ns) / static_cast<double>(ns);
  precoder_.resize(0, 0);
  baseband_precoder_.resize(0, 0);
  symbol_.resize(0);
}

void Transmitter::set_precoder_energy_budget(double e) {
  if (e <= 0.0) throw std::invalid_argument("energy budget must be > 0");
  precoder_budget_ = e;
  enforce_budgets();
}

void Transmitter::set_digital_energy_budget(double e) {
  if (e <= 0.0) throw std::invalid_argument("energy budget must be > 0");
  digital_budget_ = e;
  enforce_budgets();
}

void Transmitter::set_precoder(const CMatrix& f) {
  if (architecture_ != Architecture::Digital)
    throw std::logic_error("set_precoder applies to the digital architecture");
  if (f.rows() != array_.num_elements() || f.cols() != num_streams_)
    throw std::invalid_argument("precoder must be num_antennas x num_streams");
  precoder_ = enforce_precoder_budget(f, precoder_budget_);
}

void Transmitter::set_analog_precoder(const CMatrix& f) {
  if (architecture_ != Architecture::Hybrid)
    throw std::logic_error("set_analog_precoder applies to the hybrid architecture");
  if (f.rows() != array_.num_elements() || f.cols() != rf_chains_)
    throw std::invalid_argument("analog precoder must be num_antennas x rf_chains");
  analog_precoder_ = quantize_analog(f, constraints_);
  enforce_budgets();
}

void Transmitter::set_baseband_precoder(const CMatrix& f) {
  if (architecture_ != Architecture::Hybrid)
    throw std::logic_error("set_baseband_precoder applies to the hybrid architecture");
  if (f.rows() != rf_chains_ || f.cols() != num_streams_)
    throw std::invalid_argument("baseband precoder must be rf_chains x num_streams");
  baseband_precoder_ = enforce_precoder_budget(f, digital_budget_);
  enforce_budgets();
}

CMatrix Transmitter::effective_precoder() const {
  if (architecture_ == Architecture::Digital) return precoder_;
  if (analog_precoder_.size() == 0 || baseband_precoder_.size() == 0) return CMatrix();
  return analog_precoder_ * baseband_precoder_;
}

void Transmitter::set_symbol_covariance(const CMatrix& rs) {
  if (rs.rows() != num_streams_ || rs.cols() != num_streams_)
    throw std::invalid_argument("symbol covariance must be num_streams x num_streams");
  if (!rs.isApprox(rs.adjoint(), 1e-12))
    throw std::invalid_argument("symbol covariance must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rs);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("symbol covariance must be positive semidefinite");
  symbol_covariance_ = rs;
}

void Transmitter::set_transmit_symbol(const CVector& s) {
  if (s.size() != num_streams_) throw std::invalid_argument("symbol must have num_streams entries");
  symbol_ = s;
}

const ChannelStateInformation& Transmitter::csi() const {
  if (!csi_.has_value()) throw std::logic_error("transmitter has no channel state information");
  return *csi_;
}

void Transmitter::turn_off() {
  if (architecture_ == Architecture::Digital) {
    precoder_ = CMatrix::Zero(array_.num_elements(), num_streams_);
    return;
  }
  if (analog_precoder_.size() == 0)
    analog_precoder_ = CMatrix::Zero(array_.num_elements(), rf_chains_);
  baseband_precoder_ = CMatrix::Zero(rf_chains_, num_streams_);
}

CVector Transmitter::transmit(const CVector& s) const {
  CMatrix f = effective_precoder();
  if (f.size() == 0) throw std::logic_error("transmitter has no precoder");
  if (s.size() != f.cols()) throw std::invalid_argument("symbol size does not match precoder");
  return std::sqrt(energy_per_symbol()) * (f * s);
}

void Transmitter::configure(const std::string& strategy) {
  TransmitStrategy fn;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = strategy_registry().find(strategy);
    if (it == strategy_registry().end())
      throw std::invalid_argument("unknown transmit strategy: " + strategy);
    fn = it->second;
  }
  fn(*this, csi());
}

void Transmitter::enforce_budgets() {
  if (architecture_ == Architecture::Digital) {
    if (precoder_.size() > 0) precoder_ = enforce_precoder_budget(precoder_, precoder_budget_);
    return;
  }
  if (baseband_precoder_.size() == 0) return;
  baseband_precoder_ = enforce_precoder_budget(baseband_precoder_, digital_budget_);
  if (analog_precoder_.size() == 0) return;
  // The cascade must also respect the overall budget; shrink the baseband
  // stage so the analog stage stays on its quantization grid.
  double cascade = (analog_precoder_ * baseband_precoder_).squaredNorm();
  if (cascade > precoder_budget_)
    baseband_precoder_ *= std::sqrt(precoder_budget_ / cascade);
}

CMatrix enforce_precoder_budget(const CMatrix& f, double e) {
  double energy = f.squaredNorm();
  if (energy <= e) return f;
  return f * std::sqrt(e / energy);
}

void register_transmit_strategy(const std::string& name, TransmitStrategy strategy) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  strategy_registry()[name] = std::move(strategy);
}

bool has_transmit_strategy(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return strategy_registry().count(name) > 0;
}

void configure_eigen_precoder(Transmitter& tx, const ChannelStateInformation& csi) {
  const CMatrix& h = csi.desired.effective_channel;
  if (h.size() == 0) throw std::logic_error("eigen strategy needs a realized channel");
  int ns = tx.num_streams();
  if (ns > std::min(h.rows(), h.cols()))
    throw std::invalid_argument("num_streams exceeds channel rank bound");

  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double scale = std::sqrt(tx.precoder_energy_budget() / static_cast<double>(ns));
  CMatrix target = scale * svd.matrixV().leftCols(ns);

  if (tx.architecture() == Architecture::Digital) {
    tx.set_precoder(target);
    return;
  }

  // Phase extraction: each RF chain tracks one target column (cyclically when
  // chains outnumber streams), then baseband solves the least-squares fit.
  int nt = tx.num_antennas();
  int lt = tx.rf_chains();
  CMatrix rf(nt, lt);
  for (int l = 0; l < lt; ++l) {
    for (int i = 0; i < nt; ++i) {
      double phase = std::arg(target(i, l % ns));
      rf(i, l) = Complex(std::cos(phase), std::sin(phase));
    }
  }
  tx.set_analog_precoder(rf);
  const CMatrix& rf_q = tx.analog_precoder();
  CMatrix bb = rf_q.completeOrthogonalDecomposition().solve(target);
  tx.set_baseband_precoder(bb);
}

}  // namespace mimosim
