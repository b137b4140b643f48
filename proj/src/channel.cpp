#include "adhocsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "adhocsim/mathfn.hpp"

namespace adhocsim {

ChannelModel ChannelModel::unit_disk(double range, double data_rate_bps) {
  ChannelModel c;
  c.propagation = Propagation::kUnitDisk;
  c.range = range;
  c.data_rate_bps = data_rate_bps;
  c.validate();
  return c;
}

ChannelModel ChannelModel::nakagami(double m, double range, double alpha,
                                    double data_rate_bps) {
  ChannelModel c;
  c.propagation = Propagation::kNakagami;
  c.nakagami_m = m;
  c.range = range;
  c.path_loss_alpha = alpha;
  c.data_rate_bps = data_rate_bps;
  c.validate();
  return c;
}

void ChannelModel::validate() const {
  if (range <= 0.0) throw std::invalid_argument("channel: range must be positive");
  if (data_rate_bps <= 0.0)
    throw std::invalid_argument("channel: data_rate must be positive");
  if (propagation == Propagation::kNakagami) {
    if (nakagami_m < 0.5)
      throw std::invalid_argument("channel: nakagami m must be >= 0.5");
    if (path_loss_alpha <= 0.0)
      throw std::invalid_argument("channel: path_loss_alpha must be positive");
  }
}

double ChannelModel::reception_probability(double dist) const {
  if (dist < 0.0) throw std::invalid_argument("reception_probability: dist < 0");
  if (propagation == Propagation::kUnitDisk) return dist <= range ? 1.0 : 0.0;
  if (dist == 0.0) return 1.0;
  return gamma_q(nakagami_m, nakagami_m * std::pow(dist / range, path_loss_alpha));
}

double ChannelModel::max_reception_range() const {
  if (propagation == Propagation::kUnitDisk) return range;
  const double x = gamma_q_inv(nakagami_m, 1e-3);
  return range * std::pow(x / nakagami_m, 1.0 / path_loss_alpha);
}

}  // namespace adhocsim
