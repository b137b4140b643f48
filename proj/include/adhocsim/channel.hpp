#pragma once

#include <string>

namespace adhocsim {

enum class Propagation { kUnitDisk, kNakagami };

/// Wireless reception model. The Nakagami curve is calibrated so that the
/// mean received power crosses the detection threshold exactly at the nominal
/// range: P(success) = Q(m, m * (d / range)^alpha).
struct ChannelModel {
  Propagation propagation = Propagation::kUnitDisk;
  double range = 250.0;          // nominal range, meters
  double nakagami_m = 1.0;       // fading shape, >= 0.5
  double path_loss_alpha = 2.0;  // path-loss exponent
  double data_rate_bps = 2e6;

  static ChannelModel unit_disk(double range, double data_rate_bps = 2e6);
  static ChannelModel nakagami(double m, double range, double alpha = 2.0,
                               double data_rate_bps = 2e6);

  void validate() const;

  /// Probability that a frame sent over `dist` meters is received (fading
  /// only; collisions are the medium's business). Non-increasing in dist.
  double reception_probability(double dist) const;

  /// Distance beyond which reception probability is negligible (< 1e-3);
  /// used as both the candidate-receiver and interference cutoff.
  double max_reception_range() const;
};

}  // namespace adhocsim
