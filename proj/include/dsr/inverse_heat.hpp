// SPDX-License-Identifier: Apache-2.0
//
// End-to-end inversions for the fractional heat equation on (0, mu pi):
// initial datum from a point measurement, from the boundary flux at x = 0,
// and tensor-product data on a box from hyperplane measurements.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsr/biortho.hpp"
#include "dsr/peeling.hpp"
#include "dsr/sensor.hpp"
#include "dsr/vandermonde.hpp"

namespace dsr {

enum class ChannelKind { point, boundary_flux, hyperplane };

/// u on the hyperplane {x_axis = x0}; the vector holds the other coordinates in axis order.
using HyperplaneField = std::function<Real(const Vector& transverse, const Real& t)>;

struct MeasurementChannel {
  ChannelKind kind = ChannelKind::point;
  Real alpha = 1;
  Real mu = 1;  // interval scale of the recovered axis
  std::optional<SensorPoint> sensor;
  std::optional<SeriesInput> series;  // point, boundary_flux
  // hyperplane
  size_t axis = 0;
  Vector transverse_mu;
  HyperplaneField field;
  Real noise_level = 0;

  void check() const;
};

MeasurementChannel point_channel(const InitialDatum& f, const Real& alpha, const SensorPoint& sensor);
MeasurementChannel point_channel(DirichletSample s, const Real& alpha, const SensorPoint& sensor);
MeasurementChannel flux_channel(const InitialDatum& f, const Real& alpha);
MeasurementChannel flux_channel(DirichletSample s, const Real& alpha, const Real& mu);
/// One channel per axis, sensors[j] on axis j (x0 in (0, mu_j pi)).
std::vector<MeasurementChannel> hyperplane_channels(const TensorDatum& f, const Real& alpha,
                                                    const std::vector<SensorPoint>& sensors);

struct InversionConfig {
  Method method = Method::biortho;
  Real T = 1;
  BiorthoConfig biortho;
  PeelingConfig peeling;
  HolderConfig holder;
  double holder_alpha = 1;  // a priori weight exp(alpha n^beta) of the vandermonde route
  std::optional<double> holder_beta;  // default max(2, beta1 + 1)
  std::optional<double> theorem_C;  // calibrated constant; 1 (uncalibrated) when absent
  std::optional<double> flux_C;     // envelope constant of the flux truncation
  size_t count = 64;                // exponents generated per axis
  int transverse_panels = 2;
  int transverse_order = 32;
  size_t sup_grid = 0;  // 0: 64 points per recovered mode
  std::optional<InitialDatum> truth;
  std::optional<TensorDatum> truth_tensor;
  int precision_bits = 0;
};

struct TheoremBound {
  Real value;
  std::string tag;  // point-log, point-doublelog, flux-log, tensor-log
  bool calibrated = false;
};

struct InversionResult {
  std::optional<InitialDatum> datum;
  std::optional<TensorDatum> tensor;
  RecoveryReport report;
  TheoremBound theorem_bound;
  std::vector<RecoveryReport> axis_reports;  // tensor only
};

InversionResult recover_initial_point(const MeasurementChannel& channel, double theta, double m,
                                      const InversionConfig& config = {});
InversionResult recover_initial_boundary(const MeasurementChannel& channel, double beta, double m,
                                         const InversionConfig& config = {});
InversionResult recover_tensor(const std::vector<MeasurementChannel>& channels, const Real& eta, double theta,
                               double m, const InversionConfig& config = {});

/// max |f| over a uniform grid of (0, mu pi).
Real sup_norm_grid(const InitialDatum& f, size_t grid);
/// L2 distance of two tensor data over the box (same scales required).
Real tensor_l2_distance(const TensorDatum& a, const TensorDatum& b);
/// L2(0, mu pi) distance of two data on the same interval.
Real l2_distance(const InitialDatum& a, const InitialDatum& b);

std::string to_string(ChannelKind k);
ChannelKind channel_from_string(const std::string& s);

}  // namespace dsr
