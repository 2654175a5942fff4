#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "apc/errors.hpp"
#include "apc/numeric.hpp"
#include "apc/state.hpp"

namespace apc {

enum class MeasurementKind { Coherent, Differential };

inline const char* to_string(MeasurementKind k) { return k == MeasurementKind::Coherent ? "coherent" : "differential"; }

struct MeasurementRecord {
  MeasurementKind kind = MeasurementKind::Coherent;
  double responsivity = 1.0;
  std::vector<double> photocurrents;
  AnbitState recovered = AnbitState::null(2);
  int edf = 4;
  /// Differential phase between the two photocurrents, when recoverable.
  std::optional<double> phase;
};

namespace detail {

inline void check_receiver(const AnbitState& s, double r) {
  if (s.dim() != 2) throw DimError("receivers measure two-dimensional anbits");
  if (!(r > 0.0) || !std::isfinite(r)) throw ParamError("responsivity must be positive");
}

}  // namespace detail

/// Two quadrature homodyne receivers: (I_I0, I_Q0, I_I1, I_Q1).
inline MeasurementRecord measure_coherent(const AnbitState& s, double r) {
  detail::check_receiver(s, r);
  MeasurementRecord rec;
  rec.kind = MeasurementKind::Coherent;
  rec.responsivity = r;
  for (int k = 0; k < 2; ++k) {
    rec.photocurrents.push_back(r * s[k].real());
    rec.photocurrents.push_back(r * s[k].imag());
  }
  rec.recovered = AnbitState(r * s.amps());
  rec.edf = 4;
  return rec;
}

/// Direct detection of both amplitudes. The relative phase comes from the
/// delay between photocurrents (omega_c * delta_t); a declared zero delay
/// leaves it unrecoverable. Without delay metadata the phase is read from
/// the amplitude arguments.
inline MeasurementRecord measure_differential(const AnbitState& s, double r, double omega_c = 0.0) {
  detail::check_receiver(s, r);
  MeasurementRecord rec;
  rec.kind = MeasurementKind::Differential;
  rec.responsivity = r;
  const double i0 = r * std::norm(s[0]);
  const double i1 = r * std::norm(s[1]);
  rec.photocurrents = {i0, i1};

  if (s.delta_t().has_value()) {
    if (*s.delta_t() != 0.0) rec.phase = wrap_2pi(omega_c * *s.delta_t());
  } else if (s[0] != 0.0 && s[1] != 0.0) {
    rec.phase = wrap_2pi(std::arg(s[1] * std::conj(s[0])));
  } else {
    rec.phase = 0.0;
  }

  rec.edf = rec.phase ? 3 : 2;
  Vec v(2);
  v << i0, std::polar(i1, rec.phase.value_or(0.0));
  rec.recovered = AnbitState(std::move(v));
  return rec;
}

/// Inverts a coherent record: psi_k = (I_Ik + i I_Qk) / R.
inline AnbitState recover_state(const MeasurementRecord& rec) {
  if (rec.kind != MeasurementKind::Coherent) throw ModeError("only coherent records determine the state");
  if (rec.photocurrents.size() != 4) throw ParamError("coherent record needs four photocurrents");
  const auto& c = rec.photocurrents;
  Vec v(2);
  v << cplx(c[0], c[1]) / rec.responsivity, cplx(c[2], c[3]) / rec.responsivity;
  return AnbitState(std::move(v));
}

}  // namespace apc
