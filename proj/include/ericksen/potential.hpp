#pragma once

namespace ericksen {

/// Double-well bulk potential W(s) = w0 s^2 (s_plus - s)^2, optionally multiplied by a
/// barrier factor that equals one on [0, s_plus] and blows up at s = -1/2 and s = 1.
struct PotentialSpec {
    double s_plus = 1.0;
    double w0 = 1.0;
    bool barrier_enabled = false;

    /// Throws std::invalid_argument unless 0 < s_plus <= 1 (s_plus < 1 with the barrier) and w0 > 0.
    void check() const;
};

double w_eval(const PotentialSpec& spec, double s);
double w_deriv(const PotentialSpec& spec, double s);
double w_second_deriv(const PotentialSpec& spec, double s);

/// sqrt(W(s)) evaluated without cancellation for s in [0, s_plus].
double w_sqrt(const PotentialSpec& spec, double s);

}  // namespace ericksen
