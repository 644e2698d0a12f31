#pragma once

namespace bmx {

// Correlation profile of the environmental noise.  A correlation time
// t_c > 0 sets how fast the noise intensity builds up from zero, and the
// anomaly exponent lambda is either exactly 0 (normal diffusion: the
// intensity saturates at 1) or strictly greater than 1 (anomalous diffusion:
// the intensity grows like lambda*(t/t_c)^(lambda-1)).  Exponents in (0, 1]
// are rejected at construction because the intensity diverges at short times.
class CorrelationKernel {
  public:
    explicit CorrelationKernel(double t_c, double lambda = 0.0);

    double correlation_time() const { return t_c_; }
    double exponent() const { return lambda_; }

    // I(t) = lambda*(t/t_c)^(lambda-1) + 1 - e^(-t/t_c), the power-law term
    // absent for lambda = 0.  Nonnegative; for lambda = 0 it increases
    // strictly from 0 toward 1.
    double intensity(double t) const;

    // J(t) = integral of I over [0, t]
    //      = t^lambda/t_c^(lambda-1) + t + t_c*(e^(-t/t_c) - 1),
    // the first term absent for lambda = 0.  Nonnegative, nondecreasing.
    double intensity_integral(double t) const;

    // I expressed through the dimensionless time alpha = t/t_c.  intensity()
    // delegates here, so intensity(alpha * t_c) and alpha_intensity(alpha)
    // run the identical arithmetic.
    double alpha_intensity(double alpha) const;

  private:
    double t_c_;
    double lambda_;
};

}  // namespace bmx
