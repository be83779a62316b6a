#pragma once

#include <span>
#include <vector>

namespace fowthil {

// Second-order section, transposed direct form II.
class Biquad {
public:
    Biquad() = default;
    Biquad(double b0, double b1, double b2, double a1, double a2) : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

    double process(double x) {
        const double y = b0_ * x + z1_;
        z1_ = b1_ * x - a1_ * y + z2_;
        z2_ = b2_ * x - a2_ * y;
        return y;
    }

    // Sets the internal state to the steady state for a constant input.
    void prime(double x);
    void reset() { z1_ = z2_ = 0.0; }
    double dc_gain() const { return (b0_ + b1_ + b2_) / (1.0 + a1_ + a2_); }

    static Biquad butterworth_lowpass(double cutoff_hz, double sample_rate_hz);
    static Biquad butterworth_highpass(double cutoff_hz, double sample_rate_hz);
    // Section of an even-order Butterworth cascade with pole quality factor q.
    static Biquad lowpass(double cutoff_hz, double sample_rate_hz, double q);
    static Biquad highpass(double cutoff_hz, double sample_rate_hz, double q);

private:
    double b0_{1.0}, b1_{0.0}, b2_{0.0}, a1_{0.0}, a2_{0.0};
    double z1_{0.0}, z2_{0.0};
};

// Even-order Butterworth built from second-order sections.
class ButterworthCascade {
public:
    enum class Type { lowpass, highpass };
    ButterworthCascade(Type type, int order, double cutoff_hz, double sample_rate_hz);

    double process(double x);
    void prime(double x);
    std::vector<double> apply(std::span<const double> x);

private:
    std::vector<Biquad> sections_;
};

// Forward-backward (zero-phase) filtering with odd-reflection padding at both
// ends to suppress start-up transients.
std::vector<double> filtfilt(ButterworthCascade::Type type, int order, double cutoff_hz, double sample_rate_hz,
                             std::span<const double> x);

}  // namespace fowthil
