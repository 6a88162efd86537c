#pragma once

#include <random>
#include <string>

namespace spinperc {

// Per-edge noise model. All three variants are symmetric: there is an
// involution T on the output alphabet with likelihood(T(y) | -x) equal to
// likelihood(y | x). For spin and real outputs T is y -> -y; the erasure
// symbol is a fixed point.
enum class ChannelKind { bsc, awgn, erasure };

struct EdgeChannel {
    ChannelKind kind = ChannelKind::bsc;
    double param = 0.0; // epsilon (flip), lambda (snr), or q (reveal)

    static EdgeChannel bsc(double epsilon);
    static EdgeChannel awgn(double lambda);
    static EdgeChannel erasure(double q);
};

struct EdgeObservation {
    enum class Kind { spin, real, erased };
    Kind kind = Kind::spin;
    int spin = 1;       // +1 or -1 when kind == spin
    double value = 0.0; // when kind == real

    static EdgeObservation make_spin(int s);
    static EdgeObservation make_real(double v);
    static EdgeObservation make_erased();
};

// Pass the edge spin product x in {-1,+1} through the channel.
// BSC flips x with probability epsilon; AWGN returns sqrt(lambda)*x plus a
// standard normal draw; erasure reveals x with probability q.
EdgeObservation sample_output(const EdgeChannel& ch, int x, std::mt19937_64& rng);

// Conditional mass (discrete) or density (AWGN) of observation y given
// input x. Throws on an alphabet mismatch.
double likelihood(const EdgeChannel& ch, const EdgeObservation& y, int x);

// The symmetry involution T.
EdgeObservation apply_symmetry(const EdgeChannel& ch, const EdgeObservation& y);

// Chi-squared information between an edge spin product and its observation:
// (1-2*epsilon)^2 for BSC, q for erasure, E[tanh(lambda+sqrt(lambda)Z)^2]
// for AWGN (Gauss-Hermite order 60, clamped to [0,1]).
double edge_chi2_info(const EdgeChannel& ch);

// E[tanh(lambda + sqrt(lambda) Z)^2], Z standard normal, by Gauss-Hermite
// quadrature of the given order.
double awgn_f(double lambda, int order = 60);

// Number of output symbols for discrete channels (2 for BSC, 3 for erasure),
// 0 for AWGN; and the k-th symbol in a fixed order (-1, +1, then erased).
int discrete_output_count(const EdgeChannel& ch);
EdgeObservation discrete_output(const EdgeChannel& ch, int k);

// Spec strings: "bsc:0.25", "awgn:0.5", "erasure:0.3".
EdgeChannel parse_channel_spec(const std::string& spec);
std::string format_channel_spec(const EdgeChannel& ch);

} // namespace spinperc
