#include "spinperc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spinperc {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void check_spin(int x) {
    if (x != 1 && x != -1) throw std::invalid_argument("channel: input must be +1 or -1");
}

// Symmetric tridiagonal QL with implicit shifts, tracking one row of the
// eigenvector matrix (enough to recover Gauss weights).
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw std::runtime_error("quadrature eigensolver stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Nodes and weights for integrating exp(-x^2) f(x) over the real line
// (Golub-Welsch on the Hermite Jacobi matrix).
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
    for (int j = 0; j + 1 < n; ++j) e[j] = std::sqrt((j + 1) / 2.0);
    z[0] = 1.0;
    tql_first_row(d, e, z);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    const double mu0 = std::sqrt(M_PI); // integral of exp(-x^2)
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        x[i] = d[order[i]];
        w[i] = mu0 * z[order[i]] * z[order[i]];
    }
}

} // namespace

EdgeChannel EdgeChannel::bsc(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("bsc: flip probability must be in [0,1]");
    return {ChannelKind::bsc, epsilon};
}

EdgeChannel EdgeChannel::awgn(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("awgn: lambda must be >= 0");
    return {ChannelKind::awgn, lambda};
}

EdgeChannel EdgeChannel::erasure(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("erasure: reveal probability must be in [0,1]");
    return {ChannelKind::erasure, q};
}

EdgeObservation EdgeObservation::make_spin(int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("observation: spin must be +1 or -1");
    EdgeObservation y;
    y.kind = Kind::spin;
    y.spin = s;
    return y;
}

EdgeObservation EdgeObservation::make_real(double v) {
    EdgeObservation y;
    y.kind = Kind::real;
    y.value = v;
    return y;
}

EdgeObservation EdgeObservation::make_erased() {
    EdgeObservation y;
    y.kind = Kind::erased;
    return y;
}

EdgeObservation sample_output(const EdgeChannel& ch, int x, std::mt19937_64& rng) {
    check_spin(x);
    switch (ch.kind) {
        case ChannelKind::bsc: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return EdgeObservation::make_spin(u(rng) < ch.param ? -x : x);
        }
        case ChannelKind::awgn: {
            std::normal_distribution<double> z(0.0, 1.0);
            return EdgeObservation::make_real(std::sqrt(ch.param) * x + z(rng));
        }
        case ChannelKind::erasure: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            if (u(rng) < ch.param) return EdgeObservation::make_spin(x);
            return EdgeObservation::make_erased();
        }
    }
    throw std::logic_error("unreachable");
}

double likelihood(const EdgeChannel& ch, const EdgeObservation& y, int x) {
    check_spin(x);
    switch (ch.kind) {
        case ChannelKind::bsc:
            if (y.kind != EdgeObservation::Kind::spin)
                throw std::invalid_argument("likelihood: bsc output alphabet is {-1,+1}");
            return y.spin == x ? 1.0 - ch.param : ch.param;
        case ChannelKind::awgn: {
            if (y.kind != EdgeObservation::Kind::real)
                throw std::invalid_argument("likelihood: awgn output alphabet is the real line");
            double d = y.value - std::sqrt(ch.param) * x;
            return kInvSqrt2Pi * std::exp(-0.5 * d * d);
        }
        case ChannelKind::erasure:
            if (y.kind == EdgeObservation::Kind::erased) return 1.0 - ch.param;
            if (y.kind == EdgeObservation::Kind::spin) return y.spin == x ? ch.param : 0.0;
            throw std::invalid_argument("likelihood: erasure output alphabet is {-1,+1,erased}");
    }
    throw std::logic_error("unreachable");
}

EdgeObservation apply_symmetry(const EdgeChannel& ch, const EdgeObservation& y) {
    (void)ch;
    switch (y.kind) {
        case EdgeObservation::Kind::spin: return EdgeObservation::make_spin(-y.spin);
        case EdgeObservation::Kind::real: return EdgeObservation::make_real(-y.value);
        case EdgeObservation::Kind::erased: return y;
    }
    throw std::logic_error("unreachable");
}

double awgn_f(double lambda, int order) {
    if (order < 2) throw std::invalid_argument("awgn_f: quadrature order must be >= 2");
    if (lambda == 0.0) return 0.0;
    std::vector<double> x, w;
    gauss_hermite(order, x, w);
    // E[g(Z)] = pi^{-1/2} * sum w_i g(sqrt(2) x_i) for Z ~ N(0,1).
    const double s = std::sqrt(2.0 * lambda);
    double acc = 0.0;
    for (int i = 0; i < order; ++i) {
        double t = std::tanh(lambda + s * x[i]);
        acc += w[i] * t * t;
    }
    return acc / std::sqrt(M_PI);
}

double edge_chi2_info(const EdgeChannel& ch) {
    switch (ch.kind) {
        case ChannelKind::bsc: {
            double d = 1.0 - 2.0 * ch.param;
            return d * d;
        }
        case ChannelKind::erasure:
            return ch.param;
        case ChannelKind::awgn:
            return std::clamp(awgn_f(ch.param), 0.0, 1.0);
    }
    throw std::logic_error("unreachable");
}

int discrete_output_count(const EdgeChannel& ch) {
    switch (ch.kind) {
        case ChannelKind::bsc: return 2;
        case ChannelKind::erasure: return 3;
        case ChannelKind::awgn: return 0;
    }
    throw std::logic_error("unreachable");
}

EdgeObservation discrete_output(const EdgeChannel& ch, int k) {
    if (k < 0 || k >= discrete_output_count(ch))
        throw std::invalid_argument("discrete_output: symbol index out of range");
    if (k == 0) return EdgeObservation::make_spin(-1);
    if (k == 1) return EdgeObservation::make_spin(+1);
    return EdgeObservation::make_erased();
}

EdgeChannel parse_channel_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("channel spec \"" + spec + "\": expected name:param");
    std::string name = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    double p = 0.0;
    try {
        std::size_t used = 0;
        p = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
        throw std::invalid_argument("channel spec \"" + spec + "\": bad parameter token \"" + arg +
                                    "\"");
    }
    if (name == "bsc") return EdgeChannel::bsc(p);
    if (name == "awgn") return EdgeChannel::awgn(p);
    if (name == "erasure") return EdgeChannel::erasure(p);
    throw std::invalid_argument("channel spec \"" + spec + "\": unknown channel \"" + name + "\"");
}

std::string format_channel_spec(const EdgeChannel& ch) {
    const char* name = ch.kind == ChannelKind::bsc      ? "bsc"
                       : ch.kind == ChannelKind::awgn   ? "awgn"
                                                        : "erasure";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%.17g", name, ch.param);
    return buf;
}

} // namespace spinperc
