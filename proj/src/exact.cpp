#include "spinperc/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spinperc {
namespace {

// Neumaier compensated accumulator; the outer sums run over up to ~3^26
// nonnegative terms and the acceptance tolerances are 1e-12.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct EdgeDisposition {
    enum class Type { constant, constraint, active };
    Type type = Type::constant;
    int sign_bit = 0;   // constraint: x_e = (-1)^sign_bit
    double factor = 1.0; // constant or constraint weight
    double vp = 0.0, vm = 0.0;
};

// Classify one edge for a concrete observed symbol. Deterministic
// likelihoods become constraints, input-independent ones constants.
EdgeDisposition classify(const EdgeChannel& ch, const EdgeObservation& y) {
    EdgeDisposition d;
    switch (ch.kind) {
        case ChannelKind::bsc: {
            if (y.kind != EdgeObservation::Kind::spin)
                throw std::invalid_argument("posterior: bsc output alphabet is {-1,+1}");
            double eps = ch.param;
            if (eps == 0.0 || eps == 1.0) {
                d.type = EdgeDisposition::Type::constraint;
                d.sign_bit = (y.spin < 0) ^ (eps == 1.0);
                d.factor = 1.0;
            } else if (eps == 0.5) {
                d.type = EdgeDisposition::Type::constant;
                d.factor = 0.5;
            } else {
                d.type = EdgeDisposition::Type::active;
                d.vp = y.spin > 0 ? 1.0 - eps : eps;
                d.vm = y.spin > 0 ? eps : 1.0 - eps;
            }
            return d;
        }
        case ChannelKind::erasure: {
            double q = ch.param;
            if (y.kind == EdgeObservation::Kind::erased) {
                d.type = EdgeDisposition::Type::constant;
                d.factor = 1.0 - q;
            } else if (y.kind == EdgeObservation::Kind::spin) {
                d.type = EdgeDisposition::Type::constraint;
                d.sign_bit = y.spin < 0;
                d.factor = q;
            } else {
                throw std::invalid_argument("posterior: erasure output alphabet is {-1,+1,erased}");
            }
            return d;
        }
        case ChannelKind::awgn: {
            if (y.kind != EdgeObservation::Kind::real)
                throw std::invalid_argument("posterior: awgn output alphabet is the real line");
            double s = std::sqrt(ch.param);
            double dp = std::exp(-0.5 * (y.value - s) * (y.value - s));
            double dm = std::exp(-0.5 * (y.value + s) * (y.value + s));
            double mx = std::max(dp, dm);
            if (mx == 0.0) {
                // both densities underflow; the observation is numerically
                // impossible
                d.type = EdgeDisposition::Type::constant;
                d.factor = 0.0;
                return d;
            }
            // Only likelihood ratios matter for AWGN edges (they never occur
            // in the exact joint enumeration), so normalize by the max.
            dp /= mx;
            dm /= mx;
            if (dp == 0.0 || dm == 0.0) {
                d.type = EdgeDisposition::Type::constraint;
                d.sign_bit = dp == 0.0;
                d.factor = 1.0;
            } else {
                d.type = EdgeDisposition::Type::active;
                d.vp = dp;
                d.vm = dm;
            }
            return d;
        }
    }
    throw std::logic_error("unreachable");
}

void check_pair(const SyncModel& m, int u, int v) {
    if (u < 0 || u >= m.graph.n || v < 0 || v >= m.graph.n)
        throw std::invalid_argument("vertex out of range");
    if (u == v) throw std::invalid_argument("endpoints must differ");
}

} // namespace

int static_free_count(const SyncModel& m) {
    DisjointSets ds(m.graph.n);
    for (std::size_t e = 0; e < m.channels.size(); ++e) {
        const auto& ch = m.channels[e];
        if (ch.kind == ChannelKind::bsc && (ch.param == 0.0 || ch.param == 1.0))
            ds.unite(m.graph.edges[e].first, m.graph.edges[e].second);
    }
    int classes = 0;
    for (int v = 0; v < m.graph.n; ++v)
        if (ds.find(v) == v) ++classes;
    return classes - 1;
}

std::uint64_t exact_weighted_terms(const SyncModel& m) {
    int free = static_free_count(m);
    if (free >= 63) return std::numeric_limits<std::uint64_t>::max();
    std::uint64_t w = std::uint64_t{1} << free;
    for (const auto& ch : m.channels) {
        std::uint64_t a = static_cast<std::uint64_t>(discrete_output_count(ch));
        if (a == 0) return std::numeric_limits<std::uint64_t>::max(); // continuous
        if (w > std::numeric_limits<std::uint64_t>::max() / a)
            return std::numeric_limits<std::uint64_t>::max();
        w *= a;
    }
    return w;
}

PosteriorEngine::PosteriorEngine(const SyncModel& m, int u, int v, std::uint64_t max_terms)
    : model_(&m), u_(u), v_(v), max_terms_(max_terms) {
    check_pair(m, u, v);
    static_free_ = spinperc::static_free_count(m);
    parent_.resize(m.graph.n);
    pbit_.resize(m.graph.n);
    class_id_.resize(m.graph.n);
}

int PosteriorEngine::find_root(int a, int& parity) {
    int p = 0, r = a;
    while (parent_[r] != r) {
        p ^= pbit_[r];
        r = parent_[r];
    }
    int cur = a, cp = p;
    while (parent_[cur] != r) {
        int next = parent_[cur];
        int nb = pbit_[cur];
        parent_[cur] = r;
        pbit_[cur] = static_cast<unsigned char>(cp);
        cp ^= nb;
        cur = next;
    }
    parity = p;
    return r;
}

bool PosteriorEngine::unite(int a, int b, int rel) {
    int pa = 0, pb = 0;
    int ra = find_root(a, pa), rb = find_root(b, pb);
    if (ra == rb) return (pa ^ pb) == rel;
    parent_[rb] = ra;
    pbit_[rb] = static_cast<unsigned char>(pa ^ pb ^ rel);
    return true;
}

PosteriorSums PosteriorEngine::run(std::span<const EdgeObservation> y) {
    const Graph& g = model_->graph;
    const int n = g.n;
    if (y.size() != g.edges.size())
        throw std::invalid_argument("posterior: one observation per edge required");

    PosteriorSums out;
    for (int i = 0; i < n; ++i) {
        parent_[i] = i;
        pbit_[i] = 0;
    }

    // Fold deterministic edges into the parity structure, collect the rest.
    double const_f = 1.0;
    active_.clear();
    struct Pending {
        int a, b;
        double vp, vm;
    };
    static thread_local std::vector<Pending> pending;
    pending.clear();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        EdgeDisposition d = classify(model_->channels[e], y[e]);
        switch (d.type) {
            case EdgeDisposition::Type::constant:
                const_f *= d.factor;
                break;
            case EdgeDisposition::Type::constraint:
                const_f *= d.factor;
                if (!unite(g.edges[e].first, g.edges[e].second, d.sign_bit)) {
                    out.impossible = true;
                    return out;
                }
                break;
            case EdgeDisposition::Type::active:
                pending.push_back({g.edges[e].first, g.edges[e].second, d.vp, d.vm});
                break;
        }
    }
    if (const_f == 0.0) {
        out.impossible = true;
        return out;
    }

    // Number the sign classes; the class of vertex 0 is pinned so that
    // x_0 = +1.
    int k = 0;
    std::fill(class_id_.begin(), class_id_.end(), -1);
    for (int i = 0; i < n; ++i) {
        int p = 0;
        int r = find_root(i, p);
        if (class_id_[r] < 0) class_id_[r] = k++;
    }
    int p0 = 0;
    int c0 = class_id_[find_root(0, p0)];
    int tpin = p0; // pinned class spin bit

    // Free-class indices (all classes except the pinned one).
    auto free_index = [&](int cls) { return cls < c0 ? cls : cls - 1; };
    int k1 = k - 1;

    int pu = 0, pv = 0;
    int cu = class_id_[find_root(u_, pu)];
    int cv = class_id_[find_root(v_, pv)];
    int ubase = pu ^ (cu == c0 ? tpin : 0);
    int vbase = pv ^ (cv == c0 ? tpin : 0);
    std::uint64_t umask = (cu == c0) ? 0 : (std::uint64_t{1} << free_index(cu));
    std::uint64_t vmask = (cv == c0) ? 0 : (std::uint64_t{1} << free_index(cv));

    // Map surviving edges onto class pairs; edges internal to one class are
    // constants now.
    for (const auto& p : pending) {
        int pa = 0, pb = 0;
        int ca = class_id_[find_root(p.a, pa)];
        int cb = class_id_[find_root(p.b, pb)];
        int rel = pa ^ pb;
        if (ca == cb) {
            const_f *= rel ? p.vm : p.vp;
            continue;
        }
        Active a;
        a.mask = 0;
        if (ca == c0)
            rel ^= tpin;
        else
            a.mask |= std::uint64_t{1} << free_index(ca);
        if (cb == c0)
            rel ^= tpin;
        else
            a.mask |= std::uint64_t{1} << free_index(cb);
        a.base = static_cast<unsigned char>(rel);
        a.tbl[0] = p.vp;
        a.tbl[1] = p.vm;
        active_.push_back(a);
    }
    if (const_f == 0.0) {
        out.impossible = true;
        return out;
    }

    int base_idx = (ubase << 1) | vbase;

    if (active_.empty()) {
        // Pure counting: every free assignment carries weight 1.
        int involved = 0;
        involved += umask != 0;
        involved += (vmask != 0 && vmask != umask);
        int shift = k1 - involved;
        double unit = std::ldexp(1.0, std::min(shift, 900));
        out.exp2 = std::max(0, shift - 900);
        for (int bits = 0; bits < (1 << involved); ++bits) {
            int bu = ubase, bv = vbase;
            int which = 0;
            if (umask != 0) bu ^= (bits >> which++) & 1;
            if (vmask != 0) {
                if (vmask == umask)
                    bv ^= bu ^ ubase;
                else
                    bv ^= (bits >> which++) & 1;
            }
            out.bucket[(bu << 1) | bv] += unit;
        }
        for (auto& b : out.bucket) b *= const_f;
        return out;
    }

    if (k1 > 62 || (std::uint64_t{1} << k1) > max_terms_)
        throw BudgetExceeded("posterior enumeration over 2^" + std::to_string(k1) +
                             " sign classes exceeds the configured cap");

    const std::uint64_t total = std::uint64_t{1} << k1;
    const std::size_t ne = active_.size();

    // Gray-code updates multiply a running product by per-edge likelihood
    // ratios; guard against the product leaving double range.
    double log2_span = 0.0;
    for (const auto& a : active_)
        log2_span += std::abs(std::log2(a.tbl[0] / a.tbl[1]));
    bool use_gray = k1 > 10 && log2_span < 900.0;

    std::array<double, 4> bucket{};
    if (!use_gray) {
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double p = 1.0;
            for (std::size_t e = 0; e < ne; ++e) {
                const Active& a = active_[e];
                int bit = a.base ^ (std::popcount(mask & a.mask) & 1);
                p *= a.tbl[bit];
            }
            int idx = base_idx;
            idx ^= (std::popcount(mask & umask) & 1) << 1;
            idx ^= std::popcount(mask & vmask) & 1;
            bucket[idx] += p;
        }
    } else {
        sbit_.resize(ne);
        mult_.resize(ne);
        class_edge_offset_.assign(k1 + 1, 0);
        double p = 1.0;
        for (std::size_t e = 0; e < ne; ++e) {
            const Active& a = active_[e];
            sbit_[e] = a.base;
            p *= a.tbl[a.base];
            mult_[e][0] = a.tbl[0] / a.tbl[1];
            mult_[e][1] = a.tbl[1] / a.tbl[0];
            std::uint64_t mm = a.mask;
            while (mm) {
                ++class_edge_offset_[std::countr_zero(mm) + 1];
                mm &= mm - 1;
            }
        }
        for (int c = 0; c < k1; ++c) class_edge_offset_[c + 1] += class_edge_offset_[c];
        class_edge_.resize(class_edge_offset_[k1]);
        {
            std::vector<int> cursor(class_edge_offset_.begin(), class_edge_offset_.end() - 1);
            for (std::size_t e = 0; e < ne; ++e) {
                std::uint64_t mm = active_[e].mask;
                while (mm) {
                    class_edge_[cursor[std::countr_zero(mm)]++] = static_cast<int>(e);
                    mm &= mm - 1;
                }
            }
        }
        std::array<int, 64> idx_xor{};
        for (int c = 0; c < k1; ++c) {
            int x = 0;
            if (umask >> c & 1) x ^= 2;
            if (vmask >> c & 1) x ^= 1;
            idx_xor[c] = x;
        }

        int idx = base_idx;
        bucket[idx] += p;
        for (std::uint64_t i = 1; i < total; ++i) {
            int c = std::countr_zero(i);
            for (int j = class_edge_offset_[c]; j < class_edge_offset_[c + 1]; ++j) {
                int e = class_edge_[j];
                sbit_[e] ^= 1;
                p *= mult_[e][sbit_[e]];
            }
            idx ^= idx_xor[c];
            bucket[idx] += p;
        }
    }

    for (int i = 0; i < 4; ++i) out.bucket[i] = bucket[i] * const_f;
    return out;
}

double PosteriorEngine::pair_mean(std::span<const EdgeObservation> y) {
    PosteriorSums s = run(y);
    double d = s.total();
    if (s.impossible || d <= 0.0)
        throw ImpossibleObservation("observation vector has zero likelihood");
    return s.signed_sum() / d;
}

double posterior_pair_mean(const SyncModel& m, std::span<const EdgeObservation> y, int u, int v,
                           const Budget& budget) {
    PosteriorEngine engine(m, u, v, budget.inner_terms);
    return engine.pair_mean(y);
}

namespace {

struct ScanResult {
    double chi2 = 0.0;
    double kl = 0.0;
};

// Exhaustive scan of the joint output alphabet. For each observation y the
// engine yields the gauge-fixed likelihood sums; P(y) = D(y) / 2^(n-1).
ScanResult exact_scan(const SyncModel& m, int u, int v, const Budget& budget, bool want_kl) {
    check_pair(m, u, v);
    if (has_continuous_channel(m))
        throw std::invalid_argument(
            "exact information requires discrete-output channels; use the monte carlo estimator");
    std::uint64_t weighted = exact_weighted_terms(m);
    if (weighted > budget.exact_terms)
        throw BudgetExceeded("exact enumeration needs " + std::to_string(weighted) +
                             " weighted terms, cap is " + std::to_string(budget.exact_terms));

    const std::size_t ne = m.graph.edges.size();
    std::vector<int> counts(ne);
    std::vector<int> digits(ne, 0);
    std::vector<EdgeObservation> obs(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        counts[e] = discrete_output_count(m.channels[e]);
        obs[e] = discrete_output(m.channels[e], 0);
    }

    PosteriorEngine engine(m, u, v, std::numeric_limits<std::uint64_t>::max());
    KahanSum chi2, kl;
    const double inv_inputs = std::ldexp(1.0, -(m.graph.n - 1));

    bool done = false;
    while (!done) {
        PosteriorSums s = engine.run(obs);
        if (!s.impossible) {
            double d = s.total();
            if (d > 0.0) {
                double nsum = s.signed_sum();
                chi2.add(std::ldexp(nsum * nsum / d, s.exp2));
                if (want_kl) {
                    double py = std::ldexp(d, s.exp2) * inv_inputs;
                    // joint posterior of (X_u, X_v): mirror buckets restore
                    // the x_0 = -1 half of the input space
                    double term = 0.0;
                    double ju[2] = {0.0, 0.0}, jv[2] = {0.0, 0.0};
                    double j[4];
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            int i = (a << 1) | b;
                            int mi = ((a ^ 1) << 1) | (b ^ 1);
                            j[i] = (s.bucket[i] + s.bucket[mi]) / (2.0 * d);
                            ju[a] += j[i];
                            jv[b] += j[i];
                        }
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            double p = j[(a << 1) | b];
                            if (p > 0.0) term += p * std::log2(p / (ju[a] * jv[b]));
                        }
                    kl.add(py * term);
                }
            }
        }
        // advance the symbol odometer
        done = true;
        for (std::size_t e = 0; e < ne; ++e) {
            if (++digits[e] < counts[e]) {
                obs[e] = discrete_output(m.channels[e], digits[e]);
                done = false;
                break;
            }
            digits[e] = 0;
            obs[e] = discrete_output(m.channels[e], 0);
        }
    }

    ScanResult r;
    r.chi2 = chi2.value() * inv_inputs;
    r.kl = kl.value();
    return r;
}

} // namespace

InfoResult exact_pairwise_chi2(const SyncModel& m, int u, int v, const Budget& budget) {
    InfoResult r;
    r.value = exact_scan(m, u, v, budget, false).chi2;
    r.method = Method::exact;
    return r;
}

InfoResult exact_pairwise_kl(const SyncModel& m, int u, int v, const Budget& budget) {
    InfoResult r;
    r.value = exact_scan(m, u, v, budget, true).kl;
    r.method = Method::exact;
    return r;
}

InfoResult exact_set_chi2(const SyncModel& m, int u, std::span<const int> s,
                          const Budget& budget) {
    if (s.empty()) throw std::invalid_argument("exact_set_chi2: empty target set");
    for (int t : s)
        if (t == u) throw std::invalid_argument("exact_set_chi2: u must not belong to the set");
    SyncModel aug = with_virtual_vertex(m, s);
    return exact_pairwise_chi2(aug, u, aug.graph.n - 1, budget);
}

} // namespace spinperc
