#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spinperc/model.hpp"
#include "spinperc/types.hpp"

namespace spinperc {

// Gauge-fixed likelihood sums for one observation vector. All quantities
// are sums over the inputs x in {-1,+1}^n with x_0 = +1, bucketed by the
// signs of (x_u, x_v); buckets carry a common scale factor 2^exp2.
struct PosteriorSums {
    std::array<double, 4> bucket{}; // index ((x_u<0)<<1) | (x_v<0)
    int exp2 = 0;
    bool impossible = false;

    double total() const { return bucket[0] + bucket[1] + bucket[2] + bucket[3]; }
    double signed_sum() const { return bucket[0] + bucket[3] - bucket[1] - bucket[2]; }
};

// Reusable workspace for computing posterior sums on a fixed model and
// vertex pair. Edges whose likelihood is deterministic for the observed
// symbol (noiseless edges, revealed or erased erasure outputs) are folded
// into parity constraints or constant factors; the remaining sum is an
// exhaustive enumeration over the free sign classes.
class PosteriorEngine {
public:
    PosteriorEngine(const SyncModel& m, int u, int v, std::uint64_t max_terms);

    PosteriorSums run(std::span<const EdgeObservation> y);

    // E[X_u * X_v | Y = y]; throws ImpossibleObservation when the
    // observation has zero likelihood.
    double pair_mean(std::span<const EdgeObservation> y);

    // Number of free sign classes after folding the constraints that hold
    // for every observation (an upper bound on the per-run enumeration).
    int static_free_count() const { return static_free_; }

private:
    const SyncModel* model_;
    int u_ = 0, v_ = 0;
    std::uint64_t max_terms_ = 0;
    int static_free_ = 0;

    // per-run scratch
    std::vector<int> parent_;
    std::vector<unsigned char> pbit_;
    std::vector<int> class_id_;
    struct Active {
        std::uint64_t mask = 0;
        unsigned char base = 0;
        double tbl[2] = {0.0, 0.0};
    };
    std::vector<Active> active_;
    std::vector<int> class_edge_offset_;
    std::vector<int> class_edge_;
    std::vector<unsigned char> sbit_;
    std::vector<std::array<double, 2>> mult_;

    int find_root(int a, int& parity);
    bool unite(int a, int b, int rel); // false on parity contradiction
};

// Free sign classes of a model after merging the endpoints of noiseless
// edges; equals n-1 when no edge is noiseless.
int static_free_count(const SyncModel& m);

// Weighted term count of the exhaustive information computation: the
// product of per-edge output alphabet sizes times 2^static_free.
// Saturates at UINT64_MAX.
std::uint64_t exact_weighted_terms(const SyncModel& m);

// E[X_u * X_v | Y = y] by exhaustive gauge-fixed enumeration.
double posterior_pair_mean(const SyncModel& m, std::span<const EdgeObservation> y, int u, int v,
                           const Budget& budget = {});

// I2(X_u; X_v | Y) for discrete-output channels, enumerating the joint
// output alphabet exactly.
InfoResult exact_pairwise_chi2(const SyncModel& m, int u, int v, const Budget& budget = {});

// I2(X_u; X_S, Y) via the virtual-vertex construction: a new vertex joined
// to every member of s by a noiseless edge, then the pairwise computation.
InfoResult exact_set_chi2(const SyncModel& m, int u, std::span<const int> s,
                          const Budget& budget = {});

// I_KL(X_u; X_v | Y) in bits, same enumeration budget as the chi-squared
// version; 0 * lg 0 is taken as 0.
InfoResult exact_pairwise_kl(const SyncModel& m, int u, int v, const Budget& budget = {});

} // namespace spinperc
