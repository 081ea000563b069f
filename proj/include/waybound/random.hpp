#ifndef WAYBOUND_RANDOM_HPP
#define WAYBOUND_RANDOM_HPP

#include <cstdint>
#include <random>

#include "waybound/qcore.hpp"

namespace waybound {

/// Seeded deterministic stream. The variates are derived from raw mt19937_64
/// output (not std::*_distribution), so a given seed reproduces the same
/// doubles on every platform. fork(i) derives an independent substream; suites
/// fan out by forking one stream per case index.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    /// Standard normal via Box-Muller.
    double normal();
    /// Standard complex normal, E|z|^2 = 1.
    Complex normal_complex();

    Rng fork(std::uint64_t stream) const;

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// GUE-style random observable: (G + G')/2 with i.i.d. complex normal G.
HermitianOperator random_hermitian(Index dim, Rng& rng);

/// Haar-random unitary: QR of a complex Gaussian matrix with the R-diagonal
/// phase fix.
UnitaryOperator random_unitary(Index dim, Rng& rng);

QuantumState random_pure_state(Index dim, Rng& rng);

/// Full-rank random density operator GG'/Tr[GG'].
QuantumState random_density(Index dim, Rng& rng);

} // namespace waybound

#endif
