#pragma once

namespace viamdp {

/// Scalar model parameters for the energy-harvesting transmitter MDP.
///
/// The source is a two-state Markov chain with flip probabilities p (0->1)
/// and q (1->0). Energy arrives as Bernoulli(beta) single units into a
/// battery of capacity e_max; each transmission attempt spends one unit and
/// succeeds with probability p_s. The tracked version-innovation age is
/// capped at delta_max. p_alpha is the transmit probability of the
/// randomized-stationary baseline.
struct SystemParams {
    double p = 0.4;
    double q = 0.7;
    double beta = 0.2;
    double p_s = 0.5;
    int e_max = 10;
    int delta_max = 10;
    double p_alpha = 0.5;
};

/// Throws std::invalid_argument on the first violated constraint:
/// 0 < p,q,beta < 1; 0 <= p_s,p_alpha <= 1; e_max >= 0; delta_max >= 1.
void validate_params(const SystemParams& params);

}  // namespace viamdp
