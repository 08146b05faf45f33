"""Default numerical tolerances shared across the package."""

# states: coordinates >= -FEAS_TOL, block sums within FEAS_TOL of the mass
FEAS_TOL = 1e-9
# supp(x_p) = {j : x_pj > SUPPORT_TOL}
SUPPORT_TOL = 1e-9
# relative-interior strictness; must equal SUPPORT_TOL
STRICT_TOL = 1e-9
# zero-sum equality check for tangent directions
EQUALITY_TOL = 1e-10
# band treated as an exact zero gap
ZERO_TOL = 1e-7
# Psi above this value means exposed
PSI_TOL = 1e-7
# sampled gaps must exceed this to count as a strict improvement
SAMPLING_MARGIN = 1e-10
# normal-cone constancy tolerance
CONE_TOL = 1e-9
# exact algebraic identity tests (payoff identity, row additivity)
IDENTITY_TOL = 1e-9

# lp engine
PIVOT_TOL = 1e-10
LP_FEAS_TOL = 1e-9
LP_CHECK_TOL = 1e-8

# support enumeration
SUPPORT_PROFILE_CAP = 10**5
DUPLICATE_TOL = 1e-7
