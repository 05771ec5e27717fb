//! Computational invariant theory for finite orthogonal groups of plus type
//! in odd characteristic, at desk scale (q in {3, 5, 7}, m in {1, 2, 3}).
//!
//! The library builds the polynomial algebra S_m = F_q[y_1..y_m, x_m..x_1] on a
//! hyperbolic frame, the groups that act on it (full orthogonal group, Borel,
//! Sylow p-subgroup, hook subgroup), the classical invariant families (the
//! quadratic form and its Frobenius twists, orbit norms, Dickson-style
//! invariants obtained as Steenrod quotients), and a harness that verifies the
//! structural identities these objects satisfy.
//!
//! Module layout mirrors the data flow:
//!
//! * [`gf`] - arithmetic in GF(p^k) and binomial coefficients mod p,
//! * [`ring`] - sparse multivariate polynomials with lex / grevlex / weighted
//!   orders,
//! * [`matgroup`] - matrix generators, closures, orbits, norms, transfer,
//! * [`steenrod`] - the total Steenrod operator P(t), its slices P^i, and the
//!   additive substitution maps built from them,
//! * [`invariants`] - the invariant catalog (xi, norms, u, d, block bases),
//! * [`solver`] - degree-slice linear algebra: invariant dimensions, expressing
//!   elements over generator sets, Hilbert series,
//! * [`khovanskii`] - subduction and lead-term-monoid certificates,
//! * [`verifier`] - the named-check registry behind the `ortho-invar` CLI.

pub mod gf;
pub mod ring;
pub mod matgroup;
pub mod steenrod;
pub mod invariants;
pub mod solver;
pub mod khovanskii;
pub mod verifier;
