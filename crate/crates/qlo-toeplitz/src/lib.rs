//! Exact symbolic verification of Toeplitz-algebra combinatorics over
//! quasi-lattice ordered monoids.
//!
//! The crate models the positive cone `P` of a quasi-lattice ordered group
//! `(G, P)` together with the dense *-algebra spanned by the Wiener–Hopf
//! monomials `V(s,t) = T_s T_t*` on `ℓ²(P)`, entirely in exact arithmetic,
//! and mechanically verifies the algebraic identities behind the
//! uniqueness theory of these algebras: Nica covariance, the
//! partial-injection semantics of monomials, exhaustive lower-bound sets
//! and their point-mass expansions, the four-case commutation law for the
//! projection family `p_y`, the rank-one matrix units and the ideal they
//! span, the diagonal commutant, and the census of hereditary directed
//! subsets. Every check either passes exactly or returns a concrete
//! witness.
//!
//! # Examples
//!
//! The `examples/` directory is the primary tour; each file is runnable on
//! its own and covers one capability:
//!
//! ```text
//! cargo run --example monoid_tour            # the four cones and their order ops
//! cargo run --example nica_covariance        # V(s,s)V(t,t) = V(s∨t,s∨t) or 0
//! cargo run --example partial_injections     # products vs composition of partial maps
//! cargo run --example fesspe_search          # exhaustive lower-bound sets, found and refuted
//! cargo run --example chi_formula            # ∏(1_x − 1_{xa}) collapsing to a point mass
//! cargo run --example grading_expectation    # degree decomposition and the expectation Φ
//! cargo run --example four_case_commutation  # c_x e_y = e_{xy} c_x across all four cases
//! cargo run --example rank_one_compacts      # matrix units R(x,y) and Φ(X*X) = p_y
//! cargo run --example partition_converse     # the forced structure E(y) = {y}
//! cargo run --example truncation_oracle      # symbolic vs exact-matrix arithmetic
//! cargo run --example spectrum_census        # hereditary directed subsets
//! cargo run --example half_line_probe        # the half-line coverage gaps in (1,2)
//! ```
//!
//! There is also one thin binary, `qlo-toeplitz`, that drives the full
//! check suite from a JSON config; see the README for the schema.
//!
//! # Quick start
//!
//! ```
//! use qlo_toeplitz::monoid::{JoinResult, Monoid};
//! use qlo_toeplitz::parse::parse_algebra;
//!
//! let m = Monoid::free_monoid(2);
//! let x = parse_algebra(&m, "(V(e,a) + V(e,b))").unwrap();
//! let y = parse_algebra(&m, "(V(a,e) + V(b,e))").unwrap();
//! // a and b have no common upper bound, so the cross terms vanish:
//! assert_eq!(&x * &y, parse_algebra(&m, "2 V(e,e)").unwrap());
//! assert_eq!(m.join(&m.identity(), &m.identity()), JoinResult::Finite(m.identity()));
//! ```

pub mod algebra;
pub mod coaction;
pub mod config;
pub mod indicator;
pub mod monoid;
pub mod monomial;
pub mod parse;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod spectrum;
pub mod truncation;

pub use algebra::AlgebraElement;
pub use coaction::{projection, rank_one, GroupPoint, PartitionCandidate};
pub use indicator::{FesspeVerdict, IndicatorElement, LowerBoundSet};
pub use monoid::{Elem, JoinResult, Monoid, MonoidKind, QuotientLabel};
pub use monomial::Monomial;
pub use scalar::Scalar;
pub use truncation::{ExactMatrix, Truncation};
