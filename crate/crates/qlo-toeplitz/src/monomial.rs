//! The inverse semigroup `{V(s,t)} ∪ {0}` of Toeplitz monomials.
//!
//! `V(s,t)` stands for the partial isometry `T_s T_t*` on `ℓ²(P)`: as a
//! partial injection it has domain `tP` and sends `tu ↦ su`. Products
//! renormalize immediately through the covariance relation, so the pair
//! form `(s, t)` is a normal form and the family is multiplicatively
//! closed once `0` is adjoined.

use std::fmt;

use crate::monoid::{Elem, JoinResult, Monoid, QuotientLabel};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    Zero,
    V { s: Elem, t: Elem },
}

impl Monomial {
    pub fn pair(s: Elem, t: Elem) -> Monomial {
        Monomial::V { s, t }
    }

    /// The isometry `T_s = V(s, e)`.
    pub fn isometry(monoid: &Monoid, s: Elem) -> Monomial {
        Monomial::V {
            t: monoid.identity(),
            s,
        }
    }

    /// The range projection `T_s T_s* = V(s, s)`.
    pub fn range_projection(s: Elem) -> Monomial {
        Monomial::V { s: s.clone(), t: s }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Monomial::Zero)
    }

    /// `V(s,t)* = V(t,s)`.
    pub fn adjoint(&self) -> Monomial {
        match self {
            Monomial::Zero => Monomial::Zero,
            Monomial::V { s, t } => Monomial::V {
                s: t.clone(),
                t: s.clone(),
            },
        }
    }

    /// Self-adjoint idempotents are exactly the `V(s,s)`.
    pub fn is_projection(&self) -> bool {
        matches!(self, Monomial::V { s, t } if s == t)
    }

    /// Fell-bundle degree `st⁻¹ ∈ G`; zero has no degree.
    pub fn degree(&self, monoid: &Monoid) -> Option<QuotientLabel> {
        match self {
            Monomial::Zero => None,
            Monomial::V { s, t } => Some(monoid.quotient_label(s, t)),
        }
    }

    /// Product by the covariance relation:
    /// `V(s,t)·V(u,v) = V(s·t⁻¹(t∨u), v·u⁻¹(t∨u))` when `t∨u < ∞`, else zero.
    pub fn mul(&self, other: &Monomial, monoid: &Monoid) -> Monomial {
        let (Monomial::V { s, t }, Monomial::V { s: u, t: v }) = (self, other) else {
            return Monomial::Zero;
        };
        match monoid.join(t, u) {
            JoinResult::Infinity => Monomial::Zero,
            JoinResult::Finite(w) => {
                let left = monoid.left_divide(t, &w).expect("join dominates t");
                let right = monoid.left_divide(u, &w).expect("join dominates u");
                Monomial::V {
                    s: monoid.compose(s, &left),
                    t: monoid.compose(v, &right),
                }
            }
        }
    }

    /// Partial-injection action on basis labels: `V(s,u)` sends `t` to
    /// `s·(u⁻¹t)` when `u ≤ t`, and is undefined otherwise.
    pub fn apply(&self, basis: &Elem, monoid: &Monoid) -> Option<Elem> {
        match self {
            Monomial::Zero => None,
            Monomial::V { s, t } => {
                let rem = monoid.left_divide(t, basis)?;
                Some(monoid.compose(s, &rem))
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Zero => write!(f, "0"),
            Monomial::V { s, t } => write!(f, "V({s},{t})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_elem, parse_monomial};

    fn fm() -> Monoid {
        Monoid::free_monoid(2)
    }

    fn v(m: &Monoid, s: &str, t: &str) -> Monomial {
        Monomial::pair(parse_elem(m, s).unwrap(), parse_elem(m, t).unwrap())
    }

    #[test]
    fn product_examples() {
        let m = fm();
        assert_eq!(v(&m, "a", "b").mul(&v(&m, "b", "a"), &m), v(&m, "a", "a"));
        assert_eq!(v(&m, "e", "a").mul(&v(&m, "b", "e"), &m), Monomial::Zero);
        // Covariance with s = a, t = ab: the joint range projection.
        assert_eq!(
            v(&m, "a", "a").mul(&v(&m, "ab", "ab"), &m),
            v(&m, "ab", "ab")
        );
        assert_eq!(Monomial::Zero.mul(&v(&m, "a", "b"), &m), Monomial::Zero);
    }

    #[test]
    fn apply_examples() {
        let m = fm();
        let ba = parse_elem(&m, "ba").unwrap();
        assert_eq!(
            v(&m, "a", "b").apply(&ba, &m),
            Some(parse_elem(&m, "aa").unwrap())
        );
        let a = parse_elem(&m, "a").unwrap();
        assert_eq!(v(&m, "a", "b").apply(&a, &m), None);

        let nat = Monoid::free_abelian(1);
        let three = parse_elem(&nat, "3").unwrap();
        assert_eq!(
            v(&nat, "1", "2").apply(&three, &nat),
            Some(parse_elem(&nat, "2").unwrap())
        );
    }

    #[test]
    fn adjoint_laws() {
        let m = fm();
        assert_eq!(v(&m, "a", "b").adjoint(), v(&m, "b", "a"));
        assert!(v(&m, "ab", "ab").is_projection());
        assert_eq!(v(&m, "ab", "ab").adjoint(), v(&m, "ab", "ab"));
        let ball = m.enumerate_ball(2);
        for s in &ball {
            for t in &ball {
                for u in &ball {
                    for w in &ball {
                        let m1 = Monomial::pair(s.clone(), t.clone());
                        let m2 = Monomial::pair(u.clone(), w.clone());
                        assert_eq!(
                            m1.mul(&m2, &m).adjoint(),
                            m2.adjoint().mul(&m1.adjoint(), &m)
                        );
                    }
                }
            }
        }
    }

    /// Master oracle: multiplication agrees with composition of the
    /// underlying partial injections.
    #[test]
    fn product_respects_partial_injection_semantics() {
        for m in [fm(), Monoid::free_abelian(2), Monoid::divisibility()] {
            let comp = m.enumerate_ball(2);
            let basis = m.enumerate_ball(4);
            for s in &comp {
                for t in &comp {
                    for u in &comp {
                        for w in &comp {
                            let m1 = Monomial::pair(s.clone(), t.clone());
                            let m2 = Monomial::pair(u.clone(), w.clone());
                            let prod = m1.mul(&m2, &m);
                            for x in &basis {
                                let two_step = m2.apply(x, &m).and_then(|y| m1.apply(&y, &m));
                                assert_eq!(
                                    prod.apply(x, &m),
                                    two_step,
                                    "({m1})({m2}) on {x} in {}",
                                    m.describe()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn regularity_and_nica_covariance() {
        let m = fm();
        let ball = m.enumerate_ball(2);
        for s in &ball {
            for t in &ball {
                let x = Monomial::pair(s.clone(), t.clone());
                let back = x.mul(&x.adjoint(), &m).mul(&x, &m);
                assert_eq!(back, x, "V(s,t)V(t,s)V(s,t) = V(s,t)");
                let p = Monomial::range_projection(s.clone());
                let q = Monomial::range_projection(t.clone());
                let expected = match m.join(s, t) {
                    JoinResult::Finite(j) => Monomial::range_projection(j),
                    JoinResult::Infinity => Monomial::Zero,
                };
                assert_eq!(p.mul(&q, &m), expected);
            }
        }
    }

    #[test]
    fn degree_is_quotient_label() {
        let m = fm();
        let x = parse_monomial(&m, "V(ab,b)").unwrap();
        let y = parse_monomial(&m, "V(a,e)").unwrap();
        assert_eq!(x.degree(&m), y.degree(&m));
        assert_eq!(Monomial::Zero.degree(&m), None);
    }
}
