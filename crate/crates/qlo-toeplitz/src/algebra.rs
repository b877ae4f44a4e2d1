//! Finite linear combinations of monomials: the computable dense
//! *-algebra of the Toeplitz algebra, graded over the group.
//!
//! Elements are canonical maps from normalized pairs `(s,t)` to nonzero
//! Gaussian-rational coefficients. The grading assigns each monomial its
//! quotient label `st⁻¹`, and the conditional expectation keeps exactly
//! the identity-degree part.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::monoid::{Elem, Monoid, QuotientLabel};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    monoid: Monoid,
    terms: BTreeMap<(Elem, Elem), Scalar>,
}

impl AlgebraElement {
    pub fn zero(monoid: Monoid) -> AlgebraElement {
        AlgebraElement {
            monoid,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(monoid: Monoid) -> AlgebraElement {
        let e = monoid.identity();
        AlgebraElement::from_monomial(monoid, Monomial::pair(e.clone(), e))
    }

    pub fn from_monomial(monoid: Monoid, m: Monomial) -> AlgebraElement {
        AlgebraElement::from_term(monoid, m, Scalar::one())
    }

    pub fn from_term(monoid: Monoid, m: Monomial, coeff: Scalar) -> AlgebraElement {
        let mut x = AlgebraElement::zero(monoid);
        x.add_term(&m, &coeff);
        x
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Scalar)> {
        self.terms.iter().map(|((s, t), c)| {
            (
                Monomial::V {
                    s: s.clone(),
                    t: t.clone(),
                },
                c,
            )
        })
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        match m {
            Monomial::Zero => Scalar::zero(),
            Monomial::V { s, t } => self
                .terms
                .get(&(s.clone(), t.clone()))
                .cloned()
                .unwrap_or_else(Scalar::zero),
        }
    }

    fn add_term(&mut self, m: &Monomial, coeff: &Scalar) {
        let Monomial::V { s, t } = m else {
            return; // the zero monomial is never stored
        };
        if coeff.is_zero() {
            return;
        }
        let key = (s.clone(), t.clone());
        let next = match self.terms.get(&key) {
            Some(c) => c + coeff,
            None => coeff.clone(),
        };
        if next.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, next);
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.monoid);
        if c.is_zero() {
            return out;
        }
        for ((s, t), coeff) in &self.terms {
            out.terms.insert((s.clone(), t.clone()), c * coeff);
        }
        out
    }

    /// Conjugate-linear involution: coefficients conjugate, monomials flip.
    pub fn star(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.monoid);
        for ((s, t), coeff) in &self.terms {
            out.terms.insert((t.clone(), s.clone()), coeff.conj());
        }
        out
    }

    /// Degree decomposition. The components sum back to the element, and
    /// homogeneous components multiply into the product of their labels.
    pub fn grade(&self) -> BTreeMap<QuotientLabel, AlgebraElement> {
        let mut out: BTreeMap<QuotientLabel, AlgebraElement> = BTreeMap::new();
        for ((s, t), coeff) in &self.terms {
            let label = self.monoid.quotient_label(s, t);
            out.entry(label)
                .or_insert_with(|| AlgebraElement::zero(self.monoid))
                .terms
                .insert((s.clone(), t.clone()), coeff.clone());
        }
        out
    }

    /// The conditional expectation onto the diagonal: the identity-degree
    /// component. Idempotent; annihilates every other degree.
    pub fn expectation(&self) -> AlgebraElement {
        let e = self.monoid.label_identity();
        let mut out = AlgebraElement::zero(self.monoid);
        for ((s, t), coeff) in &self.terms {
            if self.monoid.quotient_label(s, t) == e {
                out.terms.insert((s.clone(), t.clone()), coeff.clone());
            }
        }
        out
    }

    /// True when every monomial has the given degree (zero is homogeneous
    /// of every degree).
    pub fn is_homogeneous_of(&self, label: &QuotientLabel) -> bool {
        self.terms
            .keys()
            .all(|(s, t)| self.monoid.quotient_label(s, t) == *label)
    }

    /// Formal image of the basis vector `ε_t`: a finite combination of
    /// basis vectors, as a pruned map `u ↦ coefficient`.
    pub fn apply_to_basis(&self, t: &Elem) -> BTreeMap<Elem, Scalar> {
        let mut out: BTreeMap<Elem, Scalar> = BTreeMap::new();
        for (m, coeff) in self.terms() {
            if let Some(u) = m.apply(t, &self.monoid) {
                let next = match out.get(&u) {
                    Some(c) => c + coeff,
                    None => coeff.clone(),
                };
                if next.is_zero() {
                    out.remove(&u);
                } else {
                    out.insert(u, next);
                }
            }
        }
        out
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.monoid, rhs.monoid, "instance mismatch");
        let mut out = self.clone();
        for ((s, t), coeff) in &rhs.terms {
            out.add_term(
                &Monomial::V {
                    s: s.clone(),
                    t: t.clone(),
                },
                coeff,
            );
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.monoid, rhs.monoid, "instance mismatch");
        let mut out = AlgebraElement::zero(self.monoid);
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                let prod = m1.mul(&m2, &self.monoid);
                out.add_term(&prod, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negated = -c;
            if i == 0 {
                if c.is_one() {
                    write!(f, "{m}")?;
                } else if negated.is_one() {
                    write!(f, "-{m}")?;
                } else {
                    write!(f, "{c}*{m}")?;
                }
            } else if negated.is_one() {
                write!(f, " - {m}")?;
            } else if c.is_one() {
                write!(f, " + {m}")?;
            } else if negated.is_nonnegative_real() && !negated.is_zero() {
                write!(f, " - {negated}*{m}")?;
            } else {
                write!(f, " + {c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_algebra, parse_elem};

    fn fm() -> Monoid {
        Monoid::free_monoid(2)
    }

    #[test]
    fn pair_of_isometry_sums() {
        let m = fm();
        let x = parse_algebra(&m, "V(e,a) + V(e,b)").unwrap();
        let y = parse_algebra(&m, "V(a,e) + V(b,e)").unwrap();
        let expected = parse_algebra(&m, "2 V(e,e)").unwrap();
        assert_eq!(&x * &y, expected);
    }

    #[test]
    fn star_conjugates_coefficients() {
        let m = fm();
        let x = parse_algebra(&m, "(2+i)*V(a,b)").unwrap();
        let expected = parse_algebra(&m, "(2-i)*V(b,a)").unwrap();
        assert_eq!(x.star(), expected);
        let zero = AlgebraElement::zero(m);
        assert!((&x * &zero).is_zero());
    }

    #[test]
    fn star_is_antimultiplicative() {
        let m = fm();
        let x = parse_algebra(&m, "V(a,b) + 2 V(e,a)").unwrap();
        let y = parse_algebra(&m, "i*V(b,e) - V(a,a)").unwrap();
        assert_eq!((&x * &y).star(), &y.star() * &x.star());
        assert_eq!(x.star().star(), x);
    }

    #[test]
    fn grading_examples() {
        let m = fm();
        let x = parse_algebra(&m, "V(a,a) + 2 V(a,b)").unwrap();
        let graded = x.grade();
        assert_eq!(graded.len(), 2);
        let e = m.label_identity();
        assert_eq!(
            graded.get(&e).unwrap(),
            &parse_algebra(&m, "V(a,a)").unwrap()
        );
        // Aliased pairs grade together: V(ab,b) has the same label as V(a,e).
        let y = parse_algebra(&m, "V(ab,b) + V(a,e)").unwrap();
        assert_eq!(y.grade().len(), 1);
        // Components sum back.
        let mut total = AlgebraElement::zero(m);
        for part in x.grade().values() {
            total = &total + part;
        }
        assert_eq!(total, x);
    }

    #[test]
    fn expectation_examples() {
        let m = fm();
        let x = parse_algebra(&m, "V(a,a) + 2 V(a,b)").unwrap();
        assert_eq!(x.expectation(), parse_algebra(&m, "V(a,a)").unwrap());
        let y = parse_algebra(&m, "V(a,b)").unwrap();
        assert!(y.expectation().is_zero());
        assert_eq!(x.expectation().expectation(), x.expectation());
    }

    #[test]
    fn ring_axioms_on_small_elements() {
        let m = fm();
        let xs = [
            parse_algebra(&m, "V(a,b) + i*V(e,e)").unwrap(),
            parse_algebra(&m, "V(b,a) - 1/2*V(a,a)").unwrap(),
            parse_algebra(&m, "V(e,a) + V(b,b)").unwrap(),
        ];
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    assert_eq!(&(x + y) * z, &(x * z) + &(y * z));
                    assert_eq!(&(x * y) * z, x * &(y * z));
                }
            }
        }
    }

    #[test]
    fn graded_multiplicativity_radius_two() {
        for m in [fm(), Monoid::free_abelian(2)] {
            let ball = m.enumerate_ball(2);
            for s in &ball {
                for t in &ball {
                    for u in &ball {
                        for v in &ball {
                            let x = AlgebraElement::from_monomial(
                                m,
                                Monomial::pair(s.clone(), t.clone()),
                            );
                            let y = AlgebraElement::from_monomial(
                                m,
                                Monomial::pair(u.clone(), v.clone()),
                            );
                            let g = m.quotient_label(s, t);
                            let h = m.quotient_label(u, v);
                            let prod = &x * &y;
                            match m.label_mul(&g, &h) {
                                Some(gh) => assert!(prod.is_homogeneous_of(&gh)),
                                None => assert!(prod.is_zero()),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expectation_is_diagonal_bimodule_map() {
        let m = fm();
        let ball = m.enumerate_ball(2);
        let x = parse_algebra(&m, "V(a,b) + i*V(e,e) - V(ba,a)").unwrap();
        for u in &ball {
            for w in &ball {
                let d = AlgebraElement::from_monomial(m, Monomial::range_projection(u.clone()));
                let d2 = AlgebraElement::from_monomial(m, Monomial::range_projection(w.clone()));
                let lhs = (&(&d * &x) * &d2).expectation();
                let rhs = &(&d * &x.expectation()) * &d2;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn basis_action_matches_term_action() {
        let m = fm();
        let x = parse_algebra(&m, "V(a,b) - V(aa,ba)").unwrap();
        let ba = parse_elem(&m, "ba").unwrap();
        // Both terms send ba to aa; coefficients cancel.
        assert!(x.apply_to_basis(&ba).is_empty());
        let b = parse_elem(&m, "b").unwrap();
        let img = x.apply_to_basis(&b);
        assert_eq!(img.len(), 1);
        assert_eq!(img.get(&parse_elem(&m, "a").unwrap()), Some(&Scalar::one()));
    }
}
