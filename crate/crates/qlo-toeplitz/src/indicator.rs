//! Indicator functions `1_s` on the cone and the finite-exhaustivity
//! (FESSPE) machinery built from them.
//!
//! `1_s` is the characteristic function of the upper set `{t : s ≤ t}`,
//! and pointwise multiplication obeys `1_s·1_t = 1_{s∨t}` (zero when the
//! join is infinite). A finite `F ⊂ P∖{e}` is exhaustive when every
//! nontrivial element of `P` has a lower bound in `F`; in that case the
//! telescoping product `∏_{a∈F}(1_x − 1_{xa})` collapses to the point mass
//! at `x`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::monoid::{Elem, JoinResult, Monoid, MonoidKind};

/// A finite formal ℚ-linear combination of basis indicators `1_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorElement {
    monoid: Monoid,
    terms: BTreeMap<Elem, BigRational>,
}

impl IndicatorElement {
    pub fn zero(monoid: Monoid) -> IndicatorElement {
        IndicatorElement {
            monoid,
            terms: BTreeMap::new(),
        }
    }

    /// The basis indicator `1_s`.
    pub fn basis(monoid: Monoid, s: Elem) -> IndicatorElement {
        monoid.check(&s);
        let mut terms = BTreeMap::new();
        terms.insert(s, BigRational::one());
        IndicatorElement { monoid, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Elem, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, s: &Elem, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let next = match self.terms.get(s) {
            Some(c) => c + coeff,
            None => coeff.clone(),
        };
        if next.is_zero() {
            self.terms.remove(s);
        } else {
            self.terms.insert(s.clone(), next);
        }
    }

    pub fn add(&self, rhs: &IndicatorElement) -> IndicatorElement {
        assert_eq!(self.monoid, rhs.monoid, "instance mismatch");
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(s, c);
        }
        out
    }

    pub fn sub(&self, rhs: &IndicatorElement) -> IndicatorElement {
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(s, &-c.clone());
        }
        out
    }

    /// Bilinear extension of `1_s·1_t = 1_{s∨t}`, dropping infinite joins.
    pub fn mul(&self, rhs: &IndicatorElement) -> IndicatorElement {
        assert_eq!(self.monoid, rhs.monoid, "instance mismatch");
        let mut out = IndicatorElement::zero(self.monoid);
        for (s, c1) in &self.terms {
            for (t, c2) in &rhs.terms {
                if let JoinResult::Finite(j) = self.monoid.join(s, t) {
                    out.add_term(&j, &(c1 * c2));
                }
            }
        }
        out
    }

    /// Pointwise value at `t`, extending `eval(1_s, t) = [s ≤ t]` linearly.
    pub fn eval(&self, t: &Elem) -> BigRational {
        let mut total = BigRational::zero();
        for (s, c) in &self.terms {
            if self.monoid.leq(s, t) {
                total += c;
            }
        }
        total
    }
}

impl fmt::Display for IndicatorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let minus_c = -c.clone();
            if i == 0 {
                if c.is_one() {
                    write!(f, "1_{{{s}}}")?;
                } else if minus_c.is_one() {
                    write!(f, "-1_{{{s}}}")?;
                } else {
                    write!(f, "{c}*1_{{{s}}}")?;
                }
            } else if minus_c.is_one() {
                write!(f, " - 1_{{{s}}}")?;
            } else if c.is_one() {
                write!(f, " + 1_{{{s}}}")?;
            } else if minus_c > BigRational::zero() {
                write!(f, " - {minus_c}*1_{{{s}}}")?;
            } else {
                write!(f, " + {c}*1_{{{s}}}")?;
            }
        }
        Ok(())
    }
}

/// A validated finite set of strictly positive elements: nonempty, inside
/// the instance, identity-free, deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundSet {
    monoid: Monoid,
    elements: Vec<Elem>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LowerBoundSetError {
    #[error("a lower-bound set must be nonempty")]
    Empty,
    #[error("the identity is not a strictly positive element")]
    ContainsIdentity,
}

impl LowerBoundSet {
    pub fn new(monoid: Monoid, elements: Vec<Elem>) -> Result<LowerBoundSet, LowerBoundSetError> {
        if elements.is_empty() {
            return Err(LowerBoundSetError::Empty);
        }
        let mut sorted = elements;
        for e in &sorted {
            monoid.check(e);
            if monoid.is_identity(e) {
                return Err(LowerBoundSetError::ContainsIdentity);
            }
        }
        sorted.sort();
        sorted.dedup();
        Ok(LowerBoundSet {
            monoid,
            elements: sorted,
        })
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest size of a member, for margin computations.
    pub fn max_size(&self) -> u32 {
        self.elements
            .iter()
            .map(|e| self.monoid.size(e))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for LowerBoundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Expansion of `∏_{a∈F}(1_x − 1_{xa})` by the product rule.
pub fn chi_product(monoid: &Monoid, x: &Elem, f: &LowerBoundSet) -> IndicatorElement {
    assert_eq!(*monoid, *f.monoid(), "instance mismatch");
    monoid.check(x);
    let mut acc = IndicatorElement::basis(*monoid, x.clone());
    let mut first = true;
    for a in f.elements() {
        let factor = IndicatorElement::basis(*monoid, x.clone())
            .sub(&IndicatorElement::basis(*monoid, monoid.compose(x, a)));
        if first {
            acc = factor;
            first = false;
        } else {
            acc = acc.mul(&factor);
        }
    }
    acc
}

/// Outcome of checking a candidate lower-bound set against a ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FesspeVerdict {
    /// Every nontrivial ball element had a lower bound in the set; the
    /// check is exhaustive only up to the stated size.
    VerifiedUpTo(u32),
    /// A nontrivial element with no lower bound in the set.
    Counterexample(Elem),
    /// Exhaustivity holds for structural reasons: a free monoid whose
    /// candidate contains every generator (each nonempty word starts with
    /// one).
    StructurallyVerified,
}

impl FesspeVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, FesspeVerdict::Counterexample(_))
    }
}

impl fmt::Display for FesspeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FesspeVerdict::VerifiedUpTo(n) => write!(f, "verified up to size {n}"),
            FesspeVerdict::Counterexample(e) => write!(f, "counterexample {e}"),
            FesspeVerdict::StructurallyVerified => write!(f, "structurally verified"),
        }
    }
}

/// Does every element of `enumerate_ball(bound) ∖ {e}` have a lower bound
/// in `f`? Scans in ball order and reports the first failure.
pub fn is_fesspe(monoid: &Monoid, f: &LowerBoundSet, bound: u32) -> FesspeVerdict {
    assert_eq!(*monoid, *f.monoid(), "instance mismatch");
    if let MonoidKind::FreeMonoid { .. } = monoid.kind() {
        let gens = monoid.generators();
        if gens.iter().all(|g| f.elements().contains(g)) {
            return FesspeVerdict::StructurallyVerified;
        }
    }
    for p in monoid.enumerate_ball(bound) {
        if monoid.is_identity(&p) {
            continue;
        }
        if !f.elements().iter().any(|a| monoid.leq(a, &p)) {
            return FesspeVerdict::Counterexample(p);
        }
    }
    FesspeVerdict::VerifiedUpTo(bound)
}

/// One failure of the point-mass identity: the expansion evaluated at `y`
/// differs from `[y == x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiViolation {
    pub x: Elem,
    pub y: Elem,
    pub got: BigRational,
    pub expected: BigRational,
}

/// Pointwise check of the point-mass identity over a ball: for every `x`
/// and `y`, the expansion of `∏_{a∈F}(1_x − 1_{xa})` evaluates at `y` to 1
/// when `y = x` and to 0 otherwise.
pub fn verify_chi_formula(
    monoid: &Monoid,
    f: &LowerBoundSet,
    bound: u32,
) -> Result<u64, ChiViolation> {
    let ball = monoid.enumerate_ball(bound);
    let mut cases = 0;
    for x in &ball {
        let chi = chi_product(monoid, x, f);
        for y in &ball {
            cases += 1;
            let got = chi.eval(y);
            let expected = if y == x {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            if got != expected {
                return Err(ChiViolation {
                    x: x.clone(),
                    y: y.clone(),
                    got,
                    expected,
                });
            }
        }
    }
    Ok(cases)
}

/// Search the ball for exhaustive candidate sets, by size then
/// lexicographically; returns the first passing candidate.
pub fn find_fesspe(monoid: &Monoid, max_size: usize, bound: u32) -> Option<LowerBoundSet> {
    let ball: Vec<Elem> = monoid
        .enumerate_ball(bound)
        .into_iter()
        .filter(|e| !monoid.is_identity(e))
        .collect();
    for size in 1..=max_size.min(ball.len()) {
        let mut indices: Vec<usize> = (0..size).collect();
        'combos: loop {
            let candidate: Vec<Elem> = indices.iter().map(|&i| ball[i].clone()).collect();
            let set = LowerBoundSet::new(*monoid, candidate).expect("ball excludes identity");
            if is_fesspe(monoid, &set, bound).passed() {
                return Some(set);
            }
            let mut i = size;
            while i > 0 {
                i -= 1;
                if indices[i] + (size - i) < ball.len() {
                    indices[i] += 1;
                    for j in i + 1..size {
                        indices[j] = indices[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_elem;

    fn fm() -> Monoid {
        Monoid::free_monoid(2)
    }

    fn set(m: &Monoid, elems: &[&str]) -> LowerBoundSet {
        LowerBoundSet::new(
            *m,
            elems.iter().map(|s| parse_elem(m, s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = fm();
        let one_a = IndicatorElement::basis(m, parse_elem(&m, "a").unwrap());
        assert_eq!(one_a.eval(&parse_elem(&m, "ab").unwrap()), BigRational::one());
        assert_eq!(one_a.eval(&parse_elem(&m, "b").unwrap()), BigRational::zero());
        let one_e = IndicatorElement::basis(m, m.identity());
        for t in m.enumerate_ball(3) {
            assert_eq!(one_e.eval(&t), BigRational::one());
        }
    }

    #[test]
    fn product_rule_is_pointwise_product() {
        for m in [fm(), Monoid::free_abelian(2), Monoid::divisibility()] {
            let ball = m.enumerate_ball(3);
            for s in &ball {
                for t in &ball {
                    let p = IndicatorElement::basis(m, s.clone())
                        .mul(&IndicatorElement::basis(m, t.clone()));
                    for y in &ball {
                        let lhs = p.eval(y);
                        let rhs = IndicatorElement::basis(m, s.clone()).eval(y)
                            * IndicatorElement::basis(m, t.clone()).eval(y);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn chi_expansion_examples() {
        let m = fm();
        let f = set(&m, &["a", "b"]);
        // The cross term dies because a∨b = ∞.
        let chi = chi_product(&m, &m.identity(), &f);
        let expected = IndicatorElement::basis(m, parse_elem(&m, "e").unwrap())
            .sub(&IndicatorElement::basis(m, parse_elem(&m, "a").unwrap()))
            .sub(&IndicatorElement::basis(m, parse_elem(&m, "b").unwrap()));
        assert_eq!(chi, expected);
        assert_eq!(chi.eval(&m.identity()), BigRational::one());
        assert_eq!(chi.eval(&parse_elem(&m, "a").unwrap()), BigRational::zero());
        assert_eq!(chi.eval(&parse_elem(&m, "ab").unwrap()), BigRational::zero());

        let nat = Monoid::free_abelian(1);
        let f1 = set(&nat, &["1"]);
        let chi0 = chi_product(&nat, &nat.identity(), &f1);
        let expected0 = IndicatorElement::basis(nat, parse_elem(&nat, "0").unwrap())
            .sub(&IndicatorElement::basis(nat, parse_elem(&nat, "1").unwrap()));
        assert_eq!(chi0, expected0);
    }

    #[test]
    fn chi_expansion_matches_pointwise_factor_product() {
        // Dual route: the expanded combination must evaluate like the
        // literal product of factor evaluations.
        for (m, f) in [
            (fm(), set(&fm(), &["a", "b"])),
            (Monoid::free_abelian(2), {
                let m = Monoid::free_abelian(2);
                set(&m, &["(1,0)", "(0,1)"])
            }),
        ] {
            let ball = m.enumerate_ball(4);
            for x in &ball {
                let chi = chi_product(&m, x, &f);
                for y in &ball {
                    let mut direct = BigRational::one();
                    for a in f.elements() {
                        let one_x = IndicatorElement::basis(m, x.clone()).eval(y);
                        let one_xa =
                            IndicatorElement::basis(m, m.compose(x, a)).eval(y);
                        direct *= one_x - one_xa;
                    }
                    assert_eq!(chi.eval(y), direct, "x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn rejects_identity_and_empty() {
        let m = fm();
        assert_eq!(
            LowerBoundSet::new(m, vec![]).unwrap_err(),
            LowerBoundSetError::Empty
        );
        assert_eq!(
            LowerBoundSet::new(m, vec![m.identity()]).unwrap_err(),
            LowerBoundSetError::ContainsIdentity
        );
    }

    #[test]
    fn fesspe_verdicts() {
        let m = fm();
        assert_eq!(
            is_fesspe(&m, &set(&m, &["a", "b"]), 6),
            FesspeVerdict::StructurallyVerified
        );
        let dv = Monoid::divisibility();
        assert_eq!(
            is_fesspe(&dv, &set(&dv, &["2", "3", "5"]), 10),
            FesspeVerdict::Counterexample(Elem::Integer(7))
        );
        let nat = Monoid::free_abelian(1);
        assert_eq!(
            is_fesspe(&nat, &set(&nat, &["1"]), 100),
            FesspeVerdict::VerifiedUpTo(100)
        );
    }

    #[test]
    fn chi_formula_reports() {
        let m = fm();
        assert!(verify_chi_formula(&m, &set(&m, &["a", "b"]), 4).is_ok());
        let nat = Monoid::free_abelian(1);
        assert!(verify_chi_formula(&nat, &set(&nat, &["1"]), 20).is_ok());

        let hl = Monoid::half_line(4);
        let f = set(&hl, &["1", "3/2"]);
        let violation = verify_chi_formula(&hl, &f, 4).unwrap_err();
        assert_eq!(violation.y, parse_elem(&hl, "5/4").unwrap());
        // Sibling check: the same gap shows up as a counterexample.
        assert_eq!(
            is_fesspe(&hl, &f, 4),
            FesspeVerdict::Counterexample(parse_elem(&hl, "5/4").unwrap())
        );
    }

    #[test]
    fn fesspe_equivalence_at_finite_level() {
        // is_fesspe at bound n agrees with the chi formula at the margin
        // bound n − max_size(F).
        let cases: Vec<(Monoid, LowerBoundSet)> = vec![
            (fm(), set(&fm(), &["a", "b"])),
            (fm(), set(&fm(), &["a"])),
            (Monoid::divisibility(), {
                let dv = Monoid::divisibility();
                set(&dv, &["2", "3", "5"])
            }),
            (Monoid::free_abelian(1), {
                let nat = Monoid::free_abelian(1);
                set(&nat, &["2"])
            }),
        ];
        let n = 8;
        for (m, f) in cases {
            let margin = n - f.max_size();
            let fesspe_ok = is_fesspe(&m, &f, n).passed();
            let chi_ok = verify_chi_formula(&m, &f, margin).is_ok();
            assert_eq!(fesspe_ok, chi_ok, "{} with F={f}", m.describe());
        }
    }

    #[test]
    fn search_finds_generators() {
        let m = fm();
        let found = find_fesspe(&m, 2, 6).unwrap();
        assert_eq!(found, set(&m, &["a", "b"]));
        let dv = Monoid::divisibility();
        assert_eq!(find_fesspe(&dv, 2, 8), None);
        let nat = Monoid::free_abelian(1);
        assert_eq!(find_fesspe(&nat, 2, 6).unwrap(), set(&nat, &["1"]));
    }
}
