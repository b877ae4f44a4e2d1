//! Positive cones of quasi-lattice ordered groups, with exact order operations.
//!
//! A [`Monoid`] is the positive cone `P` of a quasi-lattice ordered group
//! `(G, P)`: the left-invariant order is `p ≤ q` iff `p⁻¹q ∈ P`, and any two
//! elements either have a least common upper bound in `P` (their join) or no
//! common upper bound at all. Four concrete cones are provided:
//!
//! * `free_monoid(rank)` — words over `rank` letters, prefix order;
//! * `free_abelian(rank)` — `ℕ^rank` under addition, componentwise order;
//! * `divisibility` — positive integers under multiplication, divisor order;
//! * `half_line(d)` — `{0} ∪ [1, ∞)` inside `(ℚ, +)`, with enumeration
//!   restricted to denominators at most `d`.
//!
//! All arithmetic is exact; joins that do not exist are the value
//! [`JoinResult::Infinity`], never an error.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

/// Identifies one of the supported positive cones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MonoidKind {
    /// Free monoid on `rank` generators (1 ≤ rank ≤ 26).
    FreeMonoid { rank: u8 },
    /// Free abelian monoid `ℕ^rank` (1 ≤ rank ≤ 8).
    FreeAbelian { rank: u8 },
    /// Positive integers under multiplication, ordered by divisibility.
    Divisibility,
    /// `{0} ∪ ([1,∞) ∩ ℚ)` under addition; `max_denominator` bounds enumeration only.
    HalfLine { max_denominator: u32 },
}

/// A positive cone with its order operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monoid {
    kind: MonoidKind,
}

/// An element of a cone. The payload determines the instance family;
/// mixing payloads across instances is a programming error and asserts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    /// Word over letter indices `0..rank`; empty word is the identity.
    Word(Vec<u8>),
    /// Vector in `ℕ^rank`.
    Vector(Vec<u64>),
    /// Positive integer (≥ 1).
    Integer(u64),
    /// Exact rational that is 0 or ≥ 1.
    Rational(BigRational),
}

/// Least common upper bound of two cone elements, or the absence of any
/// common upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinResult {
    Finite(Elem),
    Infinity,
}

impl JoinResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, JoinResult::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Elem> {
        match self {
            JoinResult::Finite(e) => Some(e),
            JoinResult::Infinity => None,
        }
    }
}

/// Instance-canonical form of a formal quotient `st⁻¹` with `s, t ∈ P`.
///
/// Two quotients get the same label exactly when they agree as group
/// elements: common-suffix stripping for words, componentwise subtraction
/// for vectors, reduced fractions for divisibility, differences for the
/// half line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuotientLabel {
    /// `s·t⁻¹` with `s` and `t` sharing no common suffix.
    WordPair { s: Vec<u8>, t: Vec<u8> },
    /// Element of `ℤ^rank`.
    IntVector(Vec<i64>),
    /// Reduced positive fraction `num/den`.
    Fraction { num: u64, den: u64 },
    /// Element of `(ℚ, +)`.
    Rational(BigRational),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapabilityError {
    #[error("instance {0} does not support least upper bounds of quotients")]
    LubUnsupported(String),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    (a / gcd(a, b)).checked_mul(b).expect("lcm overflow")
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Monoid {
    pub fn free_monoid(rank: u8) -> Monoid {
        assert!((1..=26).contains(&rank), "free monoid rank must be 1..=26");
        Monoid {
            kind: MonoidKind::FreeMonoid { rank },
        }
    }

    pub fn free_abelian(rank: u8) -> Monoid {
        assert!((1..=8).contains(&rank), "free abelian rank must be 1..=8");
        Monoid {
            kind: MonoidKind::FreeAbelian { rank },
        }
    }

    pub fn divisibility() -> Monoid {
        Monoid {
            kind: MonoidKind::Divisibility,
        }
    }

    pub fn half_line(max_denominator: u32) -> Monoid {
        assert!(max_denominator >= 1, "denominator bound must be positive");
        Monoid {
            kind: MonoidKind::HalfLine { max_denominator },
        }
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    /// Short human-readable tag, e.g. `free_monoid(rank=2)`.
    pub fn describe(&self) -> String {
        match self.kind {
            MonoidKind::FreeMonoid { rank } => format!("free_monoid(rank={rank})"),
            MonoidKind::FreeAbelian { rank } => format!("free_abelian(rank={rank})"),
            MonoidKind::Divisibility => "divisibility".to_string(),
            MonoidKind::HalfLine { max_denominator } => {
                format!("half_line(max_denominator={max_denominator})")
            }
        }
    }

    /// True when every quotient label bounded above in `P` has a least
    /// upper bound there. The half line lacks this: an element of
    /// `(0, 1)` has upper bounds `[x+1, ∞)` with no least one.
    pub fn supports_lub_of_quotient(&self) -> bool {
        !matches!(self.kind, MonoidKind::HalfLine { .. })
    }

    /// True when `enumerate_ball` exhausts every element of `P` up to the
    /// size bound. The half line enumerates only a denominator-bounded slice.
    pub fn supports_complete_enumeration(&self) -> bool {
        !matches!(self.kind, MonoidKind::HalfLine { .. })
    }

    /// Panics unless `e` has the payload shape of this instance.
    pub fn check(&self, e: &Elem) {
        match (&self.kind, e) {
            (MonoidKind::FreeMonoid { rank }, Elem::Word(w)) => {
                assert!(
                    w.iter().all(|&l| l < *rank),
                    "letter out of range for rank-{rank} free monoid"
                );
            }
            (MonoidKind::FreeAbelian { rank }, Elem::Vector(v)) => {
                assert_eq!(v.len(), *rank as usize, "vector rank mismatch");
            }
            (MonoidKind::Divisibility, Elem::Integer(n)) => {
                assert!(*n >= 1, "divisibility elements are positive integers");
            }
            (MonoidKind::HalfLine { .. }, Elem::Rational(r)) => {
                assert!(
                    r.is_zero() || *r >= BigRational::one(),
                    "half-line elements are 0 or at least 1"
                );
            }
            _ => panic!(
                "element {e} does not belong to instance {}",
                self.describe()
            ),
        }
    }

    pub fn identity(&self) -> Elem {
        match self.kind {
            MonoidKind::FreeMonoid { .. } => Elem::Word(vec![]),
            MonoidKind::FreeAbelian { rank } => Elem::Vector(vec![0; rank as usize]),
            MonoidKind::Divisibility => Elem::Integer(1),
            MonoidKind::HalfLine { .. } => Elem::Rational(BigRational::zero()),
        }
    }

    pub fn is_identity(&self, e: &Elem) -> bool {
        *e == self.identity()
    }

    /// Generating set, for the finitely generated instances.
    pub fn generators(&self) -> Vec<Elem> {
        match self.kind {
            MonoidKind::FreeMonoid { rank } => {
                (0..rank).map(|l| Elem::Word(vec![l])).collect()
            }
            MonoidKind::FreeAbelian { rank } => (0..rank as usize)
                .map(|i| {
                    let mut v = vec![0; rank as usize];
                    v[i] = 1;
                    Elem::Vector(v)
                })
                .collect(),
            MonoidKind::Divisibility | MonoidKind::HalfLine { .. } => vec![],
        }
    }

    /// The semigroup product `pq`.
    pub fn compose(&self, p: &Elem, q: &Elem) -> Elem {
        self.check(p);
        self.check(q);
        match (p, q) {
            (Elem::Word(a), Elem::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Elem::Word(w)
            }
            (Elem::Vector(a), Elem::Vector(b)) => {
                Elem::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Elem::Integer(a), Elem::Integer(b)) => {
                Elem::Integer(a.checked_mul(*b).expect("integer overflow in compose"))
            }
            (Elem::Rational(a), Elem::Rational(b)) => Elem::Rational(a + b),
            _ => unreachable!(),
        }
    }

    /// `p⁻¹q` when `p ≤ q`, absent otherwise. When present,
    /// `compose(p, result) == q`.
    pub fn left_divide(&self, p: &Elem, q: &Elem) -> Option<Elem> {
        self.check(p);
        self.check(q);
        match (p, q) {
            (Elem::Word(a), Elem::Word(b)) => {
                if b.len() >= a.len() && b[..a.len()] == a[..] {
                    Some(Elem::Word(b[a.len()..].to_vec()))
                } else {
                    None
                }
            }
            (Elem::Vector(a), Elem::Vector(b)) => {
                if a.iter().zip(b).all(|(x, y)| x <= y) {
                    Some(Elem::Vector(a.iter().zip(b).map(|(x, y)| y - x).collect()))
                } else {
                    None
                }
            }
            (Elem::Integer(a), Elem::Integer(b)) => {
                if b % a == 0 {
                    Some(Elem::Integer(b / a))
                } else {
                    None
                }
            }
            (Elem::Rational(a), Elem::Rational(b)) => {
                let d = b - a;
                if d.is_zero() || d >= BigRational::one() {
                    Some(Elem::Rational(d))
                } else {
                    None
                }
            }
            _ => unreachable!(),
        }
    }

    /// The left-invariant partial order `p ≤ q` iff `p⁻¹q ∈ P`.
    pub fn leq(&self, p: &Elem, q: &Elem) -> bool {
        self.left_divide(p, q).is_some()
    }

    /// Least common upper bound in `P`, or `Infinity` when no common upper
    /// bound exists.
    pub fn join(&self, p: &Elem, q: &Elem) -> JoinResult {
        self.check(p);
        self.check(q);
        match (p, q) {
            (Elem::Word(_), Elem::Word(_)) => {
                // Words are comparable exactly when one is a prefix of the other.
                if self.leq(p, q) {
                    JoinResult::Finite(q.clone())
                } else if self.leq(q, p) {
                    JoinResult::Finite(p.clone())
                } else {
                    JoinResult::Infinity
                }
            }
            (Elem::Vector(a), Elem::Vector(b)) => JoinResult::Finite(Elem::Vector(
                a.iter().zip(b).map(|(x, y)| *x.max(y)).collect(),
            )),
            (Elem::Integer(a), Elem::Integer(b)) => {
                JoinResult::Finite(Elem::Integer(lcm(*a, *b)))
            }
            (Elem::Rational(a), Elem::Rational(b)) => {
                // For x ≤ᵣ y: the join is y when y − x ∈ P, else y + 1.
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let d = hi - lo;
                if d.is_zero() || d >= BigRational::one() {
                    JoinResult::Finite(Elem::Rational(hi.clone()))
                } else {
                    JoinResult::Finite(Elem::Rational(hi + BigRational::one()))
                }
            }
            _ => unreachable!(),
        }
    }

    /// Canonical label of the formal quotient `st⁻¹ ∈ G`.
    pub fn quotient_label(&self, s: &Elem, t: &Elem) -> QuotientLabel {
        self.check(s);
        self.check(t);
        match (s, t) {
            (Elem::Word(a), Elem::Word(b)) => {
                let mut i = a.len();
                let mut j = b.len();
                while i > 0 && j > 0 && a[i - 1] == b[j - 1] {
                    i -= 1;
                    j -= 1;
                }
                QuotientLabel::WordPair {
                    s: a[..i].to_vec(),
                    t: b[..j].to_vec(),
                }
            }
            (Elem::Vector(a), Elem::Vector(b)) => QuotientLabel::IntVector(
                a.iter().zip(b).map(|(x, y)| *x as i64 - *y as i64).collect(),
            ),
            (Elem::Integer(a), Elem::Integer(b)) => {
                let g = gcd(*a, *b);
                QuotientLabel::Fraction {
                    num: a / g,
                    den: b / g,
                }
            }
            (Elem::Rational(a), Elem::Rational(b)) => QuotientLabel::Rational(a - b),
            _ => unreachable!(),
        }
    }

    /// The label of the identity of `G`.
    pub fn label_identity(&self) -> QuotientLabel {
        let e = self.identity();
        self.quotient_label(&e, &e)
    }

    /// `g ↦ g⁻¹` on labels.
    pub fn label_inverse(&self, g: &QuotientLabel) -> QuotientLabel {
        match g {
            QuotientLabel::WordPair { s, t } => QuotientLabel::WordPair {
                s: t.clone(),
                t: s.clone(),
            },
            QuotientLabel::IntVector(v) => {
                QuotientLabel::IntVector(v.iter().map(|x| -x).collect())
            }
            QuotientLabel::Fraction { num, den } => QuotientLabel::Fraction {
                num: *den,
                den: *num,
            },
            QuotientLabel::Rational(r) => QuotientLabel::Rational(-r),
        }
    }

    /// The group product `g·h`, as a label when the result stays in `PP⁻¹`.
    /// Only the free monoid can leave `PP⁻¹`; the other instances have
    /// `G = PP⁻¹`.
    pub fn label_mul(&self, g: &QuotientLabel, h: &QuotientLabel) -> Option<QuotientLabel> {
        match (g, h) {
            (
                QuotientLabel::WordPair { s: s1, t: t1 },
                QuotientLabel::WordPair { s: s2, t: t2 },
            ) => {
                // s1 t1⁻¹ s2 t2⁻¹: cancel t1 against s2.
                if t1.len() <= s2.len() && s2[..t1.len()] == t1[..] {
                    let mut s = s1.clone();
                    s.extend_from_slice(&s2[t1.len()..]);
                    Some(self.word_label(s, t2.clone()))
                } else if s2.len() <= t1.len() && t1[..s2.len()] == s2[..] {
                    let mut t = t2.clone();
                    t.extend_from_slice(&t1[s2.len()..]);
                    Some(self.word_label(s1.clone(), t))
                } else {
                    None
                }
            }
            (QuotientLabel::IntVector(a), QuotientLabel::IntVector(b)) => Some(
                QuotientLabel::IntVector(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (
                QuotientLabel::Fraction { num: n1, den: d1 },
                QuotientLabel::Fraction { num: n2, den: d2 },
            ) => {
                let num = n1.checked_mul(*n2).expect("fraction overflow");
                let den = d1.checked_mul(*d2).expect("fraction overflow");
                let g = gcd(num, den);
                Some(QuotientLabel::Fraction {
                    num: num / g,
                    den: den / g,
                })
            }
            (QuotientLabel::Rational(a), QuotientLabel::Rational(b)) => {
                Some(QuotientLabel::Rational(a + b))
            }
            _ => panic!("label instance mismatch"),
        }
    }

    fn word_label(&self, s: Vec<u8>, t: Vec<u8>) -> QuotientLabel {
        match self.quotient_label(&Elem::Word(s), &Elem::Word(t)) {
            l @ QuotientLabel::WordPair { .. } => l,
            _ => unreachable!(),
        }
    }

    /// The cone element represented by `g`, when `g ∈ P`.
    pub fn label_as_element(&self, g: &QuotientLabel) -> Option<Elem> {
        match g {
            QuotientLabel::WordPair { s, t } => {
                t.is_empty().then(|| Elem::Word(s.clone()))
            }
            QuotientLabel::IntVector(v) => v
                .iter()
                .all(|&x| x >= 0)
                .then(|| Elem::Vector(v.iter().map(|&x| x as u64).collect())),
            QuotientLabel::Fraction { num, den } => {
                (*den == 1).then_some(Elem::Integer(*num))
            }
            QuotientLabel::Rational(r) => {
                (r.is_zero() || *r >= BigRational::one()).then(|| Elem::Rational(r.clone()))
            }
        }
    }

    /// The label of a cone element.
    pub fn label_of(&self, p: &Elem) -> QuotientLabel {
        self.quotient_label(p, &self.identity())
    }

    /// The group product `g·y` for `y ∈ P`, returned when it lands in `P`.
    pub fn label_apply(&self, g: &QuotientLabel, y: &Elem) -> Option<Elem> {
        let gy = self.label_mul(g, &self.label_of(y))?;
        self.label_as_element(&gy)
    }

    /// The least element of `P` dominating the quotient `g`, written `σ(g)`.
    /// Satisfies `σ(label(s, e)) = s`.
    pub fn lub_in_p(&self, g: &QuotientLabel) -> Result<Elem, CapabilityError> {
        if !self.supports_lub_of_quotient() {
            return Err(CapabilityError::LubUnsupported(self.describe()));
        }
        Ok(match g {
            QuotientLabel::WordPair { s, .. } => Elem::Word(s.clone()),
            QuotientLabel::IntVector(v) => {
                Elem::Vector(v.iter().map(|&x| x.max(0) as u64).collect())
            }
            QuotientLabel::Fraction { num, .. } => Elem::Integer(*num),
            QuotientLabel::Rational(_) => unreachable!(),
        })
    }

    /// Size measure used by `enumerate_ball`: word length, coordinate sum,
    /// integer value, or the rational rounded up.
    pub fn size(&self, e: &Elem) -> u32 {
        self.check(e);
        match e {
            Elem::Word(w) => w.len() as u32,
            Elem::Vector(v) => v.iter().sum::<u64>() as u32,
            Elem::Integer(n) => *n as u32,
            Elem::Rational(r) => {
                let c = r.ceil();
                c.numer().try_into().unwrap_or(u32::MAX)
            }
        }
    }

    /// All elements of size at most `n`, as a duplicate-free hereditary set
    /// in a canonical order compatible with the cone order (`s ≤ t` implies
    /// `s` is listed before `t`).
    pub fn enumerate_ball(&self, n: u32) -> Vec<Elem> {
        match self.kind {
            MonoidKind::FreeMonoid { rank } => {
                let mut out = vec![];
                let mut level: Vec<Vec<u8>> = vec![vec![]];
                out.push(Elem::Word(vec![]));
                for _ in 0..n {
                    let mut next = vec![];
                    for w in &level {
                        for l in 0..rank {
                            let mut v = w.clone();
                            v.push(l);
                            next.push(v);
                        }
                    }
                    next.sort();
                    out.extend(next.iter().cloned().map(Elem::Word));
                    level = next;
                }
                out
            }
            MonoidKind::FreeAbelian { rank } => {
                let mut out = vec![];
                for total in 0..=n {
                    let mut acc = vec![];
                    compositions(total as u64, rank as usize, &mut vec![], &mut acc);
                    acc.sort();
                    out.extend(acc.into_iter().map(Elem::Vector));
                }
                out
            }
            MonoidKind::Divisibility => (1..=n.max(1) as u64).map(Elem::Integer).collect(),
            MonoidKind::HalfLine { max_denominator } => {
                let mut set = std::collections::BTreeSet::new();
                set.insert(BigRational::zero());
                for den in 1..=max_denominator as i64 {
                    let mut num = den;
                    while rational(num, den) <= rational(n as i64, 1) {
                        set.insert(rational(num, den));
                        num += 1;
                    }
                }
                set.into_iter().map(Elem::Rational).collect()
            }
        }
    }

    /// Every `s ∈ P` with `s ≤ t` (for the half line: every such `s` with
    /// denominator within the configured bound), sorted canonically.
    pub fn lower_set(&self, t: &Elem) -> Vec<Elem> {
        self.check(t);
        match (self.kind, t) {
            (MonoidKind::FreeMonoid { .. }, Elem::Word(w)) => {
                (0..=w.len()).map(|k| Elem::Word(w[..k].to_vec())).collect()
            }
            (MonoidKind::FreeAbelian { .. }, Elem::Vector(v)) => {
                let mut acc = vec![vec![]];
                for &c in v {
                    let mut next = vec![];
                    for prefix in &acc {
                        for x in 0..=c {
                            let mut p = prefix.clone();
                            p.push(x);
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                let mut out: Vec<Elem> = acc.into_iter().map(Elem::Vector).collect();
                out.sort_by_key(|e| match e {
                    Elem::Vector(v) => (v.iter().sum::<u64>(), v.clone()),
                    _ => unreachable!(),
                });
                out
            }
            (MonoidKind::Divisibility, Elem::Integer(m)) => {
                let mut out: Vec<u64> = (1..=*m).filter(|d| m % d == 0).collect();
                out.sort_unstable();
                out.into_iter().map(Elem::Integer).collect()
            }
            (MonoidKind::HalfLine { max_denominator }, Elem::Rational(r)) => {
                let mut set = std::collections::BTreeSet::new();
                set.insert(BigRational::zero());
                set.insert(r.clone());
                let cap = r - BigRational::one();
                for den in 1..=max_denominator as i64 {
                    let mut num = den;
                    while rational(num, den) <= cap {
                        set.insert(rational(num, den));
                        num += 1;
                    }
                }
                set.into_iter().map(Elem::Rational).collect()
            }
            _ => unreachable!(),
        }
    }
}

fn compositions(total: u64, parts: usize, prefix: &mut Vec<u64>, acc: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        let mut v = prefix.clone();
        v.push(total);
        acc.push(v);
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, acc);
        prefix.pop();
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Word(w) => {
                if w.is_empty() {
                    write!(f, "e")
                } else {
                    for &l in w {
                        write!(f, "{}", (b'a' + l) as char)?;
                    }
                    Ok(())
                }
            }
            Elem::Vector(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    write!(f, "(")?;
                    for (i, x) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{x}")?;
                    }
                    write!(f, ")")
                }
            }
            Elem::Integer(n) => write!(f, "{n}"),
            Elem::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Display for QuotientLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientLabel::WordPair { s, t } => {
                if t.is_empty() {
                    write!(f, "{}", Elem::Word(s.clone()))
                } else {
                    write!(
                        f,
                        "{}*{}^-1",
                        Elem::Word(s.clone()),
                        Elem::Word(t.clone())
                    )
                }
            }
            QuotientLabel::IntVector(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    write!(f, "(")?;
                    for (i, x) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{x}")?;
                    }
                    write!(f, ")")
                }
            }
            QuotientLabel::Fraction { num, den } => {
                if *den == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            QuotientLabel::Rational(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(m: &Monoid, s: &str) -> Elem {
        crate::parse::parse_elem(m, s).unwrap()
    }

    /// Brute-force join: scan a ball for common upper bounds and insist one
    /// of them divides all the others. Independent of `Monoid::join`.
    fn join_oracle(m: &Monoid, p: &Elem, q: &Elem, ball: &[Elem]) -> Option<Elem> {
        let ubs: Vec<&Elem> = ball
            .iter()
            .filter(|u| m.leq(p, u) && m.leq(q, u))
            .collect();
        let least = ubs
            .iter()
            .find(|j| ubs.iter().all(|u| m.leq(j, u)))?;
        Some((*least).clone())
    }

    #[test]
    fn compose_examples() {
        let fm = Monoid::free_monoid(2);
        assert_eq!(
            fm.compose(&word(&fm, "a"), &word(&fm, "b")),
            word(&fm, "ab")
        );
        let ab = Monoid::free_abelian(2);
        assert_eq!(
            ab.compose(&Elem::Vector(vec![1, 0]), &Elem::Vector(vec![0, 2])),
            Elem::Vector(vec![1, 2])
        );
        let dv = Monoid::divisibility();
        assert_eq!(
            dv.compose(&Elem::Integer(4), &Elem::Integer(6)),
            Elem::Integer(24)
        );
    }

    #[test]
    fn left_divide_examples() {
        let fm = Monoid::free_monoid(2);
        assert_eq!(
            fm.left_divide(&word(&fm, "a"), &word(&fm, "ab")),
            Some(word(&fm, "b"))
        );
        assert_eq!(fm.left_divide(&word(&fm, "a"), &word(&fm, "ba")), None);
        let hl = Monoid::half_line(4);
        assert_eq!(
            hl.left_divide(&Elem::Rational(rational(3, 2)), &Elem::Rational(rational(3, 1))),
            Some(Elem::Rational(rational(3, 2)))
        );
    }

    #[test]
    fn join_examples() {
        let fm = Monoid::free_monoid(2);
        assert_eq!(fm.join(&word(&fm, "a"), &word(&fm, "b")), JoinResult::Infinity);
        let dv = Monoid::divisibility();
        assert_eq!(
            dv.join(&Elem::Integer(4), &Elem::Integer(6)),
            JoinResult::Finite(Elem::Integer(12))
        );
    }

    #[test]
    fn half_line_join_matches_brute_force() {
        let hl = Monoid::half_line(4);
        // Spec example: join(3/2, 7/4) = 11/4, brute-forced over the
        // denominator-4 ball up to 8.
        let p = Elem::Rational(rational(3, 2));
        let q = Elem::Rational(rational(7, 4));
        let ball = hl.enumerate_ball(8);
        let expected = join_oracle(&hl, &p, &q, &ball).unwrap();
        assert_eq!(expected, Elem::Rational(rational(11, 4)));
        assert_eq!(hl.join(&p, &q), JoinResult::Finite(expected));

        // Cross-check the closed form on the whole radius-4 ball.
        let small = hl.enumerate_ball(4);
        for p in &small {
            for q in &small {
                match hl.join(p, q) {
                    JoinResult::Finite(j) => {
                        assert_eq!(join_oracle(&hl, p, q, &ball).as_ref(), Some(&j), "{p} v {q}");
                    }
                    JoinResult::Infinity => {
                        assert!(join_oracle(&hl, p, q, &ball).is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn join_is_least_upper_bound_on_balls() {
        // Exhaustive least-upper-bound law, with a 2x margin ball for
        // infinity verdicts.
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
        ] {
            let ball = m.enumerate_ball(3);
            let big = m.enumerate_ball(6);
            for p in &ball {
                for q in &ball {
                    match m.join(p, q) {
                        JoinResult::Finite(j) => {
                            assert!(m.leq(p, &j) && m.leq(q, &j));
                            for u in &big {
                                if m.leq(p, u) && m.leq(q, u) {
                                    assert!(m.leq(&j, u), "{j} should divide {u}");
                                }
                            }
                        }
                        JoinResult::Infinity => {
                            for u in &big {
                                assert!(!(m.leq(p, u) && m.leq(q, u)));
                            }
                        }
                    }
                    assert_eq!(m.join(p, q), m.join(q, p));
                }
                assert_eq!(m.join(p, p), JoinResult::Finite(p.clone()));
                assert_eq!(m.join(&m.identity(), p), JoinResult::Finite(p.clone()));
            }
        }
    }

    #[test]
    fn quotient_label_examples() {
        let fm = Monoid::free_monoid(2);
        assert_eq!(
            fm.quotient_label(&word(&fm, "ab"), &word(&fm, "bb")),
            QuotientLabel::WordPair {
                s: vec![0],
                t: vec![1]
            }
        );
        let ab = Monoid::free_abelian(2);
        assert_eq!(
            ab.quotient_label(&Elem::Vector(vec![3, 1]), &Elem::Vector(vec![1, 1])),
            QuotientLabel::IntVector(vec![2, 0])
        );
        for m in [fm, ab, Monoid::divisibility(), Monoid::half_line(3)] {
            for s in m.enumerate_ball(3) {
                assert_eq!(m.quotient_label(&s, &s), m.label_identity());
            }
        }
    }

    #[test]
    fn quotient_label_right_invariance() {
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
            Monoid::half_line(2),
        ] {
            let ball = m.enumerate_ball(3);
            for s in &ball {
                for t in &ball {
                    for u in &ball {
                        let su = m.compose(s, u);
                        let tu = m.compose(t, u);
                        assert_eq!(
                            m.quotient_label(&su, &tu),
                            m.quotient_label(s, t),
                            "label({su},{tu}) != label({s},{t})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lub_examples() {
        let ab = Monoid::free_abelian(2);
        assert_eq!(
            ab.lub_in_p(&QuotientLabel::IntVector(vec![1, -2])).unwrap(),
            Elem::Vector(vec![1, 0])
        );
        assert_eq!(
            ab.lub_in_p(&QuotientLabel::IntVector(vec![0, 0])).unwrap(),
            Elem::Vector(vec![0, 0])
        );
        let hl = Monoid::half_line(2);
        assert!(hl.lub_in_p(&QuotientLabel::Rational(rational(1, 2))).is_err());
    }

    #[test]
    fn lub_is_least_upper_bound_of_quotient() {
        // Oracle: u ∈ ball is an upper bound of g iff g⁻¹u ∈ P; the lub must
        // be an upper bound dividing all of them. Checks σ(label(a,b)) = a.
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
        ] {
            let ball = m.enumerate_ball(3);
            let big = m.enumerate_ball(6);
            for s in &ball {
                for t in &ball {
                    let g = m.quotient_label(s, t);
                    let lub = m.lub_in_p(&g).unwrap();
                    let ginv = m.label_inverse(&g);
                    assert_eq!(m.label_apply(&ginv, &lub), Some(t_part_free(&m, s, t)),);
                    for u in &big {
                        if m.label_apply(&ginv, u).is_some() {
                            assert!(m.leq(&lub, u), "σ({g}) = {lub} must divide {u}");
                        }
                    }
                }
            }
        }
        let fm = Monoid::free_monoid(2);
        let g = fm.quotient_label(&word(&fm, "a"), &word(&fm, "b"));
        assert_eq!(fm.lub_in_p(&g).unwrap(), word(&fm, "a"));
    }

    // σ(g)⁻¹ composed back: g⁻¹·σ(g) is the canonical t-part.
    fn t_part_free(m: &Monoid, s: &Elem, t: &Elem) -> Elem {
        let g = m.quotient_label(s, t);
        match g {
            QuotientLabel::WordPair { t, .. } => Elem::Word(t),
            QuotientLabel::IntVector(v) => {
                Elem::Vector(v.iter().map(|&x| (-x).max(0) as u64).collect())
            }
            QuotientLabel::Fraction { den, .. } => Elem::Integer(den),
            QuotientLabel::Rational(_) => unreachable!(),
        }
    }

    #[test]
    fn ball_counts_and_hereditarity() {
        let fm = Monoid::free_monoid(2);
        let b2 = fm.enumerate_ball(2);
        assert_eq!(b2.len(), 7);
        let ab1 = Monoid::free_abelian(1);
        assert_eq!(ab1.enumerate_ball(3).len(), 4);
        let dv = Monoid::divisibility();
        assert_eq!(dv.enumerate_ball(6).len(), 6);

        for m in [
            fm,
            Monoid::free_abelian(2),
            dv,
            Monoid::half_line(4),
        ] {
            let ball = m.enumerate_ball(4);
            let mut seen = std::collections::BTreeSet::new();
            for (i, t) in ball.iter().enumerate() {
                assert!(seen.insert(t.clone()), "duplicate {t}");
                for s in m.lower_set(t) {
                    let pos = ball.iter().position(|x| *x == s);
                    assert!(pos.is_some(), "{s} ≤ {t} missing from ball");
                    assert!(pos.unwrap() <= i, "{s} must be listed before {t}");
                }
            }
        }
    }

    #[test]
    fn compose_associativity_and_divide_inverse() {
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
            Monoid::half_line(2),
        ] {
            let ball = m.enumerate_ball(2);
            for p in &ball {
                for q in &ball {
                    assert_eq!(m.left_divide(p, &m.compose(p, q)), Some(q.clone()));
                    for r in &ball {
                        assert_eq!(
                            m.compose(&m.compose(p, q), r),
                            m.compose(p, &m.compose(q, r))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn translated_join_identity() {
        // z(a∨b) = za∨zb for z ∈ P, and for z a quotient label whenever
        // both translates stay in P.
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
        ] {
            let ball = m.enumerate_ball(3);
            for z in &ball {
                for a in &ball {
                    for b in &ball {
                        let za = m.compose(z, a);
                        let zb = m.compose(z, b);
                        match (m.join(a, b), m.join(&za, &zb)) {
                            (JoinResult::Finite(j), JoinResult::Finite(zj)) => {
                                assert_eq!(m.compose(z, &j), zj);
                            }
                            (JoinResult::Infinity, JoinResult::Infinity) => {}
                            (l, r) => panic!("join finiteness mismatch: {l:?} vs {r:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn label_mul_and_apply() {
        let fm = Monoid::free_monoid(2);
        let x = fm.quotient_label(&word(&fm, "a"), &word(&fm, "b"));
        // (ab⁻¹)·(ba) = aa
        assert_eq!(fm.label_apply(&x, &word(&fm, "ba")), Some(word(&fm, "aa")));
        // (ab⁻¹)·a leaves PP⁻¹ entirely.
        let xa = fm.label_mul(&x, &fm.label_of(&word(&fm, "a")));
        assert_eq!(xa, None);
        // (ab⁻¹)·b = a.
        assert_eq!(fm.label_apply(&x, &word(&fm, "b")), Some(word(&fm, "a")));

        let dv = Monoid::divisibility();
        let y = dv.quotient_label(&Elem::Integer(4), &Elem::Integer(6)); // 2/3
        assert_eq!(dv.label_apply(&y, &Elem::Integer(9)), Some(Elem::Integer(6)));
        assert_eq!(dv.label_apply(&y, &Elem::Integer(4)), None);
    }

    #[test]
    fn display_roundtrip() {
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(2),
            Monoid::divisibility(),
            Monoid::half_line(3),
        ] {
            for e in m.enumerate_ball(3) {
                let s = e.to_string();
                assert_eq!(crate::parse::parse_elem(&m, &s).unwrap(), e, "{s}");
            }
        }
    }

    #[test]
    #[should_panic(expected = "does not belong")]
    fn instance_mismatch_asserts() {
        let fm = Monoid::free_monoid(2);
        fm.compose(&Elem::Word(vec![0]), &Elem::Integer(3));
    }
}
