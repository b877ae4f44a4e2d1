//! Finite census of the diagonal's spectrum: non-empty hereditary
//! directed subsets of a truncated cone, and the principal points
//! `[e,t] = {s : s ≤ t}`.

use std::fmt;

use thiserror::Error;

use crate::monoid::{Elem, JoinResult, Monoid};

/// Hard guard on the subset scan; the census is a diagnostic, not a
/// bottleneck.
pub const MAX_BALL: usize = 22;

/// A qualifying subset of the ball, with its classification flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub elements: Vec<Elem>,
    pub hereditary: bool,
    pub directed: bool,
    /// Equal to `[e,t] ∩ ball` for some ball element `t`.
    pub principal: Option<Elem>,
}

impl fmt::Display for SpectrumPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")?;
        match &self.principal {
            Some(t) => write!(f, " principal at {t}"),
            None => write!(f, " non-principal"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("ball of size {0} exceeds the subset-scan guard of {MAX_BALL}")]
    BallTooLarge(usize),
}

/// All non-empty hereditary directed subsets of `enumerate_ball(bound)`,
/// classified; principal points come from the intervals `[e,t]`.
pub fn enumerate_spectrum(monoid: &Monoid, bound: u32) -> Result<Vec<SpectrumPoint>, SpectrumError> {
    let ball = monoid.enumerate_ball(bound);
    let n = ball.len();
    if n > MAX_BALL {
        return Err(SpectrumError::BallTooLarge(n));
    }
    // Precomputed tables over ball indices.
    let mut lower_mask = vec![0u32; n];
    for (i, t) in ball.iter().enumerate() {
        for s in monoid.lower_set(t) {
            let j = ball
                .iter()
                .position(|x| *x == s)
                .expect("balls are hereditary");
            lower_mask[i] |= 1 << j;
        }
    }
    let mut join_table = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let JoinResult::Finite(w) = monoid.join(&ball[i], &ball[j]) {
                join_table[i][j] = ball.iter().position(|x| *x == w);
            }
        }
    }
    let mut points = vec![];
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let hereditary = members.iter().all(|&i| lower_mask[i] & !mask == 0);
        if !hereditary {
            continue;
        }
        let directed = members.iter().all(|&i| {
            members.iter().all(|&j| match join_table[i][j] {
                Some(k) => mask & (1 << k) != 0,
                None => false,
            })
        });
        if !directed {
            continue;
        }
        let principal = ball
            .iter()
            .enumerate()
            .find(|(i, _)| lower_mask[*i] == mask)
            .map(|(_, t)| t.clone());
        points.push(SpectrumPoint {
            elements: members.iter().map(|&i| ball[i].clone()).collect(),
            hereditary,
            directed,
            principal,
        });
    }
    Ok(points)
}

/// Fraction of spectrum points that are principal, reported as a pair
/// (principal, total).
pub fn principal_fraction(monoid: &Monoid, bound: u32) -> Result<(usize, usize), SpectrumError> {
    let points = enumerate_spectrum(monoid, bound)?;
    let principal = points.iter().filter(|p| p.principal.is_some()).count();
    Ok((principal, points.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute force: test subsets directly from the order
    /// relation, without the bitmask tables.
    fn census_oracle(monoid: &Monoid, bound: u32) -> usize {
        let ball = monoid.enumerate_ball(bound);
        let n = ball.len();
        let mut count = 0;
        for mask in 1u32..(1 << n) {
            let members: Vec<&Elem> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &ball[i])
                .collect();
            let hereditary = members.iter().all(|t| {
                ball.iter()
                    .filter(|s| monoid.leq(s, t))
                    .all(|s| members.contains(&s))
            });
            let directed = members.iter().all(|x| {
                members.iter().all(|y| {
                    members
                        .iter()
                        .any(|u| monoid.leq(x, u) && monoid.leq(y, u))
                })
            });
            if hereditary && directed {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn nat_census_is_four() {
        let nat = Monoid::free_abelian(1);
        assert_eq!(census_oracle(&nat, 3), 4);
        let points = enumerate_spectrum(&nat, 3).unwrap();
        assert_eq!(points.len(), 4);
        assert!(points.iter().all(|p| p.principal.is_some()));
        assert_eq!(principal_fraction(&nat, 3).unwrap(), (4, 4));
    }

    #[test]
    fn free_monoid_census_is_three() {
        let m = Monoid::free_monoid(2);
        assert_eq!(census_oracle(&m, 1), 3);
        let points = enumerate_spectrum(&m, 1).unwrap();
        assert_eq!(points.len(), 3);
        // {e,a,b} is excluded: a and b have no common upper bound.
        assert!(points.iter().all(|p| p.elements.len() <= 2));
        assert_eq!(principal_fraction(&m, 1).unwrap(), (3, 3));
    }

    #[test]
    fn singleton_ball() {
        let m = Monoid::free_monoid(2);
        let points = enumerate_spectrum(&m, 0).unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].elements, vec![m.identity()]);
    }

    #[test]
    fn oracle_agreement_on_larger_balls() {
        for (m, bound) in [
            (Monoid::free_monoid(2), 2),
            (Monoid::free_abelian(2), 3),
            (Monoid::divisibility(), 8),
            (Monoid::half_line(2), 3),
        ] {
            assert_eq!(
                enumerate_spectrum(&m, bound).unwrap().len(),
                census_oracle(&m, bound),
                "{}",
                m.describe()
            );
        }
    }

    #[test]
    fn principal_points_are_sane() {
        for m in [Monoid::free_monoid(2), Monoid::divisibility()] {
            let ball = m.enumerate_ball(3);
            let points = enumerate_spectrum(&m, 3);
            if m.enumerate_ball(3).len() > MAX_BALL {
                assert!(points.is_err());
                continue;
            }
            let points = points.unwrap();
            // ι is injective on the ball and lands in the census.
            for t in &ball {
                let interval: Vec<&Elem> = ball.iter().filter(|s| m.leq(s, t)).collect();
                let found = points
                    .iter()
                    .filter(|p| p.principal.as_ref() == Some(t))
                    .count();
                assert_eq!(found, 1, "[e,{t}] appears exactly once");
                let point = points
                    .iter()
                    .find(|p| p.principal.as_ref() == Some(t))
                    .unwrap();
                assert_eq!(
                    point.elements.iter().collect::<Vec<_>>(),
                    interval,
                    "[e,{t}]"
                );
            }
        }
    }

    #[test]
    fn guard_rejects_large_balls() {
        let m = Monoid::free_monoid(2);
        assert_eq!(
            enumerate_spectrum(&m, 5).unwrap_err(),
            SpectrumError::BallTooLarge(63)
        );
    }
}
