//! Projection families `p_y`, the four-case commutation law, rank-one
//! elements, the ideal they span, and the converse partition argument.
//!
//! Given an exhaustive lower-bound set `F`, the element
//! `p_y = ∏_{a∈F}(V(y,y) − V(ya,ya))` acts on `ℓ²(P)` as the point mass at
//! `y`. These projections commute past homogeneous elements by
//! `c_x p_y = p_{xy} c_x`, split into four cases by whether `y` and `xy`
//! lie in the cone, and generate the compact operators through the
//! rank-one elements `R(x,y) = T_x p_e T_y*`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::AlgebraElement;
use crate::indicator::LowerBoundSet;
use crate::monoid::{Elem, JoinResult, Monoid};
use crate::monomial::Monomial;
use crate::scalar::Scalar;
use crate::truncation::{truncate, ExactMatrix, Truncation};

/// Inclusion–exclusion expansion of `∏_{a∈F}(V(y,y) − V(ya,ya))`:
/// the sum of `(−1)^|S| V(y·(∨S), y·(∨S))` over subsets with finite join.
pub fn projection(monoid: &Monoid, y: &Elem, f: &LowerBoundSet) -> AlgebraElement {
    assert_eq!(*monoid, *f.monoid(), "instance mismatch");
    monoid.check(y);
    let elems = f.elements();
    assert!(elems.len() <= 16, "lower-bound set too large to expand");
    let mut out = AlgebraElement::zero(*monoid);
    'subsets: for mask in 0u32..(1 << elems.len()) {
        let mut join = monoid.identity();
        for (i, a) in elems.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match monoid.join(&join, a) {
                    JoinResult::Finite(j) => join = j,
                    JoinResult::Infinity => continue 'subsets,
                }
            }
        }
        let sign = if mask.count_ones() % 2 == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        };
        let v = monoid.compose(y, &join);
        out = &out + &AlgebraElement::from_term(*monoid, Monomial::range_projection(v), sign);
    }
    out
}

/// The rank-one element `R(x,y) = V(x,e)·p_e·V(e,y)`; on any truncation
/// containing the boundary terms it is the matrix unit `ε_y ↦ ε_x`.
pub fn rank_one(monoid: &Monoid, x: &Elem, y: &Elem, f: &LowerBoundSet) -> AlgebraElement {
    let e = monoid.identity();
    let tx = AlgebraElement::from_monomial(*monoid, Monomial::pair(x.clone(), e.clone()));
    let ty_star = AlgebraElement::from_monomial(*monoid, Monomial::pair(e.clone(), y.clone()));
    &(&tx * &projection(monoid, &e, f)) * &ty_star
}

/// A point of the group used as the second input of the commutation law.
///
/// Elements of `G` outside `PP⁻¹` have no pair representation, so the
/// cases with `y ∉ P` are driven by structure instead: `NotInP` carries
/// the product `xy` when that lands in the cone (case 3) and nothing when
/// it does not (case 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupPoint {
    /// `y ∈ P`.
    InP(Elem),
    /// `y ∉ P`, with `xy ∈ P` given explicitly or known to be outside.
    NotInP { image: Option<Elem> },
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupPoint::InP(y) => write!(f, "{y}"),
            GroupPoint::NotInP { image: Some(z) } => write!(f, "x^-1*{z} (outside P)"),
            GroupPoint::NotInP { image: None } => write!(f, "generic point outside P"),
        }
    }
}

/// Which of the four cases of the commutation law a cell landed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutationCase {
    /// `y ∈ P`, `xy ∈ P`.
    BothInCone,
    /// `y ∈ P`, `xy ∉ P`: the left side must vanish.
    ImageLeavesCone,
    /// `y ∉ P`, `xy ∈ P`: the right side must vanish.
    ImageEntersCone,
    /// neither in the cone: both sides vanish.
    BothOutside,
}

#[derive(Debug, Clone)]
pub struct CommutationCheck {
    pub case: CommutationCase,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
    pub symbolic_equal: bool,
    /// Equality of the two sides as formal maps on the supplied basis ball.
    pub pointwise_equal: bool,
}

impl CommutationCheck {
    pub fn passed(&self) -> bool {
        self.symbolic_equal && self.pointwise_equal
    }
}

/// Check `c·e_y = e_{xy}·c` for `c = V(p,q)` of degree `x = label(p,q)`,
/// where `e_z` is the projection for `z ∈ P` and zero otherwise.
pub fn verify_commutation(
    monoid: &Monoid,
    p: &Elem,
    q: &Elem,
    y: &GroupPoint,
    f: &LowerBoundSet,
    basis: &[Elem],
) -> CommutationCheck {
    let x = monoid.quotient_label(p, q);
    let c = AlgebraElement::from_monomial(*monoid, Monomial::pair(p.clone(), q.clone()));
    let zero = AlgebraElement::zero(*monoid);
    let (e_y, e_xy, case) = match y {
        GroupPoint::InP(y) => {
            let e_y = projection(monoid, y, f);
            match monoid.label_apply(&x, y) {
                Some(xy) => (
                    e_y,
                    projection(monoid, &xy, f),
                    CommutationCase::BothInCone,
                ),
                None => (e_y, zero.clone(), CommutationCase::ImageLeavesCone),
            }
        }
        GroupPoint::NotInP { image: Some(z) } => {
            // Consistency of the cell: y = x⁻¹z must really lie outside P.
            let xinv = monoid.label_inverse(&x);
            assert!(
                monoid.label_apply(&xinv, z).is_none(),
                "cell is not case 3: x^-1*{z} lies in P"
            );
            (
                zero.clone(),
                projection(monoid, z, f),
                CommutationCase::ImageEntersCone,
            )
        }
        GroupPoint::NotInP { image: None } => {
            (zero.clone(), zero.clone(), CommutationCase::BothOutside)
        }
    };
    let lhs = &c * &e_y;
    let rhs = &e_xy * &c;
    let symbolic_equal = lhs == rhs;
    let pointwise_equal = basis
        .iter()
        .all(|t| lhs.apply_to_basis(t) == rhs.apply_to_basis(t));
    CommutationCheck {
        case,
        lhs,
        rhs,
        symbolic_equal,
        pointwise_equal,
    }
}

/// All commutation cells over a ball for one monomial `V(p,q)`: every
/// `y ∈ P` from the ball (cases 1–2), a case-3 cell for every ball element
/// `z = xy` whose preimage leaves the cone, and the generic case-4 marker.
pub fn commutation_points(monoid: &Monoid, p: &Elem, q: &Elem, ball: &[Elem]) -> Vec<GroupPoint> {
    let x = monoid.quotient_label(p, q);
    let xinv = monoid.label_inverse(&x);
    let mut points: Vec<GroupPoint> = ball.iter().cloned().map(GroupPoint::InP).collect();
    for z in ball {
        if monoid.label_apply(&xinv, z).is_none() {
            points.push(GroupPoint::NotInP {
                image: Some(z.clone()),
            });
        }
    }
    points.push(GroupPoint::NotInP { image: None });
    points
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub context: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} != {}", self.context, self.lhs, self.rhs)
    }
}

fn violation(context: String, lhs: &dyn fmt::Display, rhs: &dyn fmt::Display) -> Violation {
    Violation {
        context,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Matrix-unit relations of the rank-one family, the adjoint symmetry,
/// the intertwining `T_x p_e = p_x T_x`, and `Φ(X*X) = p_y`.
pub fn verify_rank_one_system(
    monoid: &Monoid,
    f: &LowerBoundSet,
    bound: u32,
) -> Result<u64, Violation> {
    let ball = monoid.enumerate_ball(bound);
    let e = monoid.identity();
    let mut cases = 0;
    let p_e = projection(monoid, &e, f);
    if rank_one(monoid, &e, &e, f) != p_e {
        return Err(violation(
            "R(e,e) must be the identity projection".into(),
            &rank_one(monoid, &e, &e, f),
            &p_e,
        ));
    }
    let rank_ones: Vec<(usize, usize, AlgebraElement)> = ball
        .iter()
        .enumerate()
        .flat_map(|(i, x)| {
            ball.iter()
                .enumerate()
                .map(move |(j, y)| (i, j, (x, y)))
                .collect::<Vec<_>>()
        })
        .map(|(i, j, (x, y))| (i, j, rank_one(monoid, x, y, f)))
        .collect();
    for (i, j, rxy) in &rank_ones {
        // adjoint symmetry R(x,y)* = R(y,x)
        let flipped = &rank_ones
            .iter()
            .find(|(a, b, _)| a == j && b == i)
            .unwrap()
            .2;
        if rxy.star() != *flipped {
            return Err(violation(
                format!("R({},{})* != R({},{})", ball[*i], ball[*j], ball[*j], ball[*i]),
                &rxy.star(),
                flipped,
            ));
        }
        // conditional expectation of X*X recovers the diagonal projection
        let xstarx = &rxy.star() * rxy;
        let expected = projection(monoid, &ball[*j], f);
        if xstarx.expectation() != expected {
            return Err(violation(
                format!("Phi(X*X) for X = R({},{})", ball[*i], ball[*j]),
                &xstarx.expectation(),
                &expected,
            ));
        }
        cases += 1;
    }
    // T_x p_e = p_x T_x
    for x in &ball {
        let tx = AlgebraElement::from_monomial(*monoid, Monomial::pair(x.clone(), e.clone()));
        let lhs = &tx * &p_e;
        let rhs = &projection(monoid, x, f) * &tx;
        if lhs != rhs {
            return Err(violation(format!("T_{x} p_e != p_{x} T_{x}"), &lhs, &rhs));
        }
        cases += 1;
    }
    // matrix-unit relations R(x,y)·R(u,v) = [y=u]·R(x,v)
    for (i, j, rxy) in &rank_ones {
        for (k, l, ruv) in &rank_ones {
            let prod = rxy * ruv;
            let expected = if j == k {
                rank_ones
                    .iter()
                    .find(|(a, b, _)| (a, b) == (i, l))
                    .unwrap()
                    .2
                    .clone()
            } else {
                AlgebraElement::zero(*monoid)
            };
            if prod != expected {
                return Err(violation(
                    format!(
                        "R({},{})R({},{})",
                        ball[*i], ball[*j], ball[*k], ball[*l]
                    ),
                    &prod,
                    &expected,
                ));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Closure of the rank-one span under left and right monomial
/// multiplication, the grading of rank-ones, and the matrix-unit law —
/// with span membership decided twice: by the closed form, and (on a
/// deterministic sample of cells) by an exact linear solve against the
/// degree-matching rank-one basis.
pub fn verify_ideal_closure(
    monoid: &Monoid,
    f: &LowerBoundSet,
    bound: u32,
    solver_budget: usize,
) -> Result<u64, Violation> {
    let ball = monoid.enumerate_ball(bound);
    let mut cases = 0;
    let mut solver_cells = 0usize;
    let mut cell_index = 0usize;
    let total_cells = ball.len().pow(4);
    let stride = (total_cells / solver_budget.max(1)).max(1);
    for x in &ball {
        for y in &ball {
            let rxy = rank_one(monoid, x, y, f);
            let expected_degree = monoid.quotient_label(x, y);
            if !rxy.is_homogeneous_of(&expected_degree) {
                return Err(violation(
                    format!("degree of R({x},{y})"),
                    &rxy,
                    &expected_degree,
                ));
            }
            for s in &ball {
                for t in &ball {
                    cell_index += 1;
                    let v_st =
                        AlgebraElement::from_monomial(*monoid, Monomial::pair(s.clone(), t.clone()));
                    let left = &v_st * &rxy;
                    let left_predicted = match monoid.left_divide(t, x) {
                        Some(rem) => rank_one(monoid, &monoid.compose(s, &rem), y, f),
                        None => AlgebraElement::zero(*monoid),
                    };
                    if left != left_predicted {
                        return Err(violation(
                            format!("V({s},{t})R({x},{y})"),
                            &left,
                            &left_predicted,
                        ));
                    }
                    let right = &rxy * &v_st;
                    let right_predicted = match monoid.left_divide(s, y) {
                        Some(rem) => rank_one(monoid, x, &monoid.compose(t, &rem), f),
                        None => AlgebraElement::zero(*monoid),
                    };
                    if right != right_predicted {
                        return Err(violation(
                            format!("R({x},{y})V({s},{t})"),
                            &right,
                            &right_predicted,
                        ));
                    }
                    if cell_index % stride == 0 && solver_cells < solver_budget {
                        solver_cells += 1;
                        for z in [&left, &right] {
                            if !in_rank_one_span(monoid, z, f) {
                                return Err(violation(
                                    format!(
                                        "solver found V({s},{t})/R({x},{y}) product outside the rank-one span"
                                    ),
                                    z,
                                    &"span{R(u,v)}",
                                ));
                            }
                        }
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

/// Exact span membership: solve for coefficients of `z` against the
/// rank-one elements whose degree matches, over the components appearing
/// in `z` itself.
fn in_rank_one_span(monoid: &Monoid, z: &AlgebraElement, f: &LowerBoundSet) -> bool {
    if z.is_zero() {
        return true;
    }
    let degree = {
        let grades = z.grade();
        if grades.len() != 1 {
            return false; // rank-one combinations of one degree only arise here
        }
        grades.keys().next().unwrap().clone()
    };
    // Candidate basis: R(u,v) built from components of z, filtered by degree.
    let mut components: BTreeSet<Elem> = BTreeSet::new();
    for (m, _) in z.terms() {
        if let Monomial::V { s, t } = m {
            components.insert(s.clone());
            components.insert(t.clone());
        }
    }
    let mut basis: Vec<AlgebraElement> = vec![];
    for u in &components {
        for v in &components {
            if monoid.quotient_label(u, v) == degree {
                basis.push(rank_one(monoid, u, v, f));
            }
        }
    }
    // Rows are indexed by every monomial key in sight.
    let mut keys: BTreeSet<(Elem, Elem)> = BTreeSet::new();
    let collect_keys = |x: &AlgebraElement, keys: &mut BTreeSet<(Elem, Elem)>| {
        for (m, _) in x.terms() {
            if let Monomial::V { s, t } = m {
                keys.insert((s, t));
            }
        }
    };
    collect_keys(z, &mut keys);
    for b in &basis {
        collect_keys(b, &mut keys);
    }
    let keys: Vec<(Elem, Elem)> = keys.into_iter().collect();
    let mut matrix = ExactMatrix::zero(keys.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        for (row, (s, t)) in keys.iter().enumerate() {
            let c = b.coefficient(&Monomial::pair(s.clone(), t.clone()));
            if !c.is_zero() {
                *matrix.at_mut(row, col) = c;
            }
        }
    }
    let rhs: Vec<Scalar> = keys
        .iter()
        .map(|(s, t)| z.coefficient(&Monomial::pair(s.clone(), t.clone())))
        .collect();
    matrix.solve(&rhs).is_some()
}

/// Orthogonal resolution of the identity on a ball: each `p_y` is a
/// self-adjoint idempotent whose truncation is the matrix unit at `y`,
/// and distinct projections multiply to zero.
pub fn verify_sum_to_identity(
    monoid: &Monoid,
    f: &LowerBoundSet,
    bound: u32,
) -> Result<u64, Violation> {
    let ball = monoid.enumerate_ball(bound);
    let s = Truncation::ball(*monoid, bound);
    let mut cases = 0;
    let projections: Vec<AlgebraElement> =
        ball.iter().map(|y| projection(monoid, y, f)).collect();
    for (i, y) in ball.iter().enumerate() {
        let p_y = &projections[i];
        if p_y.star() != *p_y {
            return Err(violation(format!("p_{y} self-adjoint"), &p_y.star(), p_y));
        }
        if &(p_y * p_y) != p_y {
            return Err(violation(format!("p_{y} idempotent"), &(p_y * p_y), p_y));
        }
        let op = truncate(p_y, &s);
        let expected = ExactMatrix::unit(s.len(), i, i);
        if op.matrix != expected || !op.escapes.is_empty() {
            return Err(violation(
                format!("truncation of p_{y} is the point mass at {y}"),
                &op.matrix,
                &expected,
            ));
        }
        for (j, z) in ball.iter().enumerate() {
            if i != j {
                let prod = p_y * &projections[j];
                if !prod.is_zero() {
                    return Err(violation(format!("p_{y} p_{z} = 0"), &prod, &"0"));
                }
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// A candidate family `y ↦ E(y)` of pairwise disjoint subsets of a ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCandidate {
    classes: BTreeMap<Elem, BTreeSet<Elem>>,
}

impl PartitionCandidate {
    /// The family `E(y) = {y}` over the whole ball.
    pub fn singletons(ball: &[Elem]) -> PartitionCandidate {
        PartitionCandidate {
            classes: ball
                .iter()
                .map(|y| (y.clone(), BTreeSet::from([y.clone()])))
                .collect(),
        }
    }

    pub fn new(classes: BTreeMap<Elem, BTreeSet<Elem>>) -> Result<PartitionCandidate, String> {
        let mut seen: BTreeSet<&Elem> = BTreeSet::new();
        for members in classes.values() {
            for u in members {
                if !seen.insert(u) {
                    return Err(format!("element {u} appears in two classes"));
                }
            }
        }
        Ok(PartitionCandidate { classes })
    }

    pub fn classes(&self) -> &BTreeMap<Elem, BTreeSet<Elem>> {
        &self.classes
    }

    fn contains(&self, y: &Elem, u: &Elem) -> bool {
        self.classes.get(y).is_some_and(|set| set.contains(u))
    }

    /// Merge the class of `y2` into the class of `y1`.
    pub fn merged(&self, y1: &Elem, y2: &Elem) -> PartitionCandidate {
        let mut classes = self.classes.clone();
        let moved = classes.remove(y2).unwrap_or_default();
        classes.entry(y1.clone()).or_default().extend(moved);
        PartitionCandidate { classes }
    }

    /// Exchange the classes of `y1` and `y2`.
    pub fn swapped(&self, y1: &Elem, y2: &Elem) -> PartitionCandidate {
        let mut classes = self.classes.clone();
        let a = classes.get(y1).cloned().unwrap_or_default();
        let b = classes.get(y2).cloned().unwrap_or_default();
        classes.insert(y1.clone(), b);
        classes.insert(y2.clone(), a);
        PartitionCandidate { classes }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionOutcome {
    /// All covariance cells passed; when the family also partitions the
    /// ball, the forced structure `E(y) = {y}` was confirmed.
    Pass { singletons_confirmed: bool },
    /// A covariance cell failed: `T_p q_y ε_u` disagrees with `q_{py} T_p ε_u`.
    Fail { p: Elem, y: Elem, u: Elem },
}

impl PartitionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, PartitionOutcome::Pass { .. })
    }
}

/// Test `T_p q_y = q_{py} T_p` pointwise on basis vectors over the ball,
/// where `q_y` multiplies by the indicator of `E(y)`. Columns whose image
/// leaves the ball are skipped; a passing family that partitions the ball
/// is then checked against the forced structure `E(y) ∩ ball = {y}`.
pub fn check_partition_covariance(
    monoid: &Monoid,
    candidate: &PartitionCandidate,
    bound: u32,
) -> PartitionOutcome {
    let ball = monoid.enumerate_ball(bound);
    let in_ball: BTreeSet<&Elem> = ball.iter().collect();
    for p in &ball {
        for y in candidate.classes().keys() {
            let py = monoid.compose(p, y);
            for u in &ball {
                let pu = monoid.compose(p, u);
                if !in_ball.contains(&pu) {
                    continue;
                }
                let lhs = candidate.contains(y, u);
                let rhs = candidate.contains(&py, &pu);
                if lhs != rhs {
                    return PartitionOutcome::Fail {
                        p: p.clone(),
                        y: y.clone(),
                        u: u.clone(),
                    };
                }
            }
        }
    }
    let covered: BTreeSet<&Elem> = candidate
        .classes()
        .values()
        .flat_map(|set| set.iter())
        .collect();
    let partitions_ball = covered == in_ball;
    let singletons_confirmed = partitions_ball
        && ball
            .iter()
            .all(|y| candidate.classes().get(y).map(|s| s.len()) == Some(1) && candidate.contains(y, y));
    PartitionOutcome::Pass {
        singletons_confirmed,
    }
}
