//! The model layer: scenarios, behaviours, deterministic strategies, and
//! Bell expressions, all in the "probability" (Collins–Gisin) coordinates.
//!
//! A two-party scenario with `m_a`/`m_b` binary-outcome settings per side is
//! coordinatized by the marginals `p(A_i = 1)`, `p(B_j = 1)` and the joint
//! terms `p(A_i = 1, B_j = 1)`; no-signalling behaviours are exactly the
//! points of this `m_a + m_b + m_a·m_b`-dimensional space that arise from
//! full probability tables, and the local polytope is the convex hull of the
//! `2^(m_a+m_b)` deterministic assignments. A Bell expression is an affine
//! functional `b·p ≤ b0` on these coordinates.
//!
//! Everything here is exact: coefficients are rationals, bounds are computed
//! over the integers after clearing denominators, and tightness is an exact
//! rank computation. Fast paths run in `i128` and fall back to big integers
//! if a pivot would overflow (which catalog-sized data never triggers).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::rat::{rat, Rat};

/// Number of binary-outcome settings on each side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Scenario {
    pub m_a: usize,
    pub m_b: usize,
}

impl Scenario {
    pub fn new(m_a: usize, m_b: usize) -> Self {
        assert!(m_a >= 1 && m_b >= 1, "each party needs at least one setting");
        Scenario { m_a, m_b }
    }

    /// Dimension of the no-signalling coordinate space.
    pub fn dim(&self) -> usize {
        self.m_a + self.m_b + self.m_a * self.m_b
    }

    /// Number of deterministic vertices of the local polytope.
    pub fn vertex_count(&self) -> usize {
        1usize << (self.m_a + self.m_b)
    }

    /// All deterministic strategies, in (alpha, beta) bit order with Alice's
    /// bits in the low positions.
    pub fn vertices(&self) -> impl Iterator<Item = DeterministicVertex> + '_ {
        let (m_a, m_b) = (self.m_a, self.m_b);
        assert!(
            m_a + m_b <= 24,
            "vertex enumeration over 2^{} strategies is not sensible",
            m_a + m_b
        );
        (0..1usize << (m_a + m_b)).map(move |mask| DeterministicVertex {
            alpha: (0..m_a).map(|i| mask >> i & 1 == 1).collect(),
            beta: (0..m_b).map(|j| mask >> (m_a + j) & 1 == 1).collect(),
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}22", self.m_a, self.m_b)
    }
}

/// A behaviour in Collins–Gisin coordinates. All entries are exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorrelationPoint {
    pub p_a: Vec<Rat>,
    pub p_b: Vec<Rat>,
    /// Row `i`, column `j` holds `p(A_i = 1, B_j = 1)`.
    pub p_ab: Vec<Vec<Rat>>,
}

impl CorrelationPoint {
    /// Flatten to the canonical coordinate order: Alice marginals, Bob
    /// marginals, then the joint block row by row.
    pub fn to_vec(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(self.p_a.len() + self.p_b.len() + self.p_a.len() * self.p_b.len());
        v.extend(self.p_a.iter().cloned());
        v.extend(self.p_b.iter().cloned());
        for row in &self.p_ab {
            v.extend(row.iter().cloned());
        }
        v
    }

    pub fn from_vec(sc: Scenario, coords: &[Rat]) -> Self {
        assert_eq!(coords.len(), sc.dim(), "coordinate vector has wrong length");
        let p_a = coords[..sc.m_a].to_vec();
        let p_b = coords[sc.m_a..sc.m_a + sc.m_b].to_vec();
        let joint = &coords[sc.m_a + sc.m_b..];
        let p_ab = (0..sc.m_a)
            .map(|i| joint[i * sc.m_b..(i + 1) * sc.m_b].to_vec())
            .collect();
        CorrelationPoint { p_a, p_b, p_ab }
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.p_a.len(), self.p_b.len())
    }
}

/// A local deterministic strategy: each setting is assigned outcome 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DeterministicVertex {
    pub alpha: Vec<bool>,
    pub beta: Vec<bool>,
}

impl DeterministicVertex {
    pub fn correlation_point(&self) -> CorrelationPoint {
        let bit = |b: bool| if b { rat(1) } else { rat(0) };
        CorrelationPoint {
            p_a: self.alpha.iter().map(|&a| bit(a)).collect(),
            p_b: self.beta.iter().map(|&b| bit(b)).collect(),
            p_ab: self
                .alpha
                .iter()
                .map(|&a| self.beta.iter().map(|&b| bit(a && b)).collect())
                .collect(),
        }
    }

    /// Coordinates as 0/1 machine integers, in the canonical order.
    pub fn coords_i128(&self) -> Vec<i128> {
        let mut v = Vec::with_capacity(self.alpha.len() + self.beta.len() + self.alpha.len() * self.beta.len());
        v.extend(self.alpha.iter().map(|&a| a as i128));
        v.extend(self.beta.iter().map(|&b| b as i128));
        for &a in &self.alpha {
            for &b in &self.beta {
                v.push((a && b) as i128);
            }
        }
        v
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("coefficient shape does not match scenario {0}")]
    ShapeMismatch(Scenario),
    #[error("inequality is violated by a deterministic strategy (classical bound {bound} > threshold {b0}), so it is not valid for the local set")]
    NotValid { bound: Rat, b0: Rat },
}

/// Tightness analysis of a valid inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessReport {
    /// Facet of the local polytope: saturating strategies span a
    /// `dim - 1`-dimensional affine subspace.
    pub is_tight: bool,
    pub saturating_count: usize,
    pub affine_rank: usize,
    /// `dim - 1`; recorded so callers can print the target alongside.
    pub required_rank: usize,
}

/// A Bell expression `b_a·p_A + b_b·p_B + Σ b_ab[i][j]·p_AiBj ≤ b0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BellInequality {
    pub scenario: Scenario,
    pub b_a: Vec<Rat>,
    pub b_b: Vec<Rat>,
    pub b_ab: Vec<Vec<Rat>>,
    pub b0: Rat,
}

impl BellInequality {
    pub fn new(
        scenario: Scenario,
        b_a: Vec<Rat>,
        b_b: Vec<Rat>,
        b_ab: Vec<Vec<Rat>>,
        b0: Rat,
    ) -> Result<Self, ModelError> {
        let shape_ok = b_a.len() == scenario.m_a
            && b_b.len() == scenario.m_b
            && b_ab.len() == scenario.m_a
            && b_ab.iter().all(|row| row.len() == scenario.m_b);
        if !shape_ok {
            return Err(ModelError::ShapeMismatch(scenario));
        }
        Ok(BellInequality { scenario, b_a, b_b, b_ab, b0 })
    }

    /// Convenience constructor from machine integers (tests, builtins).
    pub fn from_ints(b_a: &[i64], b_b: &[i64], b_ab: &[&[i64]], b0: i64) -> Self {
        let scenario = Scenario::new(b_a.len(), b_b.len());
        BellInequality::new(
            scenario,
            b_a.iter().map(|&x| rat(x)).collect(),
            b_b.iter().map(|&x| rat(x)).collect(),
            b_ab.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect(),
            rat(b0),
        )
        .expect("integer constructor called with consistent shapes")
    }

    /// All coefficients flattened as `(b0, b_a, b_b, b_ab-row-major)`.
    /// This is the order used by canonical forms and catalog I/O.
    pub fn coeff_vec(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(1 + self.scenario.dim());
        v.push(self.b0.clone());
        v.extend(self.b_a.iter().cloned());
        v.extend(self.b_b.iter().cloned());
        for row in &self.b_ab {
            v.extend(row.iter().cloned());
        }
        v
    }

    pub fn from_coeff_vec(scenario: Scenario, v: &[Rat]) -> Result<Self, ModelError> {
        if v.len() != 1 + scenario.dim() {
            return Err(ModelError::ShapeMismatch(scenario));
        }
        let b0 = v[0].clone();
        let point = CorrelationPoint::from_vec(scenario, &v[1..]);
        BellInequality::new(scenario, point.p_a, point.p_b, point.p_ab, b0)
    }

    /// Value of the expression (left-hand side) at a behaviour.
    pub fn evaluate(&self, p: &CorrelationPoint) -> Rat {
        let mut acc = Rat::zero();
        for (c, x) in self.b_a.iter().zip(&p.p_a) {
            acc += c * x;
        }
        for (c, x) in self.b_b.iter().zip(&p.p_b) {
            acc += c * x;
        }
        for (row, prow) in self.b_ab.iter().zip(&p.p_ab) {
            for (c, x) in row.iter().zip(prow) {
                acc += c * x;
            }
        }
        acc
    }

    /// Amount by which a value exceeds the threshold. Positive means the
    /// behaviour violates the inequality.
    pub fn violation_of(&self, value: &Rat) -> Rat {
        value - &self.b0
    }

    /// Integer coefficient data with all denominators cleared: returns the
    /// per-setting tables plus the scaled threshold, and the common scale.
    /// `value_int / scale = value_rational` for anything computed from them.
    fn integer_form(&self) -> IntegerForm {
        let mut all = self.coeff_vec();
        // Common denominator over every coefficient including b0.
        let mut lcm = BigInt::one();
        for x in &all {
            lcm = lcm.lcm(x.denom());
        }
        let to_int = |x: &Rat| -> BigInt { x.numer() * (&lcm / x.denom()) };
        let b0 = to_int(&all.remove(0));
        let mut it = all.iter();
        let b_a: Vec<BigInt> = (&mut it).take(self.scenario.m_a).map(to_int).collect();
        let b_b: Vec<BigInt> = (&mut it).take(self.scenario.m_b).map(to_int).collect();
        let b_ab: Vec<Vec<BigInt>> = (0..self.scenario.m_a)
            .map(|_| (&mut it).take(self.scenario.m_b).map(to_int).collect())
            .collect();
        IntegerForm { b_a, b_b, b_ab, b0, scale: lcm }
    }

    /// Largest value any local deterministic strategy attains. Exact; the
    /// local (classical) bound of the expression.
    ///
    /// For each of Alice's `2^m_a` assignments the optimal Bob response is
    /// settingwise: include setting `j` exactly when its conditional
    /// coefficient is positive. That keeps the enumeration at `2^m_a`
    /// instead of `2^(m_a + m_b)`.
    pub fn classical_bound(&self) -> Rat {
        let f = self.integer_form();
        if let Some(small) = f.to_i128() {
            let mut best: Option<i128> = None;
            for mask in 0..1u32 << self.scenario.m_a {
                let mut v = 0i128;
                for i in 0..self.scenario.m_a {
                    if mask >> i & 1 == 1 {
                        v += small.b_a[i];
                    }
                }
                for j in 0..self.scenario.m_b {
                    let mut t = small.b_b[j];
                    for i in 0..self.scenario.m_a {
                        if mask >> i & 1 == 1 {
                            t += small.b_ab[i][j];
                        }
                    }
                    if t > 0 {
                        v += t;
                    }
                }
                best = Some(best.map_or(v, |b| b.max(v)));
            }
            return Rat::new(BigInt::from(best.unwrap()), f.scale);
        }
        // Big-integer fallback; same sweep.
        let mut best: Option<BigInt> = None;
        for mask in 0..1u32 << self.scenario.m_a {
            let mut v = BigInt::zero();
            for i in 0..self.scenario.m_a {
                if mask >> i & 1 == 1 {
                    v += &f.b_a[i];
                }
            }
            for j in 0..self.scenario.m_b {
                let mut t = f.b_b[j].clone();
                for i in 0..self.scenario.m_a {
                    if mask >> i & 1 == 1 {
                        t += &f.b_ab[i][j];
                    }
                }
                if t.is_positive() {
                    v += t;
                }
            }
            best = Some(match best {
                None => v,
                Some(b) => b.max(v),
            });
        }
        Rat::new(best.unwrap(), f.scale)
    }

    /// Whether every local deterministic strategy satisfies the inequality.
    pub fn is_valid(&self) -> bool {
        self.classical_bound() <= self.b0
    }

    /// Deterministic strategies whose value equals the threshold `b0`.
    pub fn saturating_vertices(&self) -> Vec<DeterministicVertex> {
        let f = self.integer_form();
        let small = f.to_i128();
        self.scenario
            .vertices()
            .filter(|v| match &small {
                Some(s) => s.value_of(v) == s.b0,
                None => f.value_of(v) == f.b0,
            })
            .collect()
    }

    /// Facet test. Errors when the inequality is not valid for the local
    /// set; otherwise reports the affine rank of the saturating strategies
    /// against the `dim - 1` needed for a facet.
    pub fn tightness(&self) -> Result<TightnessReport, ModelError> {
        let bound = self.classical_bound();
        if bound > self.b0 {
            return Err(ModelError::NotValid { bound, b0: self.b0.clone() });
        }
        let required_rank = self.scenario.dim() - 1;
        if bound < self.b0 {
            // The hyperplane floats above the polytope; nothing saturates.
            return Ok(TightnessReport {
                is_tight: false,
                saturating_count: 0,
                affine_rank: 0,
                required_rank,
            });
        }
        let sat = self.saturating_vertices();
        let points: Vec<Vec<i128>> = sat.iter().map(|v| v.coords_i128()).collect();
        let affine_rank = affine_rank_i128(&points);
        Ok(TightnessReport {
            is_tight: affine_rank == required_rank,
            saturating_count: sat.len(),
            affine_rank,
            required_rank,
        })
    }

    pub fn is_tight(&self) -> Result<bool, ModelError> {
        Ok(self.tightness()?.is_tight)
    }
}

struct IntegerForm {
    b_a: Vec<BigInt>,
    b_b: Vec<BigInt>,
    b_ab: Vec<Vec<BigInt>>,
    b0: BigInt,
    scale: BigInt,
}

struct IntegerFormSmall {
    b_a: Vec<i128>,
    b_b: Vec<i128>,
    b_ab: Vec<Vec<i128>>,
    b0: i128,
}

impl IntegerForm {
    fn to_i128(&self) -> Option<IntegerFormSmall> {
        Some(IntegerFormSmall {
            b_a: self.b_a.iter().map(|x| x.to_i128()).collect::<Option<_>>()?,
            b_b: self.b_b.iter().map(|x| x.to_i128()).collect::<Option<_>>()?,
            b_ab: self
                .b_ab
                .iter()
                .map(|row| row.iter().map(|x| x.to_i128()).collect::<Option<_>>())
                .collect::<Option<_>>()?,
            b0: self.b0.to_i128()?,
        })
    }

    fn value_of(&self, v: &DeterministicVertex) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, &a) in v.alpha.iter().enumerate() {
            if a {
                acc += &self.b_a[i];
                for (j, &b) in v.beta.iter().enumerate() {
                    if b {
                        acc += &self.b_ab[i][j];
                    }
                }
            }
        }
        for (j, &b) in v.beta.iter().enumerate() {
            if b {
                acc += &self.b_b[j];
            }
        }
        acc
    }
}

impl IntegerFormSmall {
    fn value_of(&self, v: &DeterministicVertex) -> i128 {
        let mut acc = 0i128;
        for (i, &a) in v.alpha.iter().enumerate() {
            if a {
                acc += self.b_a[i];
                for (j, &b) in v.beta.iter().enumerate() {
                    if b {
                        acc += self.b_ab[i][j];
                    }
                }
            }
        }
        for (j, &b) in v.beta.iter().enumerate() {
            if b {
                acc += self.b_b[j];
            }
        }
        acc
    }
}

/// Affine rank of a point set: linear rank of the differences against the
/// first point. Fraction-free (Bareiss) elimination in `i128`; falls back to
/// exact big-integer elimination if a pivot product would overflow.
pub fn affine_rank_i128(points: &[Vec<i128>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    match bareiss_rank(rows.clone()) {
        Some(r) => r,
        None => bigint_rank(
            rows.into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        ),
    }
}

/// Rank by Bareiss elimination. Returns `None` on `i128` overflow.
fn bareiss_rank(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot_row = (r..rows).find(|&i| m[i][c] != 0);
        let Some(p) = pivot_row else { continue };
        m.swap(r, p);
        let pivot = m[r][c];
        for i in r + 1..rows {
            for j in c + 1..cols {
                let a = pivot.checked_mul(m[i][j])?;
                let b = m[i][c].checked_mul(m[r][j])?;
                m[i][j] = a.checked_sub(b)?.checked_div(prev)?;
            }
            m[i][c] = 0;
        }
        prev = pivot;
        r += 1;
        rank += 1;
    }
    Some(rank)
}

/// Exact rank over the integers, no overflow concerns.
fn bigint_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = (&pivot * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = t;
            }
            m[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    /// CHSH in the probability form: `-p_A1 - p_B1 + p_11 + p_12 + p_21 - p_22 ≤ 0`.
    pub fn chsh() -> BellInequality {
        BellInequality::from_ints(&[-1, 0], &[-1, 0], &[&[1, 1], &[1, -1]], 0)
    }

    #[test]
    fn chsh_classical_bound_is_zero() {
        assert_eq!(chsh().classical_bound(), rat(0));
    }

    #[test]
    fn chsh_is_tight_with_eight_saturating_strategies() {
        let report = chsh().tightness().unwrap();
        assert!(report.is_tight);
        assert_eq!(report.saturating_count, 8);
        assert_eq!(report.affine_rank, 7);
        assert_eq!(report.required_rank, 7);
    }

    #[test]
    fn pr_box_violates_chsh_by_one_half() {
        // The PR box in these coordinates: all marginals 1/2, joint terms
        // 1/2 except p(A2=1, B2=1) = 0. Maximal algebraic violation.
        let c = chsh();
        let half = ratio(1, 2);
        let pr_box = CorrelationPoint {
            p_a: vec![half.clone(), half.clone()],
            p_b: vec![half.clone(), half.clone()],
            p_ab: vec![
                vec![half.clone(), half.clone()],
                vec![half.clone(), rat(0)],
            ],
        };
        let v = c.evaluate(&pr_box);
        assert_eq!(v, ratio(1, 2));
        assert_eq!(c.violation_of(&v), ratio(1, 2));
    }

    #[test]
    fn positivity_facet_is_tight() {
        // -p_A1B1 ≤ 0 is one of the outcome-positivity facets of the local
        // polytope; the facet test must recognize it.
        let sc = Scenario::new(2, 2);
        let ineq = BellInequality::new(
            sc,
            vec![rat(0), rat(0)],
            vec![rat(0), rat(0)],
            vec![vec![rat(-1), rat(0)], vec![rat(0), rat(0)]],
            rat(0),
        )
        .unwrap();
        assert_eq!(ineq.classical_bound(), rat(0));
        assert!(ineq.is_tight().unwrap());
    }

    #[test]
    fn slack_inequality_is_not_tight() {
        // p_A1 ≤ 2 is valid but never saturated.
        let ineq = BellInequality::from_ints(&[1, 0], &[0, 0], &[&[0, 0], &[0, 0]], 2);
        let report = ineq.tightness().unwrap();
        assert!(!report.is_tight);
        assert_eq!(report.saturating_count, 0);
    }

    #[test]
    fn invalid_inequality_errors() {
        // p_A1 ≤ 1/2 fails for the strategy that always outputs 1.
        let sc = Scenario::new(2, 2);
        let ineq = BellInequality::new(
            sc,
            vec![rat(1), rat(0)],
            vec![rat(0), rat(0)],
            vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]],
            ratio(1, 2),
        )
        .unwrap();
        assert!(matches!(ineq.tightness(), Err(ModelError::NotValid { .. })));
    }

    #[test]
    fn vertex_coordinates_match_correlation_point() {
        let sc = Scenario::new(3, 2);
        for v in sc.vertices() {
            let from_point: Vec<Rat> = v.correlation_point().to_vec();
            let from_ints: Vec<Rat> = v.coords_i128().iter().map(|&x| rat(x as i64)).collect();
            assert_eq!(from_point, from_ints);
        }
    }

    #[test]
    fn rational_coefficients_exercise_integer_clearing() {
        // Same facet as CHSH, scaled by 1/3: bound scales with it.
        let sc = Scenario::new(2, 2);
        let third = ratio(1, 3);
        let ineq = BellInequality::new(
            sc,
            vec![-third.clone(), rat(0)],
            vec![-third.clone(), rat(0)],
            vec![vec![third.clone(), third.clone()], vec![third.clone(), -third.clone()]],
            rat(0),
        )
        .unwrap();
        assert_eq!(ineq.classical_bound(), rat(0));
        assert!(ineq.is_tight().unwrap());
    }

    #[test]
    fn affine_rank_of_simplex() {
        // Unit simplex corners in R^3: affine rank 3.
        let pts = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ];
        assert_eq!(affine_rank_i128(&pts), 3);
        // A repeated point adds nothing.
        let mut with_dup = pts.clone();
        with_dup.push(vec![1, 0, 0]);
        assert_eq!(affine_rank_i128(&with_dup), 3);
        assert_eq!(affine_rank_i128(&pts[..1]), 0);
        assert_eq!(affine_rank_i128(&[]), 0);
    }
}
