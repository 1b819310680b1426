//! Relabeling symmetries and canonical forms.
//!
//! Two Bell expressions describe the same physics when one maps to the other
//! by relabeling outcomes (per setting, per party), permuting settings within
//! a party, or exchanging the parties. These maps act on the coefficient
//! vector `(b0, b_a, b_b, b_ab)` as integer involutions/permutations, so the
//! orbit of a primitive integer coefficient vector stays primitive and the
//! lexicographically smallest element of the orbit is a canonical
//! representative: two inequalities are equivalent iff their canonical keys
//! match.
//!
//! Orbit sizes stay small for the scenarios treated here (for four settings
//! a side: `2 · 2^8 · 4! · 4! ≈ 3·10^5` transforms of a 25-entry vector), so
//! exhaustive minimization is cheap; the flip layer is parallelized for the
//! five-setting cases.

use rayon::prelude::*;

use crate::ineq::{BellInequality, Scenario};
use crate::rat::{primitive_i128, Rat};

/// One relabeling generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SymmetryOp {
    /// Exchange the outcomes of Alice's setting `i`.
    FlipA(usize),
    /// Exchange the outcomes of Bob's setting `j`.
    FlipB(usize),
    /// Relabel Alice's settings: new setting `i` is old setting `perm[i]`.
    PermuteA(Vec<usize>),
    /// Relabel Bob's settings likewise.
    PermuteB(Vec<usize>),
    /// Exchange the roles of the two parties.
    SwapParties,
}

/// Apply one relabeling to an inequality, producing the coefficient vector
/// of the same functional expressed in the relabeled coordinates.
pub fn apply(ineq: &BellInequality, op: &SymmetryOp) -> BellInequality {
    let sc = ineq.scenario;
    match op {
        SymmetryOp::FlipA(i) => {
            let i = *i;
            assert!(i < sc.m_a);
            let mut out = ineq.clone();
            // p(A_i=1) ↦ 1 - p(A_i=1) and p(A_i=1,B_j=1) ↦ p(B_j=1) - p(A_i=1,B_j=1).
            out.b0 = &ineq.b0 - &ineq.b_a[i];
            out.b_a[i] = -ineq.b_a[i].clone();
            for j in 0..sc.m_b {
                out.b_b[j] = &ineq.b_b[j] + &ineq.b_ab[i][j];
                out.b_ab[i][j] = -ineq.b_ab[i][j].clone();
            }
            out
        }
        SymmetryOp::FlipB(j) => {
            let j = *j;
            assert!(j < sc.m_b);
            let mut out = ineq.clone();
            out.b0 = &ineq.b0 - &ineq.b_b[j];
            out.b_b[j] = -ineq.b_b[j].clone();
            for i in 0..sc.m_a {
                out.b_a[i] = &ineq.b_a[i] + &ineq.b_ab[i][j];
                out.b_ab[i][j] = -ineq.b_ab[i][j].clone();
            }
            out
        }
        SymmetryOp::PermuteA(perm) => {
            assert!(is_permutation(perm, sc.m_a));
            let mut out = ineq.clone();
            for i in 0..sc.m_a {
                out.b_a[i] = ineq.b_a[perm[i]].clone();
                out.b_ab[i] = ineq.b_ab[perm[i]].clone();
            }
            out
        }
        SymmetryOp::PermuteB(perm) => {
            assert!(is_permutation(perm, sc.m_b));
            let mut out = ineq.clone();
            for j in 0..sc.m_b {
                out.b_b[j] = ineq.b_b[perm[j]].clone();
                for i in 0..sc.m_a {
                    out.b_ab[i][j] = ineq.b_ab[i][perm[j]].clone();
                }
            }
            out
        }
        SymmetryOp::SwapParties => {
            let swapped = Scenario::new(sc.m_b, sc.m_a);
            let b_ab = (0..sc.m_b)
                .map(|j| (0..sc.m_a).map(|i| ineq.b_ab[i][j].clone()).collect())
                .collect();
            BellInequality::new(swapped, ineq.b_b.clone(), ineq.b_a.clone(), b_ab, ineq.b0.clone())
                .expect("transposed shape is consistent")
        }
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    perm.len() == n && {
        let mut seen = vec![false; n];
        perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
    }
}

/// Equivalence-class identifier: scenario (ordered so the smaller side comes
/// first) plus the lexicographically minimal primitive integer coefficient
/// vector over the full relabeling orbit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    pub m_a: usize,
    pub m_b: usize,
    /// `(b0, b_a, b_b, b_ab row-major)`, primitive integers.
    pub coeffs: Vec<i128>,
}

/// Flattened integer working form used inside the orbit scan.
#[derive(Clone)]
struct IntForm {
    m_a: usize,
    m_b: usize,
    b0: i128,
    b_a: Vec<i128>,
    b_b: Vec<i128>,
    b_ab: Vec<i128>, // row-major
}

impl IntForm {
    fn from_ineq(ineq: &BellInequality) -> Self {
        let coeffs = primitive_i128(&ineq.coeff_vec())
            .expect("catalog-scale coefficients fit in i128");
        let (m_a, m_b) = (ineq.scenario.m_a, ineq.scenario.m_b);
        IntForm {
            m_a,
            m_b,
            b0: coeffs[0],
            b_a: coeffs[1..1 + m_a].to_vec(),
            b_b: coeffs[1 + m_a..1 + m_a + m_b].to_vec(),
            b_ab: coeffs[1 + m_a + m_b..].to_vec(),
        }
    }

    fn swap(&self) -> IntForm {
        let mut b_ab = vec![0i128; self.b_ab.len()];
        for i in 0..self.m_a {
            for j in 0..self.m_b {
                b_ab[j * self.m_a + i] = self.b_ab[i * self.m_b + j];
            }
        }
        IntForm {
            m_a: self.m_b,
            m_b: self.m_a,
            b0: self.b0,
            b_a: self.b_b.clone(),
            b_b: self.b_a.clone(),
            b_ab,
        }
    }

    /// Apply outcome flips for every set bit: Alice bits low, Bob bits high.
    fn flipped(&self, mask: u32) -> IntForm {
        let mut f = self.clone();
        for i in 0..f.m_a {
            if mask >> i & 1 == 1 {
                f.b0 -= f.b_a[i];
                f.b_a[i] = -f.b_a[i];
                for j in 0..f.m_b {
                    f.b_b[j] += f.b_ab[i * f.m_b + j];
                    f.b_ab[i * f.m_b + j] = -f.b_ab[i * f.m_b + j];
                }
            }
        }
        for j in 0..f.m_b {
            if mask >> (f.m_a + j) & 1 == 1 {
                f.b0 -= f.b_b[j];
                f.b_b[j] = -f.b_b[j];
                for i in 0..f.m_a {
                    f.b_a[i] += f.b_ab[i * f.m_b + j];
                    f.b_ab[i * f.m_b + j] = -f.b_ab[i * f.m_b + j];
                }
            }
        }
        f
    }

    /// Key under a pair of setting permutations, written into `out`.
    fn write_key(&self, pa: &[usize], pb: &[usize], out: &mut Vec<i128>) {
        out.clear();
        out.push(self.b0);
        out.extend(pa.iter().map(|&i| self.b_a[i]));
        out.extend(pb.iter().map(|&j| self.b_b[j]));
        for &i in pa {
            out.extend(pb.iter().map(|&j| self.b_ab[i * self.m_b + j]));
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm; n ≤ 5 here so the list is tiny.
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = vec![items.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            out.push(items.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Smallest key over all permutations of one already-flipped form.
fn min_over_perms(form: &IntForm, perms_a: &[Vec<usize>], perms_b: &[Vec<usize>]) -> Vec<i128> {
    let mut best: Option<Vec<i128>> = None;
    let mut scratch = Vec::with_capacity(1 + form.m_a + form.m_b + form.b_ab.len());
    for pa in perms_a {
        for pb in perms_b {
            form.write_key(pa, pb, &mut scratch);
            if best.as_ref().map_or(true, |b| scratch < *b) {
                best = Some(scratch.clone());
            }
        }
    }
    best.expect("permutation lists are non-empty")
}

/// Canonical key of an inequality: minimal coefficient vector over outcome
/// flips, setting permutations, and (when both sides have equally many
/// settings, or to order the scenario) party exchange.
pub fn canonical_key(ineq: &BellInequality) -> CanonicalKey {
    let mut base = IntForm::from_ineq(ineq);
    if base.m_a > base.m_b {
        base = base.swap();
    }
    let mut starts = vec![base.clone()];
    if base.m_a == base.m_b {
        starts.push(base.swap());
    }
    let perms_a = permutations(base.m_a);
    let perms_b = permutations(base.m_b);
    let n_flip = 1u32 << (base.m_a + base.m_b);

    let min_for = |start: &IntForm| -> Vec<i128> {
        if n_flip >= 64 {
            (0..n_flip)
                .into_par_iter()
                .map(|mask| min_over_perms(&start.flipped(mask), &perms_a, &perms_b))
                .min()
                .unwrap()
        } else {
            (0..n_flip)
                .map(|mask| min_over_perms(&start.flipped(mask), &perms_a, &perms_b))
                .min()
                .unwrap()
        }
    };

    let coeffs = starts.iter().map(min_for).min().unwrap();
    CanonicalKey { m_a: base.m_a, m_b: base.m_b, coeffs }
}

/// Rebuild the representative inequality from its canonical key.
pub fn canonical_form(ineq: &BellInequality) -> BellInequality {
    let key = canonical_key(ineq);
    let sc = Scenario::new(key.m_a, key.m_b);
    let coeffs: Vec<Rat> = key.coeffs.iter().map(|&x| Rat::from_integer(x.into())).collect();
    BellInequality::from_coeff_vec(sc, &coeffs).expect("key length matches scenario")
}

/// Same physics up to relabelings?
pub fn equivalent(a: &BellInequality, b: &BellInequality) -> bool {
    canonical_key(a) == canonical_key(b)
}

/// Key of the outcome-positivity class for a scenario. All the inequalities
/// that merely restate `p(table) ≥ 0` — `p_AiBj ≥ 0`, `p_Ai ≥ p_AiBj`,
/// `p_Bj ≥ p_AiBj`, `1 - p_Ai - p_Bj + p_AiBj ≥ 0` — form a single
/// relabeling class, so one key recognizes them all.
pub fn positivity_key(sc: Scenario) -> CanonicalKey {
    use crate::rat::rat;
    let mut b_ab = vec![vec![rat(0); sc.m_b]; sc.m_a];
    b_ab[0][0] = rat(-1);
    let ineq = BellInequality::new(
        sc,
        vec![rat(0); sc.m_a],
        vec![rat(0); sc.m_b],
        b_ab,
        rat(0),
    )
    .unwrap();
    canonical_key(&ineq)
}

/// Facet of the local polytope that carries no Bell content.
pub fn is_positivity(ineq: &BellInequality) -> bool {
    canonical_key(ineq) == positivity_key(ineq.scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn chsh() -> BellInequality {
        BellInequality::from_ints(&[-1, 0], &[-1, 0], &[&[1, 1], &[1, -1]], 0)
    }

    #[test]
    fn flips_are_involutions() {
        let c = chsh();
        for i in 0..2 {
            let once = apply(&c, &SymmetryOp::FlipA(i));
            assert_ne!(once, c);
            assert_eq!(apply(&once, &SymmetryOp::FlipA(i)), c);
            let once = apply(&c, &SymmetryOp::FlipB(i));
            assert_eq!(apply(&once, &SymmetryOp::FlipB(i)), c);
        }
    }

    #[test]
    fn flip_preserves_value_under_relabeled_behaviour() {
        // Flipping Alice's first setting then evaluating on the relabeled
        // PR box gives the same number as the original pair.
        use crate::ineq::CorrelationPoint;
        use crate::rat::ratio;
        let c = chsh();
        let half = ratio(1, 2);
        let p = CorrelationPoint {
            p_a: vec![half.clone(), half.clone()],
            p_b: vec![half.clone(), half.clone()],
            p_ab: vec![vec![half.clone(), half.clone()], vec![half.clone(), rat(0)]],
        };
        // Relabel outcomes of A1 in the behaviour:
        let mut q = p.clone();
        q.p_a[0] = rat(1) - &p.p_a[0];
        for j in 0..2 {
            q.p_ab[0][j] = &p.p_b[j] - &p.p_ab[0][j];
        }
        let f = apply(&c, &SymmetryOp::FlipA(0));
        let lhs = f.evaluate(&q) - &f.b0;
        let rhs = c.evaluate(&p) - &c.b0;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn orbit_has_constant_canonical_key() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = chsh();
        let key = canonical_key(&base);
        let mut current = base;
        for _ in 0..40 {
            let op = match rng.gen_range(0..5) {
                0 => SymmetryOp::FlipA(rng.gen_range(0..2)),
                1 => SymmetryOp::FlipB(rng.gen_range(0..2)),
                2 => SymmetryOp::PermuteA(vec![1, 0]),
                3 => SymmetryOp::PermuteB(vec![1, 0]),
                _ => SymmetryOp::SwapParties,
            };
            current = apply(&current, &op);
            assert_eq!(canonical_key(&current), key);
        }
    }

    #[test]
    fn classical_bound_is_orbit_invariant_after_threshold_shift() {
        // bound - b0 is preserved by relabelings.
        let c = chsh();
        let slack = c.classical_bound() - &c.b0;
        for op in [
            SymmetryOp::FlipA(1),
            SymmetryOp::FlipB(0),
            SymmetryOp::PermuteA(vec![1, 0]),
            SymmetryOp::SwapParties,
        ] {
            let t = apply(&c, &op);
            assert_eq!(t.classical_bound() - &t.b0, slack);
        }
    }

    #[test]
    fn all_positivity_forms_share_one_class() {
        let sc = Scenario::new(2, 2);
        let z = || vec![rat(0); 2];
        let zz = || vec![vec![rat(0); 2], vec![rat(0); 2]];
        // -p_22 ≤ 0
        let mut ab = zz();
        ab[1][1] = rat(-1);
        let f1 = BellInequality::new(sc, z(), z(), ab, rat(0)).unwrap();
        // p_12 - p_A1 ≤ 0
        let mut ab = zz();
        ab[0][1] = rat(1);
        let mut a = z();
        a[0] = rat(-1);
        let f2 = BellInequality::new(sc, a, z(), ab, rat(0)).unwrap();
        // p_21 - p_B1 ≤ 0
        let mut ab = zz();
        ab[1][0] = rat(1);
        let mut b = z();
        b[0] = rat(-1);
        let f3 = BellInequality::new(sc, z(), b, ab, rat(0)).unwrap();
        // p_A2 + p_B2 - p_22 ≤ 1
        let mut ab = zz();
        ab[1][1] = rat(-1);
        let mut a = z();
        a[1] = rat(1);
        let mut b = z();
        b[1] = rat(1);
        let f4 = BellInequality::new(sc, a, b, ab, rat(1)).unwrap();

        let pk = positivity_key(sc);
        for f in [&f1, &f2, &f3, &f4] {
            assert_eq!(canonical_key(f), pk);
            assert!(is_positivity(f));
        }
        assert!(!is_positivity(&chsh()));
    }

    #[test]
    fn chsh_is_not_equivalent_to_positivity_but_is_to_its_own_relabelings() {
        let c = chsh();
        let mut twisted = apply(&c, &SymmetryOp::FlipA(0));
        twisted = apply(&twisted, &SymmetryOp::PermuteB(vec![1, 0]));
        twisted = apply(&twisted, &SymmetryOp::SwapParties);
        assert!(equivalent(&c, &twisted));
        let canon = canonical_form(&c);
        assert!(equivalent(&c, &canon));
        assert_eq!(canonical_key(&canon), canonical_key(&c));
    }

    #[test]
    fn scaled_copies_share_a_key() {
        use crate::rat::ratio;
        let c = chsh();
        let scaled = BellInequality::new(
            c.scenario,
            c.b_a.iter().map(|x| x * ratio(3, 7)).collect(),
            c.b_b.iter().map(|x| x * ratio(3, 7)).collect(),
            c.b_ab
                .iter()
                .map(|r| r.iter().map(|x| x * ratio(3, 7)).collect())
                .collect(),
            c.b0.clone() * ratio(3, 7),
        )
        .unwrap();
        assert!(equivalent(&c, &scaled));
    }
}
