//! Facet discovery for correlation polytopes.
//!
//! Two generators over the polytope of deterministic behaviours:
//!
//! * **Shelling** walks the facet graph. From a known facet, anchor a
//!   direction at the polytope's centroid, then for every vertex ask the
//!   cheapest supporting hyperplane through that vertex (a small linear
//!   program, solved exactly). Each answer that saturates a
//!   `(d−1)`-dimensional vertex set is a new facet; repeating with the
//!   discoveries as fresh seeds walks outward until nothing new appears.
//!
//! * **Slicing** cuts the polytope with a level set of a known expression,
//!   keeps the vertices scoring at least the threshold, and enumerates the
//!   hull facets of that cluster exactly. Facets of the cluster that
//!   happen to be valid and tight for the whole polytope are kept.
//!
//! Both return inequalities in primitive integer form; equivalence
//! filtering (and dropping the outcome-positivity class that every
//! scenario owns) is left to the caller via [`crate::sym`], except where a
//! contract promises it here.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::ineq::BellInequality;
use crate::rat::{primitive_integer, ratio, Rat};
use crate::solvers::dd::{self, DdError};
use crate::solvers::lp::{LinearProgram, LpOutcome, Relation};
use crate::sym::{canonical_key, positivity_key};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FacetError {
    #[error("seed is not a facet: saturating set has affine rank {affine_rank}, need {required}")]
    SeedNotTight { affine_rank: usize, required: usize },
    #[error("seed inequality is violated by a deterministic vertex")]
    SeedInvalid,
    #[error("supporting-hyperplane program failed at vertex {vertex} even after perturbing")]
    StepFailed { vertex: usize },
    #[error("slice keeps {points} vertices, over the {cap} hull capacity")]
    HullCapacity { points: usize, cap: usize },
    #[error("slice spans only {affine_rank} of {dim} dimensions; lower the threshold")]
    SliceTooThin { affine_rank: usize, dim: usize },
    #[error("threshold must cut strictly below the bound")]
    ThresholdNotBelowBound,
    #[error("hull arithmetic overflowed machine integers")]
    Overflow,
}

/// Everything a shelling pass needs about one seed facet: the polytope's
/// vertex coordinates, a strictly interior anchor point `c`, and the
/// direction `a` from `c` to the seed facet's saturating centroid.
pub struct ShellingState {
    pub seed: BellInequality,
    pub c: Vec<Rat>,
    pub a: Vec<Rat>,
    /// Vertex coordinates translated so `c` is the origin.
    qs: Vec<Vec<Rat>>,
}

impl ShellingState {
    pub fn new(seed: &BellInequality) -> Result<Self, FacetError> {
        let report = seed.tightness().map_err(|_| FacetError::SeedInvalid)?;
        if !report.is_tight {
            return Err(FacetError::SeedNotTight {
                affine_rank: report.affine_rank,
                required: report.required_rank,
            });
        }
        let sc = seed.scenario;
        let coords: Vec<Vec<Rat>> =
            sc.vertices().map(|v| v.correlation_point().to_vec()).collect();
        let c = centroid(&coords);
        let saturating: Vec<Vec<Rat>> = seed
            .saturating_vertices()
            .iter()
            .map(|v| v.correlation_point().to_vec())
            .collect();
        let mut a = centroid(&saturating);
        for (ak, ck) in a.iter_mut().zip(&c) {
            *ak -= ck;
        }
        let qs = coords
            .iter()
            .map(|p| p.iter().zip(&c).map(|(x, ck)| x - ck).collect())
            .collect();
        Ok(ShellingState { seed: seed.clone(), c, a, qs })
    }

    pub fn vertex_count(&self) -> usize {
        self.qs.len()
    }
}

fn centroid(points: &[Vec<Rat>]) -> Vec<Rat> {
    let d = points[0].len();
    let count = Rat::from_integer(points.len().into());
    let mut c = vec![Rat::zero(); d];
    for p in points {
        for (ck, xk) in c.iter_mut().zip(p) {
            *ck += xk;
        }
    }
    for ck in &mut c {
        *ck /= &count;
    }
    c
}

/// A deterministic rational direction used to nudge the anchor when the
/// supporting-hyperplane program degenerates. Fixed seed: retries must be
/// reproducible.
fn jitter_direction(d: usize) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    (0..d).map(|_| ratio(rng.gen_range(-999..=999), 1000)).collect()
}

/// The cheapest supporting hyperplane through one vertex, seen from the
/// state's anchor direction.
///
/// In coordinates translated so the interior point sits at the origin,
/// solve `min b₀′ : b·q_v = b₀′, b·q_w ≤ b₀′ ∀w, b·a = 1` — but through
/// its dual, which has only `d+2` rows instead of one per vertex. The
/// optimal `(b, b₀′)` are the dual prices. If the program degenerates
/// (the anchor is orthogonal to the vertex's normal cone), the anchor is
/// perturbed once by a fixed rational direction and the program retried.
///
/// Returns `None` when the supporting hyperplane's saturating set is not
/// `(d−1)`-dimensional, i.e. the hyperplane touches a lower face.
pub fn shelling_step(
    state: &ShellingState,
    vertex: usize,
) -> Result<Option<BellInequality>, FacetError> {
    let d = state.c.len();
    let qs = &state.qs;

    let attempt = |a: &[Rat]| -> LpOutcome {
        let n = qs.len();
        // Variables: λ_w ≥ 0 per vertex, then ν free, then τ free.
        let mut objective = vec![Rat::zero(); n + 2];
        objective[n + 1] = -Rat::one();
        let mut lp = LinearProgram::maximize(objective);
        lp.set_free(n);
        lp.set_free(n + 1);
        for k in 0..d {
            let mut row = Vec::with_capacity(n + 2);
            for q in qs {
                row.push(q[k].clone());
            }
            row.push(qs[vertex][k].clone());
            row.push(a[k].clone());
            lp.add_row(row, Relation::Eq, Rat::zero());
        }
        let mut sum_row = vec![Rat::one(); n + 1];
        sum_row.push(Rat::zero());
        lp.add_row(sum_row, Relation::Eq, Rat::one());
        lp.solve()
    };

    let solution = match attempt(&state.a) {
        LpOutcome::Optimal(s) => s,
        _ => {
            let jitter = jitter_direction(d);
            let nudged: Vec<Rat> = state
                .a
                .iter()
                .zip(&jitter)
                .map(|(ak, jk)| ak + jk * ratio(1, 1_000_000_000))
                .collect();
            match attempt(&nudged) {
                LpOutcome::Optimal(s) => s,
                _ => return Err(FacetError::StepFailed { vertex }),
            }
        }
    };

    // Dual prices of the coordinate rows give −b; the normalization row's
    // price is the translated offset. Undo the translation and rescale.
    let b: Vec<Rat> = (0..d).map(|k| -&solution.duals[k]).collect();
    let b0 = &solution.duals[d]
        + b.iter().zip(&state.c).map(|(bk, ck)| bk * ck).sum::<Rat>();
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(b0);
    coeffs.extend(b);
    let ints = primitive_integer(&coeffs);
    let rats: Vec<Rat> = ints.into_iter().map(Rat::from_integer).collect();
    let candidate = BellInequality::from_coeff_vec(state.seed.scenario, &rats)
        .expect("coefficient vector has the scenario's width");
    let tight = candidate
        .is_tight()
        .expect("supporting hyperplanes are valid by construction");
    Ok(if tight { Some(candidate) } else { None })
}

#[derive(Clone, Debug)]
pub struct ShellingOutcome {
    pub facets: Vec<BellInequality>,
    pub rounds_used: usize,
    /// True when a round produced nothing new before the cap was hit.
    pub fixed_point: bool,
}

/// Walk the facet graph from a seed: expand every known facet by running
/// [`shelling_step`] against all vertices in parallel, merge the
/// discoveries, repeat with the new facets as seeds.
pub fn shelling_run(
    seed: &BellInequality,
    max_rounds: usize,
) -> Result<ShellingOutcome, FacetError> {
    let mut discovered: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let key = |f: &BellInequality| -> Vec<Rat> {
        primitive_integer(&f.coeff_vec()).into_iter().map(Rat::from_integer).collect()
    };
    discovered.insert(key(seed));
    let mut facets = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    let mut rounds_used = 0;
    let mut fixed_point = false;

    while rounds_used < max_rounds && !frontier.is_empty() {
        rounds_used += 1;
        let mut fresh: Vec<BellInequality> = Vec::new();
        for facet in &frontier {
            let state = ShellingState::new(facet)?;
            let results: Vec<Result<Option<BellInequality>, FacetError>> = (0..state
                .vertex_count())
                .into_par_iter()
                .map(|v| shelling_step(&state, v))
                .collect();
            for r in results {
                if let Some(found) = r? {
                    if discovered.insert(key(&found)) {
                        facets.push(found.clone());
                        fresh.push(found);
                    }
                }
            }
        }
        if fresh.is_empty() {
            fixed_point = true;
            break;
        }
        frontier = fresh;
    }
    if !fixed_point && frontier.is_empty() {
        fixed_point = true;
    }
    Ok(ShellingOutcome { facets, rounds_used, fixed_point })
}

/// A slicing request: cut the polytope at `evaluate ≥ b0_star` and hull
/// the surviving vertices. With `b0_star` unset, the threshold is chosen
/// automatically: the largest vertex value whose slice spans all `d`
/// dimensions (erroring out if even that slice exceeds `max_points`).
#[derive(Clone, Debug)]
pub struct SliceSpec {
    pub base: BellInequality,
    pub b0_star: Option<Rat>,
    pub max_points: usize,
}

impl SliceSpec {
    pub fn auto(base: BellInequality) -> Self {
        SliceSpec { base, b0_star: None, max_points: 120 }
    }
}

#[derive(Clone, Debug)]
pub struct SliceOutcome {
    pub facets: Vec<BellInequality>,
    pub b0_star: Rat,
    pub points_kept: usize,
}

/// Facets of the sliced-off vertex cluster that are also facets of the
/// full polytope, deduplicated, with the outcome-positivity class removed.
pub fn slice(spec: &SliceSpec) -> Result<SliceOutcome, FacetError> {
    let sc = spec.base.scenario;
    let d = sc.dim();
    let scored: Vec<(Vec<Rat>, Rat)> = sc
        .vertices()
        .map(|v| {
            let p = v.correlation_point();
            let value = spec.base.evaluate(&p);
            (p.to_vec(), value)
        })
        .collect();

    let b0_star = match &spec.b0_star {
        Some(t) => {
            if *t >= spec.base.b0 {
                return Err(FacetError::ThresholdNotBelowBound);
            }
            t.clone()
        }
        None => auto_threshold(&scored, &spec.base.b0, d)?,
    };
    let kept: Vec<Vec<Rat>> = scored
        .iter()
        .filter(|(_, value)| *value >= b0_star)
        .map(|(p, _)| p.clone())
        .collect();
    let points_kept = kept.len();

    let hull = dd::double_description(&kept, spec.max_points).map_err(|e| match e {
        DdError::CapacityExceeded { got, cap } => {
            FacetError::HullCapacity { points: got, cap }
        }
        DdError::NotFullDimensional { affine_rank, dim } => {
            FacetError::SliceTooThin { affine_rank, dim }
        }
        DdError::Overflow | DdError::CoordinateOverflow => FacetError::Overflow,
    })?;

    let trivial = positivity_key(sc);
    let mut seen = BTreeSet::new();
    let mut facets = Vec::new();
    for f in hull {
        let mut coeffs = Vec::with_capacity(d + 1);
        coeffs.push(Rat::from_integer(f.b0.into()));
        coeffs.extend(f.b.iter().map(|&x| Rat::from_integer(x.into())));
        let ints = primitive_integer(&coeffs);
        let rats: Vec<Rat> = ints.into_iter().map(Rat::from_integer).collect();
        let candidate = BellInequality::from_coeff_vec(sc, &rats)
            .expect("hull facet has the scenario's width");
        // Valid on the whole polytope, tight on it, not already seen, and
        // not the positivity class that every scenario carries trivially.
        if !candidate.is_valid() {
            continue;
        }
        if !candidate.is_tight().expect("validity just checked") {
            continue;
        }
        if !seen.insert(rats) {
            continue;
        }
        if canonical_key(&candidate) == trivial {
            continue;
        }
        facets.push(candidate);
    }
    Ok(SliceOutcome { facets, b0_star, points_kept })
}

/// Largest threshold whose slice is full-dimensional.
fn auto_threshold(
    scored: &[(Vec<Rat>, Rat)],
    b0: &Rat,
    d: usize,
) -> Result<Rat, FacetError> {
    let mut levels: Vec<Rat> = scored
        .iter()
        .map(|(_, v)| v.clone())
        .filter(|v| v < b0)
        .collect();
    levels.sort();
    levels.dedup();
    let mut best_rank = 0;
    for t in levels.into_iter().rev() {
        let kept: Vec<Vec<Rat>> = scored
            .iter()
            .filter(|(_, v)| *v >= t)
            .map(|(p, _)| p.clone())
            .collect();
        let rank = dd::affine_rank_points(&kept).ok_or(FacetError::Overflow)?;
        if rank == d {
            return Ok(t);
        }
        best_rank = best_rank.max(rank);
    }
    Err(FacetError::SliceTooThin { affine_rank: best_rank, dim: d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;
    use crate::sym::is_positivity;
    use crate::Scenario;

    #[test]
    fn shelling_walks_the_two_setting_polytope() {
        // The walk is not promised to enumerate every facet, but from the
        // nontrivial seed it must settle at a fixed point, cross into the
        // positivity class, and produce only genuine facets.
        let outcome = shelling_run(&known::chsh(), 10).unwrap();
        assert!(outcome.fixed_point, "no fixed point after {} rounds", outcome.rounds_used);
        assert!(outcome.facets.len() >= 9, "only {} facets", outcome.facets.len());
        assert!(outcome.facets.iter().any(|f| is_positivity(f)));
        let chsh_key = canonical_key(&known::chsh());
        for f in &outcome.facets {
            assert!(f.is_tight().unwrap());
            if !is_positivity(f) {
                assert_eq!(canonical_key(f), chsh_key);
            }
        }
    }

    #[test]
    fn shelling_from_a_positivity_seed_stays_on_the_polytope() {
        // A trivial seed also walks to a fixed point; everything it emits
        // must be a genuine facet, whatever class it lands in.
        let sc = Scenario::new(2, 2);
        let mut coeffs = vec![Rat::zero(); 1 + sc.dim()];
        // −p(A1B1) ≤ 0 in coefficient order (b0, b_a, b_b, b_ab…).
        coeffs[1 + sc.m_a + sc.m_b] = -Rat::one();
        let seed = BellInequality::from_coeff_vec(sc, &coeffs).unwrap();
        let outcome = shelling_run(&seed, 10).unwrap();
        assert!(outcome.fixed_point);
        assert!(outcome.facets.len() >= 8, "only {} facets", outcome.facets.len());
        for f in &outcome.facets {
            assert!(f.is_tight().unwrap());
        }
    }

    #[test]
    fn shelling_rejects_loose_seeds() {
        let mut loose = known::chsh();
        loose.b0 = Rat::one();
        assert!(matches!(
            shelling_run(&loose, 2),
            Err(FacetError::SeedNotTight { .. })
        ));
    }

    #[test]
    fn slice_recovers_the_nontrivial_class() {
        let outcome = slice(&SliceSpec::auto(known::chsh())).unwrap();
        assert!(!outcome.facets.is_empty());
        let key = canonical_key(&known::chsh());
        for f in &outcome.facets {
            assert_eq!(canonical_key(f), key, "unexpected class from slicing");
        }
        assert!(outcome.b0_star < known::chsh().b0);
    }

    #[test]
    fn slice_threshold_must_cut_below_the_bound() {
        let spec = SliceSpec {
            base: known::chsh(),
            b0_star: Some(Rat::zero()),
            max_points: 120,
        };
        assert!(matches!(slice(&spec), Err(FacetError::ThresholdNotBelowBound)));
    }

    #[test]
    fn slice_reports_capacity_with_the_point_count() {
        let spec = SliceSpec {
            base: known::chsh(),
            b0_star: Some(rat_neg_two()),
            max_points: 4,
        };
        match slice(&spec) {
            Err(FacetError::HullCapacity { points, cap: 4 }) => assert!(points > 4),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    fn rat_neg_two() -> Rat {
        ratio(-2, 1)
    }
}
