//! Critical detector efficiencies on the maximally entangled qubit pair.
//!
//! When each detector fires with probability η and a silent detector makes
//! the party announce a fixed per-setting outcome, the observed value of a
//! Bell expression is the mixture
//!
//! ```text
//!   I(η_A, η_B) = η_Aη_B·Q + η_A(1−η_B)·M_A + (1−η_A)η_B·M_B
//!               + (1−η_A)(1−η_B)·X
//! ```
//!
//! with `Q` the fully-quantum value, `M_A`/`M_B` the one-sided-click
//! values, and `X` the deterministic no-click point. The threshold is the
//! efficiency where the mixture falls back to the local bound.
//!
//! The state is pinned to `(|00⟩ + |11⟩)/√2`; what varies is the strategy.
//! Each setting is either a qubit projector (a Bloch direction, restricted
//! to the x–z plane for real-only runs) or a *degenerate* measurement that
//! announces a fixed outcome — degenerate settings behave identically
//! clicked or silent, so their no-click outcome is forced. Fixing the
//! degenerate pattern folds the expression into a smaller one, `I′`, over
//! the remaining quantum settings; `optimize_threshold` enumerates the
//! patterns and no-click assignments, deduplicates those that fold
//! identically, and runs a direct search over the Bloch angles of each
//! survivor.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ineq::{BellInequality, Scenario};
use crate::rat::{to_f64, Rat};
use crate::seesaw::Field;
use crate::solvers::nm::{self, NmOptions};

/// One local measurement in a detection strategy.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum SettingChoice {
    /// Projector `(1 + v·σ)/2` onto the counted outcome.
    Quantum { x: f64, y: f64, z: f64 },
    /// Always announce this outcome (0 = counted), click or no click.
    Degenerate(u8),
}

impl SettingChoice {
    /// Probability of the counted outcome on the maximally entangled
    /// pair, where every Bloch direction has marginal 1/2.
    fn click_probability(&self) -> f64 {
        match self {
            SettingChoice::Quantum { .. } => 0.5,
            SettingChoice::Degenerate(o) => {
                if *o == 0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct PartyStrategy {
    pub settings: Vec<SettingChoice>,
    /// Outcome announced when the detector stays silent, per setting.
    pub noclick: Vec<u8>,
}

impl PartyStrategy {
    /// A degenerate setting must announce its fixed outcome on no-click,
    /// otherwise the strategy would distinguish the indistinguishable.
    pub fn is_consistent(&self) -> bool {
        self.settings.len() == self.noclick.len()
            && self
                .settings
                .iter()
                .zip(&self.noclick)
                .all(|(s, &nc)| match s {
                    SettingChoice::Degenerate(o) => *o == nc,
                    SettingChoice::Quantum { .. } => nc <= 1,
                })
    }
}

/// A complete two-party strategy; the shared state is always the
/// maximally entangled qubit pair.
#[derive(Clone, PartialEq, Debug)]
pub struct DetectionStrategy {
    pub alice: PartyStrategy,
    pub bob: PartyStrategy,
}

/// Mixture components of a strategy together with its thresholds.
#[derive(Clone, Debug)]
pub struct EfficiencyReport {
    pub q: f64,
    pub m_a: f64,
    pub m_b: f64,
    pub x: f64,
    /// Local bound of the expression, kept exact.
    pub l: Rat,
    pub eta_sym: Option<f64>,
    pub eta_asym_b: Option<f64>,
    pub strategy: DetectionStrategy,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ThresholdMode {
    /// Both detectors share one efficiency.
    Symmetric,
    /// Alice's detector is perfect; Bob's efficiency is the variable.
    AsymmetricB,
}

#[derive(Clone, Debug)]
pub struct DetectOptions {
    pub field: Field,
    /// Random restarts of the angle search per setting assignment.
    pub restarts: usize,
    /// Direct-search evaluation budget per restart.
    pub max_evals: usize,
    /// Cap on distinct setting assignments searched, fewest-degenerate
    /// first.
    pub budget: usize,
    pub seed: u64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            field: Field::Complex,
            restarts: 6,
            max_evals: 3000,
            budget: 4096,
            seed: 0,
        }
    }
}

/// Result of an optimized threshold search: the best strategy found, the
/// reduced expression its degenerate pattern folds to, and whether the
/// enumeration was cut short by the budget.
#[derive(Clone, Debug)]
pub struct ThresholdSearch {
    pub report: EfficiencyReport,
    /// The expression over the quantum settings only, with degenerate
    /// settings absorbed into coefficients and bound.
    pub reduced: BellInequality,
    /// Local bound of the reduced expression.
    pub reduced_bound: Rat,
    pub budget_exhausted: bool,
    pub combos_searched: usize,
}

/// `I(η_A, η_B)` assembled from its four components.
pub fn mixture_value(q: f64, m_a: f64, m_b: f64, x: f64, eta_a: f64, eta_b: f64) -> f64 {
    eta_a * eta_b * q
        + eta_a * (1.0 - eta_b) * m_a
        + (1.0 - eta_a) * eta_b * m_b
        + (1.0 - eta_a) * (1.0 - eta_b) * x
}

#[derive(Clone, Debug)]
struct Weights {
    a: Vec<f64>,
    b: Vec<f64>,
    ab: Vec<Vec<f64>>,
}

impl Weights {
    fn new(ineq: &BellInequality) -> Self {
        Weights {
            a: ineq.b_a.iter().map(to_f64).collect(),
            b: ineq.b_b.iter().map(to_f64).collect(),
            ab: ineq.b_ab.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
        }
    }
}

/// Joint counted-outcome probability on the maximally entangled pair. For
/// two Bloch directions this is `(1 + v_xw_x − v_yw_y + v_zw_z)/4`; a
/// degenerate setting collapses the pair to the partner's marginal.
fn joint_probability(va: &SettingChoice, vb: &SettingChoice) -> f64 {
    match (va, vb) {
        (SettingChoice::Degenerate(o), _) => {
            if *o == 0 {
                vb.click_probability()
            } else {
                0.0
            }
        }
        (_, SettingChoice::Degenerate(o)) => {
            if *o == 0 {
                va.click_probability()
            } else {
                0.0
            }
        }
        (
            SettingChoice::Quantum { x: ax, y: ay, z: az },
            SettingChoice::Quantum { x: bx, y: by, z: bz },
        ) => (1.0 + ax * bx - ay * by + az * bz) / 4.0,
    }
}

/// The four mixture components `(Q, M_A, M_B, X)` of a strategy.
pub fn qmx(ineq: &BellInequality, strategy: &DetectionStrategy) -> (f64, f64, f64, f64) {
    let w = Weights::new(ineq);
    let pa: Vec<f64> =
        strategy.alice.settings.iter().map(|s| s.click_probability()).collect();
    let pb: Vec<f64> =
        strategy.bob.settings.iter().map(|s| s.click_probability()).collect();
    let nca: Vec<f64> =
        strategy.alice.noclick.iter().map(|&o| if o == 0 { 1.0 } else { 0.0 }).collect();
    let ncb: Vec<f64> =
        strategy.bob.noclick.iter().map(|&o| if o == 0 { 1.0 } else { 0.0 }).collect();

    let value = |pa: &[f64], pb: &[f64], joint: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut acc = 0.0;
        for (i, wa) in w.a.iter().enumerate() {
            acc += wa * pa[i];
        }
        for (j, wb) in w.b.iter().enumerate() {
            acc += wb * pb[j];
        }
        for (i, row) in w.ab.iter().enumerate() {
            for (j, wab) in row.iter().enumerate() {
                if *wab != 0.0 {
                    acc += wab * joint(i, j);
                }
            }
        }
        acc
    };

    let q = value(&pa, &pb, &|i, j| {
        joint_probability(&strategy.alice.settings[i], &strategy.bob.settings[j])
    });
    let m_a = value(&pa, &ncb, &|i, j| pa[i] * ncb[j]);
    let m_b = value(&nca, &pb, &|i, j| nca[i] * pb[j]);
    let x = value(&nca, &ncb, &|i, j| nca[i] * ncb[j]);
    (q, m_a, m_b, x)
}

/// Largest root of the symmetric-efficiency quadratic inside `[0, 1)`,
/// or `None` when even perfect detectors do not violate. Cheap enough for
/// inner optimization loops; the published [`threshold_sym`] adds the
/// sign-scan guard.
fn sym_threshold_quadratic(q: f64, m_a: f64, m_b: f64, x: f64, l: f64) -> Option<f64> {
    if q - l <= 1e-12 {
        return None;
    }
    // I(η,η) − L = aη² + bη + c; positive at η = 1 by the check above.
    let a = q - m_a - m_b + x;
    let b = m_a + m_b - 2.0 * x;
    let c = x - l;
    let mut boundary = 0.0f64;
    if a.abs() > 1e-14 {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let s = disc.sqrt();
            for r in [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)] {
                if r > boundary && r < 1.0 {
                    boundary = r;
                }
            }
        }
    } else if b.abs() > 1e-14 {
        let r = -c / b;
        if r > boundary && r < 1.0 {
            boundary = r;
        }
    }
    Some(boundary)
}

/// Quadratic root plus a sign-scan: nothing guarantees a monotone
/// violation curve, so the stretch above the candidate root is checked on
/// a 1000-point grid and any late sign change is refined by bisection.
fn sym_threshold_guarded(q: f64, m_a: f64, m_b: f64, x: f64, l: f64) -> Option<f64> {
    let mut boundary = sym_threshold_quadratic(q, m_a, m_b, x, l)?;
    let f = |eta: f64| mixture_value(q, m_a, m_b, x, eta, eta) - l;
    const GRID: usize = 1000;
    let step = (1.0 - boundary) / GRID as f64;
    let mut last_bad = None;
    for k in 0..GRID {
        let eta = boundary + step * (k as f64 + 0.5);
        if f(eta) <= -1e-12 {
            last_bad = Some(eta);
        }
    }
    if let Some(bad) = last_bad {
        let (mut lo, mut hi) = (bad, (bad + step).min(1.0));
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        boundary = hi;
    }
    Some(boundary)
}

fn asym_threshold_parts(q: f64, m_a: f64, l: f64) -> Option<f64> {
    if q - m_a <= 1e-12 {
        return None;
    }
    // I(1, η_B) = η_B·Q + (1−η_B)·M_A crosses L at:
    let eta = (l - m_a) / (q - m_a);
    (eta > 0.0 && eta <= 1.0).then_some(eta)
}

/// Smallest shared efficiency at which the strategy still violates;
/// `None` when it does not violate even at η = 1.
pub fn threshold_sym(ineq: &BellInequality, strategy: &DetectionStrategy) -> Option<f64> {
    let (q, m_a, m_b, x) = qmx(ineq, strategy);
    sym_threshold_guarded(q, m_a, m_b, x, to_f64(&ineq.classical_bound()))
}

/// Smallest Bob-side efficiency with Alice's detector perfect.
pub fn threshold_asym(ineq: &BellInequality, strategy: &DetectionStrategy) -> Option<f64> {
    let (q, m_a, _, _) = qmx(ineq, strategy);
    asym_threshold_parts(q, m_a, to_f64(&ineq.classical_bound()))
}

/// Flip both parties' outcome labels everywhere: `p_A(i) → 1 − p_A(i)`
/// and likewise for Bob and the joints. The returned expression bounds the
/// relabeled behaviours exactly when the original bounds the originals.
pub fn flip_all_outcomes(ineq: &BellInequality) -> BellInequality {
    let m_a = ineq.scenario.m_a;
    let m_b = ineq.scenario.m_b;
    let b_a: Vec<Rat> = (0..m_a)
        .map(|i| {
            let cross: Rat = ineq.b_ab[i].iter().fold(Rat::zero(), |s, v| s + v);
            -&ineq.b_a[i] - cross
        })
        .collect();
    let b_b: Vec<Rat> = (0..m_b)
        .map(|j| {
            let cross: Rat = (0..m_a).fold(Rat::zero(), |s, i| s + &ineq.b_ab[i][j]);
            -&ineq.b_b[j] - cross
        })
        .collect();
    let mut b0 = ineq.b0.clone();
    for v in ineq.b_a.iter().chain(&ineq.b_b) {
        b0 -= v;
    }
    for row in &ineq.b_ab {
        for v in row {
            b0 -= v;
        }
    }
    BellInequality::new(ineq.scenario, b_a, b_b, ineq.b_ab.clone(), b0)
        .expect("outcome flip preserves shape")
}

/// True when flipping every outcome reproduces the expression verbatim.
/// For such expressions a strategy and its globally flipped twin score
/// identically, which halves the discrete enumeration.
pub fn is_flip_symmetric(ineq: &BellInequality) -> bool {
    flip_all_outcomes(ineq).coeff_vec() == ineq.coeff_vec()
}

/// Fold a degenerate pattern into the expression: `Some(o)` pins a
/// setting to outcome `o`, `None` keeps it quantum. Pinned settings merge
/// into the other party's coefficients and the bound, leaving an
/// expression `I′` over the quantum settings only. Returns `I′` together
/// with its local bound `L′`. At least one setting per party must stay
/// quantum.
pub fn fold_degenerate_settings(
    ineq: &BellInequality,
    a_kinds: &[Option<u8>],
    b_kinds: &[Option<u8>],
) -> (BellInequality, Rat) {
    assert_eq!(a_kinds.len(), ineq.scenario.m_a);
    assert_eq!(b_kinds.len(), ineq.scenario.m_b);
    let qa: Vec<usize> = (0..a_kinds.len()).filter(|&i| a_kinds[i].is_none()).collect();
    let qb: Vec<usize> = (0..b_kinds.len()).filter(|&j| b_kinds[j].is_none()).collect();
    assert!(!qa.is_empty() && !qb.is_empty(), "a party lost all its settings");

    let mut b_a: Vec<Rat> = qa.iter().map(|&i| ineq.b_a[i].clone()).collect();
    let mut b_b: Vec<Rat> = qb.iter().map(|&j| ineq.b_b[j].clone()).collect();
    let mut shift = Rat::zero();
    for (i, kind) in a_kinds.iter().enumerate() {
        if *kind == Some(0) {
            shift += &ineq.b_a[i];
        }
    }
    for (j, kind) in b_kinds.iter().enumerate() {
        if *kind == Some(0) {
            shift += &ineq.b_b[j];
        }
    }
    for (i, a_kind) in a_kinds.iter().enumerate() {
        for (j, b_kind) in b_kinds.iter().enumerate() {
            match (a_kind, b_kind) {
                (None, None) => {}
                (Some(0), None) => {
                    let pos = qb.iter().position(|&c| c == j).unwrap();
                    b_b[pos] += &ineq.b_ab[i][j];
                }
                (None, Some(0)) => {
                    let pos = qa.iter().position(|&c| c == i).unwrap();
                    b_a[pos] += &ineq.b_ab[i][j];
                }
                (Some(0), Some(0)) => shift += &ineq.b_ab[i][j],
                _ => {} // an outcome-1 pin zeroes every probability it touches
            }
        }
    }
    let b_ab: Vec<Vec<Rat>> = qa
        .iter()
        .map(|&i| qb.iter().map(|&j| ineq.b_ab[i][j].clone()).collect())
        .collect();
    let reduced = BellInequality::new(
        Scenario::new(qa.len(), qb.len()),
        b_a,
        b_b,
        b_ab,
        &ineq.b0 - &shift,
    )
    .expect("folded shape is consistent by construction");
    let bound = reduced.classical_bound();
    (reduced, bound)
}

/// One discrete choice per setting: degenerate outcome (or `None` for
/// quantum) plus the no-click bit. Degenerate choices carry their forced
/// bit.
type Choice = (Option<u8>, u8);

/// Everything the inner angle search needs, precomputed per assignment.
/// On the maximally entangled pair every quantum marginal is exactly 1/2,
/// so `M_A`, `M_B`, `X` are constants of the assignment and only `Q`
/// moves, through the correlation part.
#[derive(Clone, Debug)]
struct FoldedCombo {
    a: Vec<Choice>,
    b: Vec<Choice>,
    /// Indices of the quantum settings on each side.
    qa: Vec<usize>,
    qb: Vec<usize>,
    /// Correlation weights between quantum pairs, row-major, already
    /// divided by 4: `Q = q_const + Σ g·(v·Dw)` with `D = diag(1,−1,1)`.
    gab: Vec<f64>,
    q_const: f64,
    m_a: f64,
    m_b: f64,
    x: f64,
}

fn fold_combo(w: &Weights, a: &[Choice], b: &[Choice]) -> FoldedCombo {
    let click = |ch: &Choice| match ch.0 {
        None => 0.5,
        Some(0) => 1.0,
        Some(_) => 0.0,
    };
    let silent = |ch: &Choice| if ch.1 == 0 { 1.0 } else { 0.0 };
    let qa: Vec<usize> = (0..a.len()).filter(|&i| a[i].0.is_none()).collect();
    let qb: Vec<usize> = (0..b.len()).filter(|&j| b[j].0.is_none()).collect();

    let (mut q_const, mut m_a, mut m_b, mut x) = (0.0, 0.0, 0.0, 0.0);
    for (i, ch) in a.iter().enumerate() {
        q_const += w.a[i] * click(ch);
        m_a += w.a[i] * click(ch);
        m_b += w.a[i] * silent(ch);
        x += w.a[i] * silent(ch);
    }
    for (j, ch) in b.iter().enumerate() {
        q_const += w.b[j] * click(ch);
        m_b += w.b[j] * click(ch);
        m_a += w.b[j] * silent(ch);
        x += w.b[j] * silent(ch);
    }
    let mut gab = vec![0.0; qa.len() * qb.len()];
    for (i, cha) in a.iter().enumerate() {
        for (j, chb) in b.iter().enumerate() {
            let wab = w.ab[i][j];
            if wab == 0.0 {
                continue;
            }
            m_a += wab * click(cha) * silent(chb);
            m_b += wab * silent(cha) * click(chb);
            x += wab * silent(cha) * silent(chb);
            match (cha.0, chb.0) {
                (None, None) => {
                    // counted-pair probability (1 + v·Dw)/4
                    q_const += wab / 4.0;
                    let r = qa.iter().position(|&k| k == i).unwrap();
                    let c = qb.iter().position(|&k| k == j).unwrap();
                    gab[r * qb.len() + c] = wab / 4.0;
                }
                _ => q_const += wab * click(cha) * click(chb),
            }
        }
    }
    FoldedCombo { a: a.to_vec(), b: b.to_vec(), qa, qb, gab, q_const, m_a, m_b, x }
}

impl FoldedCombo {
    /// Assignments that fold to the same data up to rounding run the same
    /// search; coefficients live on a coarse rational lattice, so a 1e−6
    /// quantization is collision-free in practice.
    fn fingerprint(&self) -> Vec<i64> {
        let quant = |v: f64| (v * 1e6).round() as i64;
        let mut fp = vec![self.qa.len() as i64, self.qb.len() as i64];
        fp.extend([quant(self.q_const), quant(self.m_a), quant(self.m_b), quant(self.x)]);
        fp.extend(self.gab.iter().map(|&g| quant(g)));
        fp
    }

    /// `Q` for one set of Bloch angles (layout: Alice's quantum settings
    /// then Bob's, `per` angles each).
    fn quantum_value(&self, angles: &[f64], per: usize) -> f64 {
        let bloch = |k: usize| -> (f64, f64, f64) {
            let (st, ct) = angles[per * k].sin_cos();
            let (sp, cp) =
                if per == 2 { angles[per * k + 1].sin_cos() } else { (0.0, 1.0) };
            (st * cp, st * sp, ct)
        };
        let nqa = self.qa.len();
        let nqb = self.qb.len();
        let va: Vec<(f64, f64, f64)> = (0..nqa).map(bloch).collect();
        let vb: Vec<(f64, f64, f64)> = (0..nqb).map(|k| bloch(nqa + k)).collect();
        let mut q = self.q_const;
        for (r, a) in va.iter().enumerate() {
            for (c, b) in vb.iter().enumerate() {
                let g = self.gab[r * nqb + c];
                if g != 0.0 {
                    q += g * (a.0 * b.0 - a.1 * b.1 + a.2 * b.2);
                }
            }
        }
        q
    }

    fn strategy(&self, angles: &[f64], per: usize) -> DetectionStrategy {
        let bloch = |k: usize| -> SettingChoice {
            let (st, ct) = angles[per * k].sin_cos();
            let (sp, cp) =
                if per == 2 { angles[per * k + 1].sin_cos() } else { (0.0, 1.0) };
            SettingChoice::Quantum { x: st * cp, y: st * sp, z: ct }
        };
        let mut next = 0;
        let mut build = |choices: &[Choice]| -> PartyStrategy {
            let settings = choices
                .iter()
                .map(|&(deg, _)| match deg {
                    Some(o) => SettingChoice::Degenerate(o),
                    None => {
                        let s = bloch(next);
                        next += 1;
                        s
                    }
                })
                .collect();
            PartyStrategy {
                settings,
                noclick: choices.iter().map(|&(_, nc)| nc).collect(),
            }
        };
        let alice = build(&self.a);
        let bob = build(&self.b);
        DetectionStrategy { alice, bob }
    }
}

/// All per-party assignments with at least one quantum setting. With
/// `fix_noclick` the quantum no-click bits stay 0 (used when the
/// objective provably ignores them).
fn party_assignments(m: usize, fix_noclick: bool) -> Vec<Vec<Choice>> {
    let options: &[Choice] = if fix_noclick {
        &[(None, 0), (Some(0), 0), (Some(1), 1)]
    } else {
        &[(None, 0), (None, 1), (Some(0), 0), (Some(1), 1)]
    };
    let mut out: Vec<Vec<Choice>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for base in &out {
            for &opt in options {
                let mut a = base.clone();
                a.push(opt);
                next.push(a);
            }
        }
        out = next;
    }
    out.retain(|a| a.iter().any(|c| c.0.is_none()));
    out
}

/// Minimize the detection threshold over strategies. `None` when no
/// searched strategy violates at perfect efficiency.
///
/// Outer loop: every degenerate pattern and no-click assignment, fewest
/// degenerate settings first, deduplicated by folded fingerprint and
/// capped by `budget`. When the expression is flip-symmetric, only
/// assignments whose first free no-click bit is 0 run — the global flip
/// maps the other half onto them. In asymmetric mode Alice's no-click
/// bits are pinned to 0 during the search (neither `Q` nor `M_A` depends
/// on them) and revisited afterwards for the report's symmetric column.
/// Inner loop: Nelder–Mead over the Bloch angles.
pub fn optimize_threshold(
    ineq: &BellInequality,
    mode: ThresholdMode,
    opts: &DetectOptions,
) -> Option<ThresholdSearch> {
    let w = Weights::new(ineq);
    let l_exact = ineq.classical_bound();
    let l = to_f64(&l_exact);
    let flip_sym = is_flip_symmetric(ineq);
    let per = match opts.field {
        Field::Real => 1,
        Field::Complex => 2,
    };

    let alice_assignments =
        party_assignments(ineq.scenario.m_a, mode == ThresholdMode::AsymmetricB);
    let bob_assignments = party_assignments(ineq.scenario.m_b, false);

    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (ai, aa) in alice_assignments.iter().enumerate() {
        let deg_a = aa.iter().filter(|c| c.0.is_some()).count();
        for (bi, bb) in bob_assignments.iter().enumerate() {
            if flip_sym {
                let first_free = match mode {
                    ThresholdMode::Symmetric => aa.iter().find(|c| c.0.is_none()),
                    ThresholdMode::AsymmetricB => bb.iter().find(|c| c.0.is_none()),
                };
                if first_free.map(|c| c.1) == Some(1) {
                    continue;
                }
            }
            let deg_b = bb.iter().filter(|c| c.0.is_some()).count();
            pairs.push((ai, bi, deg_a + deg_b));
        }
    }
    pairs.sort_by_key(|&(ai, bi, degs)| (degs, ai, bi));

    let mut seen = HashSet::new();
    let mut tasks: Vec<FoldedCombo> = Vec::new();
    let mut budget_exhausted = false;
    for &(ai, bi, _) in &pairs {
        let combo = fold_combo(&w, &alice_assignments[ai], &bob_assignments[bi]);
        if !seen.insert(combo.fingerprint()) {
            continue;
        }
        if tasks.len() == opts.budget {
            budget_exhausted = true;
            break;
        }
        tasks.push(combo);
    }

    let searched = tasks.len();
    let results: Vec<Option<(f64, usize, Vec<f64>)>> = tasks
        .par_iter()
        .enumerate()
        .map(|(idx, combo)| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let n_angles = per * (combo.qa.len() + combo.qb.len());
            let mut best: Option<(f64, Vec<f64>)> = None;
            for _ in 0..opts.restarts {
                let x0: Vec<f64> =
                    (0..n_angles).map(|_| rng.gen_range(-PI..PI)).collect();
                let objective = |angles: &[f64]| -> f64 {
                    let q = combo.quantum_value(angles, per);
                    let eta = match mode {
                        ThresholdMode::Symmetric => {
                            sym_threshold_quadratic(q, combo.m_a, combo.m_b, combo.x, l)
                        }
                        ThresholdMode::AsymmetricB => {
                            asym_threshold_parts(q, combo.m_a, l)
                        }
                    };
                    match eta {
                        Some(e) => -e,
                        // Not violating yet: chase the violation itself so
                        // the search can climb into feasible territory.
                        None => -(1.0 + (l - q).max(0.0)),
                    }
                };
                let run = nm::maximize(
                    objective,
                    &x0,
                    NmOptions { edge: 0.8, max_evals: opts.max_evals, ftol: 1e-12 },
                );
                if run.value > -1.0
                    && best.as_ref().map_or(true, |(e, _)| -run.value < *e)
                {
                    best = Some((-run.value, run.x));
                }
            }
            best.map(|(eta, angles)| (eta, idx, angles))
        })
        .collect();

    let (_, idx, angles) = results
        .into_iter()
        .flatten()
        .min_by(|(e1, i1, _), (e2, i2, _)| e1.partial_cmp(e2).unwrap().then(i1.cmp(i2)))?;
    let mut combo = tasks.into_iter().nth(idx).unwrap();

    if mode == ThresholdMode::AsymmetricB {
        // Alice's no-click bits were pinned during the search; pick the
        // assignment that makes the auxiliary symmetric column best. The
        // asymmetric threshold itself is unaffected.
        let q = combo.quantum_value(&angles, per);
        let mut best_bits: Option<(f64, Vec<Choice>)> = None;
        for mask in 0u32..1 << combo.qa.len() {
            let mut a = combo.a.clone();
            for (k, &i) in combo.qa.iter().enumerate() {
                a[i].1 = (mask >> k & 1) as u8;
            }
            let trial = fold_combo(&w, &a, &combo.b);
            let eta = sym_threshold_quadratic(q, trial.m_a, trial.m_b, trial.x, l)
                .unwrap_or(f64::INFINITY);
            if best_bits.as_ref().map_or(true, |(e, _)| eta < *e) {
                best_bits = Some((eta, a));
            }
        }
        if let Some((_, a)) = best_bits {
            combo = fold_combo(&w, &a, &combo.b);
        }
    }

    let strategy = combo.strategy(&angles, per);
    let (q, m_a, m_b, x) = qmx(ineq, &strategy);
    let a_kinds: Vec<Option<u8>> = combo.a.iter().map(|c| c.0).collect();
    let b_kinds: Vec<Option<u8>> = combo.b.iter().map(|c| c.0).collect();
    let (reduced, reduced_bound) = fold_degenerate_settings(ineq, &a_kinds, &b_kinds);
    Some(ThresholdSearch {
        report: EfficiencyReport {
            q,
            m_a,
            m_b,
            x,
            l: l_exact,
            eta_sym: sym_threshold_guarded(q, m_a, m_b, x, l),
            eta_asym_b: asym_threshold_parts(q, m_a, l),
            strategy,
        },
        reduced,
        reduced_bound,
        budget_exhausted,
        combos_searched: searched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;
    use crate::linalg::{CMat, C64};
    use crate::seesaw::{full_space_value, MeasurementModel, SpaceSpec};

    fn quantum(x: f64, y: f64, z: f64) -> SettingChoice {
        SettingChoice::Quantum { x, y, z }
    }

    /// The textbook-optimal settings in probability form: Alice measures
    /// σ_z and σ_x, Bob the diagonals, everyone announces the counted
    /// outcome on no-click.
    fn chsh_optimal_strategy() -> DetectionStrategy {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DetectionStrategy {
            alice: PartyStrategy {
                settings: vec![quantum(0.0, 0.0, 1.0), quantum(1.0, 0.0, 0.0)],
                noclick: vec![0, 0],
            },
            bob: PartyStrategy {
                settings: vec![quantum(s, 0.0, s), quantum(-s, 0.0, s)],
                noclick: vec![0, 0],
            },
        }
    }

    #[test]
    fn optimal_chsh_settings_reproduce_the_known_thresholds() {
        let ineq = known::chsh();
        let strategy = chsh_optimal_strategy();
        let (q, _, _, x) = qmx(&ineq, &strategy);
        assert!((q - 0.2071068).abs() < 1e-6, "q = {q}");
        assert!(x.abs() < 1e-12, "x = {x}");
        let sym = threshold_sym(&ineq, &strategy).unwrap();
        assert!((sym - 2.0 / (1.0 + 2.0f64.sqrt())).abs() < 1e-6, "sym = {sym}");
        let asym = threshold_asym(&ineq, &strategy).unwrap();
        assert!(
            (asym - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6,
            "asym = {asym}"
        );
    }

    #[test]
    fn an_all_degenerate_strategy_sits_at_a_deterministic_vertex() {
        let ineq = known::i3322();
        let strategy = DetectionStrategy {
            alice: PartyStrategy {
                settings: vec![
                    SettingChoice::Degenerate(0),
                    SettingChoice::Degenerate(1),
                    SettingChoice::Degenerate(0),
                ],
                noclick: vec![0, 1, 0],
            },
            bob: PartyStrategy {
                settings: vec![
                    SettingChoice::Degenerate(1),
                    SettingChoice::Degenerate(0),
                    SettingChoice::Degenerate(1),
                ],
                noclick: vec![1, 0, 1],
            },
        };
        assert!(strategy.alice.is_consistent() && strategy.bob.is_consistent());
        let (q, m_a, m_b, x) = qmx(&ineq, &strategy);
        assert_eq!(q, m_a);
        assert_eq!(q, m_b);
        assert_eq!(q, x);
        assert!(q <= to_f64(&ineq.classical_bound()) + 1e-12);
        // Same value straight from the vertex evaluation.
        let vertex = crate::ineq::DeterministicVertex {
            alpha: vec![true, false, true],
            beta: vec![false, true, false],
        };
        let direct = to_f64(&ineq.evaluate(&vertex.correlation_point()));
        assert!((q - direct).abs() < 1e-12);
    }

    #[test]
    fn the_mixture_interpolates_its_corners() {
        let (q, m_a, m_b, x) = (0.3, -0.1, -0.2, -0.5);
        assert_eq!(mixture_value(q, m_a, m_b, x, 1.0, 1.0), q);
        assert_eq!(mixture_value(q, m_a, m_b, x, 1.0, 0.0), m_a);
        assert_eq!(mixture_value(q, m_a, m_b, x, 0.0, 1.0), m_b);
        assert_eq!(mixture_value(q, m_a, m_b, x, 0.0, 0.0), x);
    }

    #[test]
    fn quantum_component_matches_the_product_space_evaluation() {
        // Independent oracle: the same projectors on the same state,
        // evaluated by the n²-dimensional contraction in the see-saw
        // module.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ineq in [known::chsh(), known::i3322()] {
            for _ in 0..10 {
                let mut bloch = || {
                    let th: f64 = rng.gen_range(0.0..PI);
                    let ph: f64 = rng.gen_range(-PI..PI);
                    (th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos())
                };
                let party = |m: usize, bloch: &mut dyn FnMut() -> (f64, f64, f64)| {
                    let settings: Vec<SettingChoice> = (0..m)
                        .map(|_| {
                            let (x, y, z) = bloch();
                            quantum(x, y, z)
                        })
                        .collect();
                    PartyStrategy { settings, noclick: vec![0; m] }
                };
                let strategy = DetectionStrategy {
                    alice: party(ineq.scenario.m_a, &mut bloch),
                    bob: party(ineq.scenario.m_b, &mut bloch),
                };
                let (q, _, _, _) = qmx(&ineq, &strategy);

                let as_projector = |s: &SettingChoice| -> CMat {
                    let SettingChoice::Quantum { x, y, z } = *s else { unreachable!() };
                    let mut p = CMat::zeros(2, 2);
                    p[(0, 0)] = C64::new((1.0 + z) / 2.0, 0.0);
                    p[(1, 1)] = C64::new((1.0 - z) / 2.0, 0.0);
                    p[(0, 1)] = C64::new(x / 2.0, -y / 2.0);
                    p[(1, 0)] = C64::new(x / 2.0, y / 2.0);
                    p
                };
                let spec = SpaceSpec::new(ineq.scenario, 2, Field::Complex).unwrap();
                let c = std::f64::consts::FRAC_1_SQRT_2;
                let model = MeasurementModel {
                    spec,
                    c: vec![c, c],
                    params_a: vec![Vec::new(); ineq.scenario.m_a],
                    params_b: vec![Vec::new(); ineq.scenario.m_b],
                    a_ops: strategy.alice.settings.iter().map(as_projector).collect(),
                    b_ops: strategy.bob.settings.iter().map(as_projector).collect(),
                };
                let oracle = full_space_value(&ineq, &model);
                assert!((q - oracle).abs() < 1e-10, "q = {q}, oracle = {oracle}");
            }
        }
    }

    #[test]
    fn folding_shifts_every_component_by_the_same_constant() {
        let ineq = known::i3322();
        let a_kinds = [None, None, Some(0u8)];
        let b_kinds = [None, Some(1u8), None];
        let (reduced, reduced_bound) = fold_degenerate_settings(&ineq, &a_kinds, &b_kinds);
        assert_eq!(reduced.scenario, Scenario::new(2, 2));
        let shift = to_f64(&(&ineq.b0 - &reduced.b0));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let mut bloch = || {
                let th: f64 = rng.gen_range(0.0..PI);
                (th.sin(), 0.0, th.cos())
            };
            let (ax, ay, az) = bloch();
            let (cx, cy, cz) = bloch();
            let (dx, dy, dz) = bloch();
            let full = DetectionStrategy {
                alice: PartyStrategy {
                    settings: vec![
                        quantum(ax, ay, az),
                        quantum(cx, cy, cz),
                        SettingChoice::Degenerate(0),
                    ],
                    noclick: vec![1, 0, 0],
                },
                bob: PartyStrategy {
                    settings: vec![
                        quantum(dx, dy, dz),
                        SettingChoice::Degenerate(1),
                        quantum(0.0, 0.0, 1.0),
                    ],
                    noclick: vec![0, 1, 1],
                },
            };
            let reduced_strategy = DetectionStrategy {
                alice: PartyStrategy {
                    settings: full.alice.settings[..2].to_vec(),
                    noclick: full.alice.noclick[..2].to_vec(),
                },
                bob: PartyStrategy {
                    settings: vec![full.bob.settings[0], full.bob.settings[2]],
                    noclick: vec![full.bob.noclick[0], full.bob.noclick[2]],
                },
            };
            let (q, m_a, m_b, x) = qmx(&ineq, &full);
            let (q2, m_a2, m_b2, x2) = qmx(&reduced, &reduced_strategy);
            for (lhs, rhs) in [(q, q2), (m_a, m_a2), (m_b, m_b2), (x, x2)] {
                assert!((lhs - (rhs + shift)).abs() < 1e-9, "{lhs} vs {rhs} + {shift}");
            }
        }
        // Any reduced-side optimum extends by the pinned settings, so the
        // full bound dominates the shifted reduced bound.
        let l = to_f64(&ineq.classical_bound());
        assert!(l >= to_f64(&reduced_bound) + shift - 1e-12);
    }

    #[test]
    fn pinning_a_setting_never_improves_the_threshold() {
        let ineq = known::i3322();
        let a_kinds = [None, None, Some(0u8)];
        let b_kinds = [None, None, None];
        let (reduced, _) = fold_degenerate_settings(&ineq, &a_kinds, &b_kinds);
        // Seed with a strategy that actually violates the reduced
        // expression, then jitter it; random directions alone almost never
        // violate here.
        let opts = DetectOptions {
            field: Field::Complex,
            restarts: 4,
            max_evals: 1500,
            seed: 17,
            ..DetectOptions::default()
        };
        let seed_strategy = optimize_threshold(&reduced, ThresholdMode::Symmetric, &opts)
            .expect("the reduced expression has a quantum violation")
            .report
            .strategy;

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut compared = 0;
        for trial in 0..20 {
            let jitter = |s: &SettingChoice, rng: &mut ChaCha8Rng| -> SettingChoice {
                match *s {
                    SettingChoice::Degenerate(o) => SettingChoice::Degenerate(o),
                    SettingChoice::Quantum { x, y, z } => {
                        let scale = 0.25 * trial as f64 / 20.0;
                        let th = z.clamp(-1.0, 1.0).acos() + rng.gen_range(-scale..=scale);
                        let ph = y.atan2(x) + rng.gen_range(-scale..=scale);
                        quantum(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos())
                    }
                }
            };
            let reduced_strategy = DetectionStrategy {
                alice: PartyStrategy {
                    settings: seed_strategy
                        .alice
                        .settings
                        .iter()
                        .map(|s| jitter(s, &mut rng))
                        .collect(),
                    noclick: seed_strategy.alice.noclick.clone(),
                },
                bob: PartyStrategy {
                    settings: seed_strategy
                        .bob
                        .settings
                        .iter()
                        .map(|s| jitter(s, &mut rng))
                        .collect(),
                    noclick: seed_strategy.bob.noclick.clone(),
                },
            };
            let mut full = reduced_strategy.clone();
            full.alice.settings.push(SettingChoice::Degenerate(0));
            full.alice.noclick.push(0);
            if let Some(full_eta) = threshold_sym(&ineq, &full) {
                let reduced_eta = threshold_sym(&reduced, &reduced_strategy)
                    .expect("a violating pinned strategy must violate the reduction too");
                assert!(
                    full_eta >= reduced_eta - 1e-9,
                    "pinned {full_eta} undercuts reduced {reduced_eta}"
                );
                compared += 1;
            }
        }
        assert!(compared > 0, "no sampled strategy violated the full expression");
    }

    #[test]
    fn thresholds_do_not_depend_on_setting_labels() {
        let ineq = known::chsh();
        let strategy = chsh_optimal_strategy();
        // Swap Bob's two settings in both the expression and the strategy.
        let swapped = BellInequality::new(
            ineq.scenario,
            ineq.b_a.clone(),
            vec![ineq.b_b[1].clone(), ineq.b_b[0].clone()],
            ineq.b_ab.iter().map(|r| vec![r[1].clone(), r[0].clone()]).collect(),
            ineq.b0.clone(),
        )
        .unwrap();
        let relabeled = DetectionStrategy {
            alice: strategy.alice.clone(),
            bob: PartyStrategy {
                settings: vec![strategy.bob.settings[1], strategy.bob.settings[0]],
                noclick: vec![strategy.bob.noclick[1], strategy.bob.noclick[0]],
            },
        };
        assert_eq!(qmx(&ineq, &strategy), qmx(&swapped, &relabeled));
        assert_eq!(threshold_sym(&ineq, &strategy), threshold_sym(&swapped, &relabeled));
        assert_eq!(
            threshold_asym(&ineq, &strategy),
            threshold_asym(&swapped, &relabeled)
        );
    }

    #[test]
    fn outcome_flips_preserve_the_equivalence_class() {
        assert!(is_flip_symmetric(&known::chsh()));
        assert!(!is_flip_symmetric(&known::i3322()));
        // Flipping is one of the relabelings the canonical form quotients
        // out, so the class key never moves.
        let flipped = flip_all_outcomes(&known::i3322());
        assert_eq!(
            crate::sym::canonical_key(&flipped),
            crate::sym::canonical_key(&known::i3322())
        );
    }

    #[test]
    fn threshold_formula_edge_cases() {
        // Hand-checked quadratic: Q=1, M_A=M_B=X=0, L=1/2 → η² = 1/2.
        let eta = sym_threshold_guarded(1.0, 0.0, 0.0, 0.0, 0.5).unwrap();
        assert!((eta - 0.5f64.sqrt()).abs() < 1e-9);
        // Asymmetric closed form.
        let eta = asym_threshold_parts(1.0, -1.0, 0.0).unwrap();
        assert!((eta - 0.5).abs() < 1e-12);
        // No violation at perfect detectors → no threshold.
        assert!(sym_threshold_guarded(0.4, 0.0, 0.0, 0.0, 0.5).is_none());
        assert!(asym_threshold_parts(0.4, 0.0, 0.5).is_none());
        // Q = M_A leaves the asymmetric mixture flat.
        assert!(asym_threshold_parts(0.5, 0.5, 0.0).is_none());
    }

    #[test]
    fn optimization_recovers_the_chsh_symmetric_threshold() {
        let opts =
            DetectOptions { field: Field::Real, seed: 2, ..DetectOptions::default() };
        let search =
            optimize_threshold(&known::chsh(), ThresholdMode::Symmetric, &opts).unwrap();
        let report = &search.report;
        let eta = report.eta_sym.unwrap();
        assert!((eta - 0.8284271).abs() < 1e-3, "eta_sym = {eta}");
        assert!(report.q >= report.m_a - 1e-9 && report.q >= report.m_b - 1e-9);
        assert!(report.strategy.alice.is_consistent());
        assert!(report.strategy.bob.is_consistent());
        assert!(!search.budget_exhausted);
        // The winning pattern keeps every setting quantum, so the reduced
        // expression is the original one.
        assert_eq!(search.reduced.coeff_vec(), known::chsh().coeff_vec());
    }

    #[test]
    fn a_tiny_budget_is_reported_as_exhausted() {
        let opts = DetectOptions {
            field: Field::Real,
            budget: 1,
            restarts: 2,
            max_evals: 300,
            ..DetectOptions::default()
        };
        let search = optimize_threshold(&known::chsh(), ThresholdMode::Symmetric, &opts);
        if let Some(s) = search {
            assert!(s.budget_exhausted);
            assert_eq!(s.combos_searched, 1);
        }
    }
}
