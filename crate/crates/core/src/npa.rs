//! Moment-hierarchy upper bounds on quantum values.
//!
//! Each party's two-outcome measurements are encoded as Hermitian
//! involutions (`x² = 1`) that commute across parties. A *word* is a
//! reduced product of such operators; the moment matrix at a given level is
//! `Γ_{uv} = ⟨ψ| u† v |ψ⟩` over the level's word list. Requiring `Γ ⪰ 0`
//! with consistent entries (equal words share one variable, and the matrix
//! is kept real, so a word and its adjoint share one too) relaxes the set
//! of quantum behaviours; maximizing the Bell expression over the
//! relaxation yields an upper bound on the quantum value that tightens as
//! the level grows.
//!
//! The semidefinite program is solved in both directions at once: the
//! moment side approaches the relaxation value from below, and the trace
//! certificate approaches it from above, so the report carries a bracket
//! rather than a single float.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ineq::BellInequality;
use crate::linalg::Mat;
use crate::rat::{rat, Rat};
use crate::solvers::eig::sym_eig;
use crate::solvers::sdp::{self, SdpOptions, SdpProblem, SparseSym};
use crate::Scenario;

/// A reduced operator word: Alice letters then Bob letters (the parties
/// commute), with no adjacent repeats inside a part (involutions cancel).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
}

fn reduce_concat(left: &[u8], right: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(left.len() + right.len());
    for &x in left.iter().chain(right.iter()) {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl Word {
    pub fn identity() -> Self {
        Word { a: Vec::new(), b: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reverse both parts; each letter is Hermitian, so this is `w†`.
    pub fn adjoint(&self) -> Word {
        Word {
            a: self.a.iter().rev().copied().collect(),
            b: self.b.iter().rev().copied().collect(),
        }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word {
            a: reduce_concat(&self.a, &other.a),
            b: reduce_concat(&self.b, &other.b),
        }
    }

    /// Representative of `{w, w†}`: with a real moment matrix the two carry
    /// the same value, so they are merged into one class.
    pub fn class_repr(&self) -> Word {
        let adj = self.adjoint();
        if adj < *self {
            adj
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for &i in &self.a {
            write!(f, "A{}", i + 1)?;
        }
        for &j in &self.b {
            write!(f, "B{}", j + 1)?;
        }
        Ok(())
    }
}

/// A set of word shapes `(Alice letters, Bob letters)`; the level's word
/// list is every reduced word matching one of the shapes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelSpec {
    pub patterns: Vec<(usize, usize)>,
}

impl LevelSpec {
    pub fn new(mut patterns: Vec<(usize, usize)>) -> Self {
        if !patterns.contains(&(0, 0)) {
            patterns.push((0, 0));
        }
        patterns.sort_by_key(|&(p, q)| (p + q, q));
        patterns.dedup();
        LevelSpec { patterns }
    }

    fn pattern_label(p: usize, q: usize) -> String {
        if p + q == 0 {
            "1".into()
        } else {
            format!("{}{}", "A".repeat(p), "B".repeat(q))
        }
    }

    pub fn label(&self) -> String {
        self.patterns
            .iter()
            .map(|&(p, q)| Self::pattern_label(p, q))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Named hierarchy levels, plus escape hatches for mixed ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Level {
    /// Identity and single operators.
    L1,
    /// `L1` plus cross products `AB` — "1+AB" in the usual shorthand.
    L1AB,
    /// All words up to length two.
    L2,
    /// `L2` plus one length-three cross shape (`AAB` or `ABB`, whichever
    /// gives the smaller bound; both are solved).
    L2A,
    /// `L2` plus both length-three cross shapes.
    L2B,
    /// All words up to length three.
    L3,
    Custom(LevelSpec),
}

impl Level {
    /// The word-shape sets to try; only `L2A` has more than one candidate.
    pub fn candidate_specs(&self) -> Vec<LevelSpec> {
        let l1 = vec![(0, 0), (1, 0), (0, 1)];
        let l2 = {
            let mut v = l1.clone();
            v.extend([(2, 0), (1, 1), (0, 2)]);
            v
        };
        let l3 = {
            let mut v = l2.clone();
            v.extend([(3, 0), (2, 1), (1, 2), (0, 3)]);
            v
        };
        match self {
            Level::L1 => vec![LevelSpec::new(l1)],
            Level::L1AB => {
                let mut v = l1;
                v.push((1, 1));
                vec![LevelSpec::new(v)]
            }
            Level::L2 => vec![LevelSpec::new(l2)],
            Level::L2A => {
                let mut with_aab = l2.clone();
                with_aab.push((2, 1));
                let mut with_abb = l2;
                with_abb.push((1, 2));
                vec![LevelSpec::new(with_aab), LevelSpec::new(with_abb)]
            }
            Level::L2B => {
                let mut v = l2;
                v.extend([(2, 1), (1, 2)]);
                vec![LevelSpec::new(v)]
            }
            Level::L3 => vec![LevelSpec::new(l3)],
            Level::Custom(spec) => vec![spec.clone()],
        }
    }

    pub fn label(&self) -> String {
        match self {
            Level::L1 => "L1".into(),
            Level::L1AB => "1a".into(),
            Level::L2 => "L2".into(),
            Level::L2A => "2a".into(),
            Level::L2B => "2b".into(),
            Level::L3 => "L3".into(),
            Level::Custom(spec) => format!("custom:{}", spec.label()),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LevelParseError {
    #[error("unknown level `{0}` (expected L1, 1a, L2, 2a, 2b, L3, or custom:PATTERNS)")]
    Unknown(String),
    #[error("bad pattern token `{0}` (expected letters A/B, or 1 for the identity)")]
    BadPattern(String),
}

impl FromStr for Level {
    type Err = LevelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "l1" | "1" => return Ok(Level::L1),
            "1a" | "1+ab" => return Ok(Level::L1AB),
            "l2" | "2" => return Ok(Level::L2),
            "2a" => return Ok(Level::L2A),
            "2b" => return Ok(Level::L2B),
            "l3" | "3" => return Ok(Level::L3),
            _ => {}
        }
        if let Some(rest) = lower.strip_prefix("custom:") {
            let mut patterns = Vec::new();
            for token in rest.split([',', '+']) {
                let token = token.trim();
                if token.is_empty() || token == "1" {
                    patterns.push((0, 0));
                    continue;
                }
                let mut p = 0;
                let mut q = 0;
                for ch in token.chars() {
                    match ch {
                        'a' => p += 1,
                        'b' => q += 1,
                        _ => return Err(LevelParseError::BadPattern(token.into())),
                    }
                }
                patterns.push((p, q));
            }
            return Ok(Level::Custom(LevelSpec::new(patterns)));
        }
        Err(LevelParseError::Unknown(s.into()))
    }
}

/// All adjacent-distinct index sequences of a given length, in
/// lexicographic order.
fn sequences(n_settings: usize, len: usize) -> Vec<Vec<u8>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(len);
    fn rec(n: usize, len: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..n as u8 {
            if cur.last() == Some(&i) {
                continue;
            }
            cur.push(i);
            rec(n, len, cur, out);
            cur.pop();
        }
    }
    rec(n_settings, len, &mut cur, &mut out);
    out
}

/// The level's word list: shapes in spec order, indices lexicographic,
/// identity first.
pub fn generate_words(scenario: Scenario, spec: &LevelSpec) -> Vec<Word> {
    let mut words = Vec::new();
    for &(p, q) in &spec.patterns {
        for a_seq in sequences(scenario.m_a, p) {
            for b_seq in sequences(scenario.m_b, q) {
                words.push(Word { a: a_seq.clone(), b: b_seq });
            }
        }
    }
    words
}

/// Bell expression rewritten over involution moments. With each projector
/// `P = (1 + x)/2`, the probability form becomes
/// `constant + Σ α_i⟨a_i⟩ + Σ β_j⟨b_j⟩ + Σ γ_ij⟨a_i b_j⟩`.
#[derive(Clone, Debug)]
pub struct ObservableForm {
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
    pub gamma: Vec<Vec<Rat>>,
    pub constant: Rat,
}

pub fn bell_to_observables(ineq: &BellInequality) -> ObservableForm {
    let sc = ineq.scenario;
    let quarter = |r: &Rat| r / rat(4);
    let half = |r: &Rat| r / rat(2);
    let gamma: Vec<Vec<Rat>> = (0..sc.m_a)
        .map(|i| (0..sc.m_b).map(|j| quarter(&ineq.b_ab[i][j])).collect())
        .collect();
    let alpha: Vec<Rat> = (0..sc.m_a)
        .map(|i| half(&ineq.b_a[i]) + gamma[i].iter().sum::<Rat>())
        .collect();
    let beta: Vec<Rat> = (0..sc.m_b)
        .map(|j| half(&ineq.b_b[j]) + (0..sc.m_a).map(|i| gamma[i][j].clone()).sum::<Rat>())
        .collect();
    let constant = ineq.b_a.iter().map(half).sum::<Rat>()
        + ineq.b_b.iter().map(half).sum::<Rat>()
        + ineq.b_ab.iter().flatten().map(quarter).sum::<Rat>();
    ObservableForm { alpha, beta, gamma, constant }
}

#[derive(Clone, Debug, Error)]
pub enum NpaError {
    #[error("word list has {words} entries, over the {capacity} capacity; lower the level or sample")]
    Capacity { words: usize, capacity: usize },
    #[error("objective needs moment ⟨{word}⟩ but the level's words never produce it")]
    MissingMoment { word: String },
}

#[derive(Clone, Debug)]
pub struct NpaOptions {
    pub capacity: usize,
    /// Duality-gap tolerance handed to the interior-point solver.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep each word of length ≥ 2 with this probability (length ≤ 1 words
    /// always stay, so every objective moment remains expressible).
    pub sample: Option<f64>,
    pub sample_seed: u64,
}

impl Default for NpaOptions {
    fn default() -> Self {
        NpaOptions { capacity: 200, tol: 1e-7, max_iter: 100, sample: None, sample_seed: 0 }
    }
}

/// One level's moment-matrix structure: class representatives in
/// first-encounter order, their positions in the upper triangle, and the
/// objective weight attached to each class.
pub struct MomentStructure {
    pub words: Vec<Word>,
    pub classes: Vec<Word>,
    pub entries: Vec<Vec<(usize, usize)>>,
    pub objective: Vec<f64>,
}

pub fn build_moment_structure(
    ineq: &BellInequality,
    words: Vec<Word>,
) -> Result<MomentStructure, NpaError> {
    let n = words.len();
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut classes: Vec<Word> = Vec::new();
    let mut entries: Vec<Vec<(usize, usize)>> = Vec::new();
    for r in 0..n {
        let adj = words[r].adjoint();
        for c in r..n {
            let w = adj.concat(&words[c]).class_repr();
            if w.is_identity() {
                // u†v reduces to 1 only for u = v: diagonal entries, pinned.
                debug_assert_eq!(r, c);
                continue;
            }
            let k = *index.entry(w.clone()).or_insert_with(|| {
                classes.push(w);
                entries.push(Vec::new());
                classes.len() - 1
            });
            entries[k].push((r, c));
        }
    }

    let form = bell_to_observables(ineq);
    let sc = ineq.scenario;
    let mut objective = vec![0.0; classes.len()];
    let mut add = |w: Word, coeff: &Rat| -> Result<(), NpaError> {
        let repr = w.class_repr();
        match index.get(&repr) {
            Some(&k) => {
                objective[k] += coeff.to_f64().expect("coefficient fits in f64");
                Ok(())
            }
            None => Err(NpaError::MissingMoment { word: repr.to_string() }),
        }
    };
    for i in 0..sc.m_a {
        add(Word { a: vec![i as u8], b: vec![] }, &form.alpha[i])?;
    }
    for j in 0..sc.m_b {
        add(Word { a: vec![], b: vec![j as u8] }, &form.beta[j])?;
    }
    for i in 0..sc.m_a {
        for j in 0..sc.m_b {
            add(Word { a: vec![i as u8], b: vec![j as u8] }, &form.gamma[i][j])?;
        }
    }
    Ok(MomentStructure { words, classes, entries, objective })
}

/// Result of one hierarchy solve (for `2a`, the better of its two shapes).
#[derive(Clone, Debug)]
pub struct NpaReport {
    pub level_label: String,
    /// For levels with several candidate shape sets, the one reported.
    pub variant: String,
    pub n_words: usize,
    pub n_classes: usize,
    /// Certified side: trace certificate minus the classical threshold.
    /// This is the number to quote as the upper bound on the violation.
    pub upper_bound: f64,
    /// Moment side of the same solve; approaches the relaxation value from
    /// below, so `upper_bound − moment_value` brackets the true value.
    pub moment_value: f64,
    pub sdp_gap: f64,
    pub min_eigenvalue: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn solve_one(
    ineq: &BellInequality,
    spec: &LevelSpec,
    opts: &NpaOptions,
) -> Result<NpaReport, NpaError> {
    let mut words = generate_words(ineq.scenario, spec);
    if let Some(p) = opts.sample {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.sample_seed);
        words.retain(|w| w.len() <= 1 || rng.gen::<f64>() < p);
    }
    if words.len() > opts.capacity {
        return Err(NpaError::Capacity { words: words.len(), capacity: opts.capacity });
    }
    let n = words.len();
    let structure = build_moment_structure(ineq, words)?;
    let m = structure.classes.len();

    let constraints: Vec<SparseSym> = structure
        .entries
        .iter()
        .map(|positions| SparseSym {
            n,
            entries: positions.iter().map(|&(r, c)| (r, c, -1.0)).collect(),
        })
        .collect();
    let problem = SdpProblem {
        c: Mat::eye(n),
        constraints,
        b: structure.objective.clone(),
    };
    let result = sdp::solve(&problem, SdpOptions { tol: opts.tol, max_iter: opts.max_iter });

    // Γ(y) = I + Σ y_k E_k is the moment matrix proposed by the solver.
    let mut gamma = Mat::eye(n);
    for (k, positions) in structure.entries.iter().enumerate() {
        for &(r, c) in positions {
            gamma[(r, c)] += result.y[k];
            if r != c {
                gamma[(c, r)] += result.y[k];
            }
        }
    }
    let min_eigenvalue = sym_eig(&gamma.sym()).values[0];

    let form = bell_to_observables(ineq);
    let shift = (&form.constant - &ineq.b0).to_f64().expect("shift fits in f64");
    Ok(NpaReport {
        level_label: String::new(),
        variant: spec.label(),
        n_words: n,
        n_classes: m,
        upper_bound: result.primal_objective + shift,
        moment_value: result.dual_objective + shift,
        sdp_gap: result.primal_objective - result.dual_objective,
        min_eigenvalue,
        converged: result.converged,
        iterations: result.iterations,
    })
}

/// Upper bound on the violation (quantum value minus classical threshold)
/// at the given hierarchy level.
pub fn solve_upper_bound(
    ineq: &BellInequality,
    level: &Level,
    opts: &NpaOptions,
) -> Result<NpaReport, NpaError> {
    let mut best: Option<NpaReport> = None;
    for spec in level.candidate_specs() {
        let report = solve_one(ineq, &spec, opts)?;
        let better = match &best {
            Some(b) => report.upper_bound < b.upper_bound,
            None => true,
        };
        if better {
            best = Some(report);
        }
    }
    let mut report = best.expect("every level has at least one candidate");
    report.level_label = level.label();
    Ok(report)
}

/// A two-sided certificate: hierarchy bound above, an explicit model's
/// violation below.
#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub upper: NpaReport,
    pub lower: f64,
    pub gap: f64,
    pub matched: bool,
}

/// Tolerance under which the bracket counts as closed.
pub const MATCH_TOL: f64 = 1e-5;

pub fn certify(
    ineq: &BellInequality,
    level: &Level,
    lower: f64,
    opts: &NpaOptions,
) -> Result<CertifyReport, NpaError> {
    let upper = solve_upper_bound(ineq, level, opts)?;
    let gap = upper.upper_bound - lower;
    Ok(CertifyReport { matched: gap <= MATCH_TOL, upper, lower, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;

    fn word(a: &[u8], b: &[u8]) -> Word {
        Word { a: a.to_vec(), b: b.to_vec() }
    }

    #[test]
    fn products_reduce_and_telescope() {
        let u = word(&[0, 1], &[2]);
        let v = word(&[1, 0], &[2, 0]);
        // u†·u telescopes away entirely.
        assert!(u.adjoint().concat(&u).is_identity());
        // u·v: a-part 01·10 collapses, b-part 2·20 leaves 0.
        let uv = u.concat(&v);
        assert_eq!(uv, word(&[], &[0]));
        // Adjoint reverses within each part.
        assert_eq!(u.adjoint(), word(&[1, 0], &[2]));
    }

    #[test]
    fn class_merges_word_with_adjoint() {
        let w = word(&[1, 0], &[0, 1]);
        assert_eq!(w.class_repr(), w.adjoint().class_repr());
        // A palindromic word is its own representative.
        let p = word(&[0, 1, 0], &[]);
        assert_eq!(p.class_repr(), p);
    }

    #[test]
    fn word_counts_match_known_levels() {
        let s22 = Scenario::new(2, 2);
        let s33 = Scenario::new(3, 3);
        let s44 = Scenario::new(4, 4);
        let count = |sc, level: &Level| {
            generate_words(sc, &level.candidate_specs()[0]).len()
        };
        assert_eq!(count(s22, &Level::L1), 5);
        assert_eq!(count(s33, &Level::L1AB), 16);
        assert_eq!(count(s44, &Level::L2), 49);
        assert_eq!(count(s33, &Level::L3), 88);
        assert_eq!(count(s44, &Level::L2B), 145);
    }

    #[test]
    fn words_are_deterministic_and_identity_first() {
        let spec = &Level::L2.candidate_specs()[0];
        let words = generate_words(Scenario::new(2, 2), spec);
        assert!(words[0].is_identity());
        assert_eq!(words, generate_words(Scenario::new(2, 2), spec));
        // No duplicates, all reduced.
        let mut seen = std::collections::HashSet::new();
        for w in &words {
            assert!(seen.insert(w.clone()));
            assert!(w.a.windows(2).all(|p| p[0] != p[1]));
        }
    }

    #[test]
    fn observable_form_of_chsh() {
        let form = bell_to_observables(&known::chsh());
        // All marginal weights cancel; the cross terms are ±1/4 and the
        // constant is −1/2.
        for x in form.alpha.iter().chain(form.beta.iter()) {
            assert_eq!(*x, rat(0));
        }
        assert_eq!(form.gamma[0][0], crate::rat::ratio(1, 4));
        assert_eq!(form.gamma[1][1], crate::rat::ratio(-1, 4));
        assert_eq!(form.constant, crate::rat::ratio(-1, 2));
    }

    #[test]
    fn chsh_reaches_tsirelson_at_level_one() {
        let target = (2.0_f64.sqrt() - 1.0) / 2.0;
        for level in [Level::L1, Level::L1AB] {
            let r = solve_upper_bound(&known::chsh(), &level, &NpaOptions::default()).unwrap();
            assert!(r.converged, "{} did not converge", level.label());
            assert!(
                (r.upper_bound - target).abs() < 1e-5,
                "{}: bound {} vs {}",
                level.label(),
                r.upper_bound,
                target
            );
            assert!(r.min_eigenvalue > -1e-8);
            assert!(r.sdp_gap.abs() < 1e-6);
            assert!(r.moment_value <= r.upper_bound + 1e-9);
        }
    }

    #[test]
    fn i3322_level_two_bound() {
        let r =
            solve_upper_bound(&known::i3322(), &Level::L2, &NpaOptions::default()).unwrap();
        assert!(r.converged);
        assert!((r.upper_bound - 0.2509397).abs() < 2e-5, "bound {}", r.upper_bound);
        assert_eq!(r.n_words, 28);
    }

    #[test]
    fn i3322_level_three_bound() {
        let r =
            solve_upper_bound(&known::i3322(), &Level::L3, &NpaOptions::default()).unwrap();
        assert!(r.converged);
        assert!((r.upper_bound - 0.2508756).abs() < 2e-5, "bound {}", r.upper_bound);
    }

    #[test]
    fn levels_tighten_monotonically() {
        let chsh = known::chsh();
        let opts = NpaOptions::default();
        let b1 = solve_upper_bound(&chsh, &Level::L1, &opts).unwrap().upper_bound;
        let b1a = solve_upper_bound(&chsh, &Level::L1AB, &opts).unwrap().upper_bound;
        let b2 = solve_upper_bound(&chsh, &Level::L2, &opts).unwrap().upper_bound;
        assert!(b1a <= b1 + 1e-6);
        assert!(b2 <= b1a + 1e-6);
    }

    #[test]
    fn capacity_is_enforced() {
        let err = solve_upper_bound(
            &known::i3322(),
            &Level::L3,
            &NpaOptions { capacity: 40, ..NpaOptions::default() },
        )
        .unwrap_err();
        assert!(matches!(err, NpaError::Capacity { words: 88, capacity: 40 }));
    }

    #[test]
    fn sampling_keeps_short_words_and_is_seeded() {
        let opts = NpaOptions {
            sample: Some(0.5),
            sample_seed: 11,
            ..NpaOptions::default()
        };
        // Sampled solve still succeeds (objective moments survive) and its
        // bound is no tighter than the full level's.
        let full = solve_upper_bound(&known::i3322(), &Level::L2, &NpaOptions::default())
            .unwrap();
        let sampled = solve_upper_bound(&known::i3322(), &Level::L2, &opts).unwrap();
        assert!(sampled.n_words < full.n_words);
        assert!(sampled.upper_bound >= full.upper_bound - 1e-6);
        let again = solve_upper_bound(&known::i3322(), &Level::L2, &opts).unwrap();
        assert_eq!(sampled.n_words, again.n_words);
    }

    #[test]
    fn level_parsing_round_trips() {
        for (text, label) in [
            ("L1", "L1"),
            ("1a", "1a"),
            ("L2", "L2"),
            ("2a", "2a"),
            ("2b", "2b"),
            ("L3", "L3"),
        ] {
            let level: Level = text.parse().unwrap();
            assert_eq!(level.label(), label);
        }
        let custom: Level = "custom:AB,AAB".parse().unwrap();
        assert_eq!(custom.label(), "custom:1+AB+AAB");
        assert!("L9".parse::<Level>().is_err());
        assert!("custom:AXB".parse::<Level>().is_err());
    }

    #[test]
    fn certify_closes_the_chsh_bracket() {
        let lower = (2.0_f64.sqrt() - 1.0) / 2.0 - 3e-6;
        let report =
            certify(&known::chsh(), &Level::L1AB, lower, &NpaOptions::default()).unwrap();
        assert!(report.matched, "gap {}", report.gap);
        assert!(report.gap >= 0.0);
    }
}
