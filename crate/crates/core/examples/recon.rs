// Scratch reconnaissance driver: facet-graph walks used to reconstruct the
// named catalog entries. Not part of the shipped tree.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::time::Instant;

use bellbound_core::catalog;
use bellbound_core::facet::{shelling_step, ShellingState};
use bellbound_core::ineq::BellInequality;
use bellbound_core::known;
use bellbound_core::rat::{primitive_integer, Rat};
use bellbound_core::seesaw::{seesaw, Field, SeesawOptions, SpaceSpec};
use bellbound_core::sym::{canonical_key, is_positivity, CanonicalKey};
use bellbound_core::Scenario;
use num_traits::Zero;
use rayon::prelude::*;

/// Zero-pad an inequality into a larger scenario (same b0).
fn lift(ineq: &BellInequality, m_a: usize, m_b: usize) -> BellInequality {
    let sc = ineq.scenario;
    assert!(m_a >= sc.m_a && m_b >= sc.m_b);
    let big = Scenario::new(m_a, m_b);
    let d = big.dim();
    let mut coeffs = vec![Rat::zero(); d + 1];
    let old = ineq.coeff_vec();
    coeffs[0] = old[0].clone();
    for i in 0..sc.m_a {
        coeffs[1 + i] = old[1 + i].clone();
    }
    for j in 0..sc.m_b {
        coeffs[1 + m_a + j] = old[1 + sc.m_a + j].clone();
    }
    for i in 0..sc.m_a {
        for j in 0..sc.m_b {
            coeffs[1 + m_a + m_b + i * m_b + j] =
                old[1 + sc.m_a + sc.m_b + i * sc.m_b + j].clone();
        }
    }
    BellInequality::from_coeff_vec(big, &coeffs).unwrap()
}

fn digits_or_coeffs(ineq: &BellInequality) -> String {
    match catalog::compact_digits(ineq) {
        Some(d) => d,
        None => {
            let ints = primitive_integer(&ineq.coeff_vec());
            format!(
                "general b0={} coeffs=[{}]",
                ints[0],
                ints[1..].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            )
        }
    }
}

fn r2_fingerprint(ineq: &BellInequality, heavy: bool) -> (f64, Vec<usize>, Vec<usize>) {
    let spec = SpaceSpec::new(ineq.scenario, 2, Field::Real).unwrap();
    let opts = if heavy {
        SeesawOptions { probes: 48, full_runs: 8, seed: 7, ..SeesawOptions::default() }
    } else {
        SeesawOptions {
            probes: 16,
            full_runs: 4,
            probe_sweeps: 16,
            max_sweeps: 250,
            seed: 7,
            ..SeesawOptions::default()
        }
    };
    let rep = seesaw(ineq, &spec, &opts);
    (rep.violation, rep.op_ranks_a, rep.op_ranks_b)
}

/// Re-fingerprint with one setting's projector pinned degenerate (rank 0 or
/// rank n), sweeping every position on both sides. An optimum that uses a
/// degenerate projector is invisible to the all-rank-1 run, so any class that
/// misses its target there gets this second pass. Returns the best value per
/// pattern alongside the plain run.
fn degen_sweep(ineq: &BellInequality, n: usize, field: Field) -> Vec<(String, f64)> {
    let sc = ineq.scenario;
    let opts = SeesawOptions {
        probes: 16,
        full_runs: 4,
        probe_sweeps: 16,
        max_sweeps: 250,
        seed: 7,
        ..SeesawOptions::default()
    };
    let base = (n / 2).max(1);
    let mut out = Vec::new();
    let mut run = |ra: Vec<usize>, rb: Vec<usize>, tag: String| {
        if let Ok(spec) = SpaceSpec::with_ranks(sc, n, field, ra, rb) {
            let rep = seesaw(ineq, &spec, &opts);
            out.push((tag, rep.violation));
        }
    };
    run(vec![base; sc.m_a], vec![base; sc.m_b], "plain".into());
    for i in 0..sc.m_a {
        for pin in [0usize, n] {
            let mut ra = vec![base; sc.m_a];
            ra[i] = pin;
            run(ra, vec![base; sc.m_b], format!("A{}={}", i + 1, pin));
        }
    }
    for j in 0..sc.m_b {
        for pin in [0usize, n] {
            let mut rb = vec![base; sc.m_b];
            rb[j] = pin;
            run(vec![base; sc.m_a], rb, format!("B{}={}", j + 1, pin));
        }
    }
    out
}

fn parse_general(sc: Scenario, b0: i64, coeffs: &[i64]) -> BellInequality {
    let mut v = vec![Rat::from_integer(b0.into())];
    v.extend(coeffs.iter().map(|&c| Rat::from_integer(c.into())));
    BellInequality::from_coeff_vec(sc, &v).unwrap()
}

struct Walk {
    seen_raw: BTreeSet<Vec<Rat>>,
    classes: BTreeMap<CanonicalKey, BellInequality>,
    queue: Vec<BellInequality>,
}

impl Walk {
    fn new() -> Self {
        Walk { seen_raw: BTreeSet::new(), classes: BTreeMap::new(), queue: Vec::new() }
    }

    fn raw_key(ineq: &BellInequality) -> Vec<Rat> {
        primitive_integer(&ineq.coeff_vec()).into_iter().map(Rat::from_integer).collect()
    }

    /// Returns true when the inequality starts a brand-new class.
    fn offer(&mut self, ineq: BellInequality) -> bool {
        if !self.seen_raw.insert(Self::raw_key(&ineq)) {
            return false;
        }
        let key = canonical_key(&ineq);
        if self.classes.contains_key(&key) {
            return false;
        }
        self.classes.insert(key, ineq.clone());
        self.queue.push(ineq);
        true
    }

    fn expand_next(&mut self) -> Option<Vec<BellInequality>> {
        let facet = self.queue.pop()?;
        let state = ShellingState::new(&facet).expect("queue holds verified facets");
        let found: Vec<BellInequality> = (0..state.vertex_count())
            .into_par_iter()
            .filter_map(|v| shelling_step(&state, v).ok().flatten())
            .collect();
        let mut fresh = Vec::new();
        for f in found {
            if self.offer(f.clone()) {
                fresh.push(f);
            }
        }
        Some(fresh)
    }
}

fn walk3422() {
    let t0 = Instant::now();
    let li3322 = lift(&known::i3322(), 3, 4);
    let lchsh = lift(&known::chsh(), 3, 4);
    println!("lifted i3322 tight: {:?}", li3322.is_tight());
    println!("lifted chsh  tight: {:?}", lchsh.is_tight());

    let mut walk = Walk::new();
    walk.offer(li3322);
    walk.offer(lchsh);
    let mut expansions = 0;
    while expansions < 400 {
        match walk.expand_next() {
            Some(fresh) => {
                expansions += 1;
                if !fresh.is_empty() {
                    println!(
                        "[{expansions}] +{} classes (total {}) {:?}",
                        fresh.len(),
                        walk.classes.len(),
                        t0.elapsed()
                    );
                }
            }
            None => break,
        }
    }
    println!("walk done: {} classes, {} expansions, {:?}", walk.classes.len(), expansions, t0.elapsed());

    let reps: Vec<&BellInequality> = walk.classes.values().collect();
    let prints: Vec<String> = reps
        .par_iter()
        .map(|ineq| {
            let triv = is_positivity(ineq);
            let (v, ra, rb) = if triv { (0.0, vec![], vec![]) } else { r2_fingerprint(ineq, false) };
            format!(
                "viol_R2={v:.7} ranks={:?}/{:?} triv={triv} b0={} L={:?} :: {}",
                ra,
                rb,
                ineq.b0,
                ineq.classical_bound(),
                digits_or_coeffs(ineq)
            )
        })
        .collect();
    for p in prints {
        println!("{p}");
    }
    println!("total {:?}", t0.elapsed());
}

/// Dense two-phase float simplex for `min c·x, A x = rhs, x ≥ 0`.
/// Returns the primal solution or None on cycling/infeasibility.
fn float_lp(a: &[Vec<f64>], rhs: &[f64], c: &[f64], max_iter: usize) -> Option<Vec<f64>> {
    let m = a.len();
    let n = c.len();
    // Tableau columns: n structural + m artificial + 1 rhs.
    let cols = n + m + 1;
    let mut t = vec![vec![0.0f64; cols]; m];
    for i in 0..m {
        let flip = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][cols - 1] = flip * rhs[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let pivot = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, r: usize, cl: usize| {
        let p = t[r][cl];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        for i in 0..t.len() {
            if i != r && t[i][cl].abs() > 1e-12 {
                let f = t[i][cl];
                for j in 0..cols {
                    let sub = f * t[r][j];
                    t[i][j] -= sub;
                }
            }
        }
        basis[r] = cl;
    };

    // One simplex phase with Bland's rule on the given objective row.
    let run = |t: &mut Vec<Vec<f64>>,
               basis: &mut Vec<usize>,
               obj: &mut Vec<f64>,
               allowed: usize|
     -> bool {
        for _ in 0..max_iter {
            // Reduced costs: obj already kept reduced (we eliminate basic cols).
            let mut enter = None;
            for j in 0..allowed {
                if obj[j] < -1e-9 {
                    enter = Some(j);
                    break; // Bland: smallest index
                }
            }
            let Some(e) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                if t[i][e] > 1e-9 {
                    let ratio = t[i][cols - 1] / t[i][e];
                    match leave {
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && basis[i] < basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                        None => leave = Some((i, ratio)),
                    }
                }
            }
            let Some((r, _)) = leave else { return false }; // unbounded
            pivot(t, basis, r, e);
            // keep objective reduced
            let f = obj[e];
            if f.abs() > 1e-12 {
                for j in 0..cols {
                    obj[j] -= f * t[r][j];
                }
            }
        }
        false
    };

    // Phase 1: minimize sum of artificials.
    let mut obj1 = vec![0.0; cols];
    for j in n..n + m {
        obj1[j] = 1.0;
    }
    for i in 0..m {
        // eliminate basic artificials from obj
        for j in 0..cols {
            obj1[j] -= t[i][j];
        }
    }
    if !run(&mut t, &mut basis, &mut obj1, n + m) {
        return None;
    }
    let art_value: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| t[i][cols - 1])
        .sum();
    if art_value > 1e-7 {
        return None; // infeasible
    }

    // Phase 2 on the real objective, artificials barred from entering.
    let mut obj2 = vec![0.0; cols];
    obj2[..n].copy_from_slice(c);
    for i in 0..m {
        if basis[i] < n {
            let f = obj2[basis[i]];
            if f.abs() > 1e-12 {
                let row = t[i].clone();
                for j in 0..cols {
                    obj2[j] -= f * row[j];
                }
            }
        }
    }
    if !run(&mut t, &mut basis, &mut obj2, n) {
        return None;
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][cols - 1];
        }
    }
    Some(x)
}

/// Exact hyperplane through the affine span of `points` (rows), provided the
/// span has dimension d−1: returns `(b, b0)` with `b·p = b0` on every point.
fn fit_hyperplane(points: &[&[Rat]]) -> Option<(Vec<Rat>, Rat)> {
    let d = points[0].len();
    // Solve for (b, b0): [p | -1]·(b,b0)ᵀ = 0. Gaussian elimination on the
    // (d+1)-column system; nullity must be exactly 1.
    let mut m: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<Rat> = p.to_vec();
            row.push(-Rat::one());
            row
        })
        .collect();
    let rows = m.len();
    let colc = d + 1;
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..colc {
        let Some(pr) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].clone();
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &inv;
                for cc in col..colc {
                    let sub = &f * &m[rank][cc];
                    m[r][cc] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    if rank != d {
        return None; // nullity != 1
    }
    // Free column = the one not in pivot_cols.
    let free = (0..colc).find(|c| !pivot_cols.contains(c))?;
    let mut sol = vec![Rat::zero(); colc];
    sol[free] = Rat::one();
    for (k, &pc) in pivot_cols.iter().enumerate() {
        // row k: m[k][pc]·sol[pc] + m[k][free]·1 = 0
        sol[pc] = -&m[k][free] / &m[k][pc];
    }
    let b = sol[..d].to_vec();
    let b0 = sol[d].clone();
    Some((b, b0))
}

use num_traits::One;

struct Shooter {
    sc: Scenario,
    /// Vertex coordinates in p-space.
    points: Vec<Vec<Rat>>,
    pf: Vec<Vec<f64>>,
    centroid_f: Vec<f64>,
}

impl Shooter {
    fn new(sc: Scenario) -> Self {
        let points: Vec<Vec<Rat>> =
            sc.vertices().map(|v| v.correlation_point().to_vec()).collect();
        let pf: Vec<Vec<f64>> = points
            .iter()
            .map(|p| p.iter().map(|x| rat_f64(x)).collect())
            .collect();
        let d = sc.dim();
        let n = points.len();
        let centroid_f =
            (0..d).map(|k| pf.iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        Shooter { sc, points, pf, centroid_f }
    }

    /// Shoot through vertices along direction `dir`, with the line anchored
    /// at `anchor` (must be interior); return exact, verified facets. With
    /// `vcap > 0` only a pseudo-random subset of that many vertices is tried
    /// (`salt` picks the subset), trading coverage for speed.
    fn pass(
        &self,
        anchor: &[f64],
        dir: &[f64],
        seen_active: &mut BTreeSet<Vec<usize>>,
        vcap: usize,
        salt: u64,
    ) -> Vec<BellInequality> {
        let d = self.sc.dim();
        let n = self.points.len();
        let q: Vec<Vec<f64>> = self
            .pf
            .iter()
            .map(|p| (0..d).map(|k| p[k] - anchor[k]).collect())
            .collect();
        let chosen: Vec<usize> = if vcap == 0 || vcap >= n {
            (0..n).collect()
        } else {
            use rand::prelude::*;
            use rand_chacha::ChaCha8Rng;
            let mut r = ChaCha8Rng::seed_from_u64(salt);
            rand::seq::index::sample(&mut r, n, vcap).into_vec()
        };
        let mut found = Vec::new();
        for v in chosen {
            // Variables: λ_w (n), ν±, τ± → n+4 columns.
            let nn = n + 4;
            let mut rows = Vec::with_capacity(d + 1);
            let mut rhs = Vec::with_capacity(d + 1);
            for k in 0..d {
                let mut row = Vec::with_capacity(nn);
                for w in 0..n {
                    row.push(q[w][k]);
                }
                row.push(q[v][k]);
                row.push(-q[v][k]);
                row.push(dir[k]);
                row.push(-dir[k]);
                rows.push(row);
                rhs.push(0.0);
            }
            let mut sum_row = vec![1.0; n + 2];
            sum_row.extend_from_slice(&[0.0, 0.0]);
            rows.push(sum_row);
            rhs.push(1.0);
            let mut c = vec![0.0; nn];
            c[n + 2] = 1.0; // min τ
            c[n + 3] = -1.0;
            let Some(x) = float_lp(&rows, &rhs, &c, 4000) else { continue };
            let mut active: Vec<usize> =
                (0..n).filter(|&w| x[w] > 1e-7).collect();
            if !active.contains(&v) {
                active.push(v);
                active.sort();
            }
            if active.len() < d - 1 || !seen_active.insert(active.clone()) {
                continue;
            }
            let pts: Vec<&[Rat]> = active.iter().map(|&w| self.points[w].as_slice()).collect();
            let Some((mut b, mut b0)) = fit_hyperplane(&pts) else { continue };
            // Orient so the polytope is on the ≤ side; drop if cut.
            let mut has_below = false;
            let mut has_above = false;
            for p in &self.points {
                let val: Rat = b.iter().zip(p).map(|(bk, pk)| bk * pk).sum();
                if val < b0 {
                    has_below = true;
                } else if val > b0 {
                    has_above = true;
                }
                if has_below && has_above {
                    break;
                }
            }
            if has_below && has_above {
                continue;
            }
            if has_above {
                for bk in &mut b {
                    *bk = -bk.clone();
                }
                b0 = -b0;
            }
            let mut coeffs = Vec::with_capacity(d + 1);
            coeffs.push(b0);
            coeffs.extend(b);
            let ints = primitive_integer(&coeffs);
            let rats: Vec<Rat> = ints.into_iter().map(Rat::from_integer).collect();
            let cand = BellInequality::from_coeff_vec(self.sc, &rats).unwrap();
            if cand.is_tight().unwrap_or(false) {
                found.push(cand);
            }
        }
        found
    }
}

fn rat_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// Deepest slice threshold that keeps at most `cap` vertices.
fn deep_thresholds(ineq: &BellInequality, cap: usize) -> Vec<(Rat, usize)> {
    let sc = ineq.scenario;
    let mut values: Vec<Rat> = sc
        .vertices()
        .map(|v| ineq.evaluate(&v.correlation_point()))
        .filter(|v| *v < ineq.b0)
        .collect();
    values.sort();
    values.dedup();
    // Deepest (smallest t) first, shallowest last; keep only those under cap.
    let all: Vec<Rat> = values;
    let mut out = Vec::new();
    for t in &all {
        let kept = sc
            .vertices()
            .filter(|v| ineq.evaluate(&v.correlation_point()) >= *t)
            .count();
        if kept <= cap {
            out.push((t.clone(), kept));
        }
    }
    out
}

fn slice_discover(ineq: &BellInequality, cap: usize) -> Vec<BellInequality> {
    use bellbound_core::facet::{slice, SliceSpec};
    let ladder = deep_thresholds(ineq, cap);
    for (t, kept) in ladder {
        let spec = SliceSpec {
            base: ineq.clone(),
            b0_star: Some(t.clone()),
            max_points: cap,
        };
        match slice(&spec) {
            Ok(out) => {
                eprintln!("    slice t={t} kept={kept} -> {} tight facets", out.facets.len());
                return out.facets;
            }
            Err(e) => {
                eprintln!("    slice t={t} kept={kept} failed: {e}; backing off");
            }
        }
    }
    Vec::new()
}

fn load_j129() -> Vec<BellInequality> {
    let text = std::fs::read_to_string("/root/scratch/j129.json").unwrap();
    let sc = Scenario::new(4, 4);
    let mut out = Vec::new();
    let mut parts: Vec<&str> = text.split('"').collect();
    parts.retain(|s| s.contains('-') || s.chars().all(|c| c.is_ascii_digit()));
    for chunk in parts.chunks(2) {
        if let [_k, digits] = chunk {
            if digits.len() >= 24 {
                out.push(catalog::parse_compact(digits, sc).unwrap());
            }
        }
    }
    assert_eq!(out.len(), 129, "j129.json parse");
    out
}

fn targets_for(sc: Scenario) -> Vec<(f64, &'static str)> {
    if sc.m_a == 3 && sc.m_b == 4 {
        vec![
            (0.4142136, "I1_3422(R2)"),
            (0.2990381, "I2_3422(R2)"),
            (0.4364917, "I3_3422(R2)"),
        ]
    } else if sc.m_a == 4 && sc.m_b == 4 {
        vec![
            (0.4353342, "A5(R2)"),
            (0.5412415, "AS1(R2)"),
            (0.8784928, "AS2(R2)"),
            (0.6055543, "AII1(R2)"),
            (0.5000000, "AII2(R2)"),
            (0.6213712, "I2(R2)"),
            (0.4142136, "I3/I4/I16(R2)"),
            (0.4364917, "I5(R2)"),
            (0.4616842, "I9(R2)"),
            (0.6139456, "I10(R2)"),
            (0.6383543, "I11(R2)"),
            (0.6188142, "I12(R2)"),
            (0.4348553, "I13/I15(R2)"),
            (0.4794103, "I14(R2)"),
            (0.6714085, "I17(R2)"),
        ]
    } else {
        vec![]
    }
}

fn shootwalk(which: &str, dirs_per_class: usize, max_expansions: usize) {
    use std::collections::VecDeque;
    let t0 = Instant::now();
    let (seeds, known, label): (Vec<BellInequality>, Vec<BellInequality>, &str) = match which {
        "3422" => {
            let sc = Scenario::new(3, 4);
            let li = lift(&known::i3322(), 3, 4);
            let lc = lift(&known::chsh(), 3, 4);
            let i2 = parse_general(
                sc,
                1,
                &[1, -1, 0, 0, -1, 1, -1, -1, 0, -1, 1, 1, 1, 0, 1, 0, 1, -1, -1],
            );
            let i3 = catalog::parse_compact("-10-2-2-100111-12-1-101111", sc).unwrap();
            let seeds = vec![li, lc, i2, i3];
            (seeds.clone(), seeds, "3422")
        }
        "4422" => {
            let sc3 = Scenario::new(3, 4);
            let mut seeds = vec![known::i4422_1()];
            seeds.extend(load_j129());
            seeds.push(lift(&known::i3322(), 4, 4));
            seeds.push(lift(&known::chsh(), 4, 4));
            for s in [
                "-1-20-10-10-1-11111111-11-1",
                "-10-2-2-100111-12-1-101111",
            ] {
                seeds.push(lift(&catalog::parse_compact(s, sc3).unwrap(), 4, 4));
            }
            let i2_3422 = parse_general(
                sc3,
                1,
                &[1, -1, 0, 0, -1, 1, -1, -1, 0, -1, 1, 1, 1, 0, 1, 0, 1, -1, -1],
            );
            seeds.push(lift(&i2_3422, 4, 4));
            let known_set = seeds.clone();
            (seeds, known_set, "4422")
        }
        _ => panic!("unknown shootwalk scenario"),
    };
    let sc = seeds[0].scenario;
    let targets = targets_for(sc);
    let shooter = Shooter::new(sc);
    let d = sc.dim();

    let mut out = std::fs::File::options()
        .create(true)
        .append(true)
        .open(format!("/root/scratch/shot{label}.txt"))
        .unwrap();
    let mut known_keys: BTreeSet<CanonicalKey> = BTreeSet::new();
    for k in &known {
        known_keys.insert(canonical_key(k));
    }
    let mut seen_raw: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut seen_active: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut new_count = 0usize;
    let mut pool: Vec<BellInequality> = seeds.clone();
    let mut queue: VecDeque<BellInequality> = seeds.into_iter().collect();
    let mut expansions = 0usize;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let n_vertices = shooter.points.len();

    'outer: while let Some(facet) = queue.pop_front() {
        if expansions >= max_expansions {
            break;
        }
        expansions += 1;
        // Main direction: saturating centroid minus polytope centroid.
        let sat = facet.saturating_vertices();
        let mut main_dir = vec![0.0f64; d];
        for v in &sat {
            for (k, x) in v.correlation_point().to_vec().iter().enumerate() {
                main_dir[k] += rat_f64(x);
            }
        }
        for (k, m) in main_dir.iter_mut().enumerate() {
            *m = *m / sat.len() as f64 - shooter.centroid_f[k];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE ^ expansions as u64);
        let mut fresh_here = 0usize;
        for trial in 0..dirs_per_class.max(1) {
            // Anchor styles: facet axis from the centroid first, then rotate
            // through near-corner anchors (random vertex), near-origin anchors
            // (the all-zero deterministic point), and plain centroid shots
            // with fully random directions.
            let anchor: Vec<f64> = match trial % 3 {
                _ if trial == 0 => shooter.centroid_f.clone(),
                1 => {
                    let corner = rng.gen_range(0..n_vertices);
                    let mu = rng.gen_range(0.5..0.95);
                    (0..d)
                        .map(|k| {
                            mu * shooter.pf[corner][k] + (1.0 - mu) * shooter.centroid_f[k]
                        })
                        .collect()
                }
                2 => {
                    let mu = rng.gen_range(0.85..0.995);
                    shooter.centroid_f.iter().map(|&c| (1.0 - mu) * c).collect()
                }
                _ => shooter.centroid_f.clone(),
            };
            let dir: Vec<f64> = if trial == 0 {
                main_dir.clone()
            } else if trial % 2 == 1 {
                main_dir.iter().map(|&m| m + rng.gen_range(-1.2..1.2)).collect()
            } else {
                (0..d).map(|_| rng.gen_range(-1.0..1.0f64)).collect()
            };
            let vcap = if trial == 0 { 0 } else { 96 };
            let salt = (expansions as u64) << 8 | trial as u64;
            for cand in shooter.pass(&anchor, &dir, &mut seen_active, vcap, salt) {
                if !seen_raw.insert(Walk::raw_key(&cand)) {
                    continue;
                }
                let key = canonical_key(&cand);
                if known_keys.contains(&key) {
                    continue;
                }
                known_keys.insert(key);
                new_count += 1;
                fresh_here += 1;
                let triv = is_positivity(&cand);
                let (v, ra, rb) =
                    if triv { (0.0, vec![], vec![]) } else { r2_fingerprint(&cand, false) };
                let hits: Vec<&str> = targets
                    .iter()
                    .filter(|(t, _)| (v - t).abs() < 5e-7)
                    .map(|(_, n)| *n)
                    .collect();
                let line = format!(
                    "viol_R2={v:.7} ranks={ra:?}/{rb:?} triv={triv} match={hits:?} :: {}",
                    digits_or_coeffs(&cand)
                );
                println!("{line}");
                writeln!(out, "{line}").unwrap();
                queue.push_back(cand.clone());
                pool.push(cand);
            }
        }
        out.flush().unwrap();
        eprintln!(
            "[{expansions}] +{fresh_here} (total new {new_count}, queue {}) {:?}",
            queue.len(),
            t0.elapsed()
        );
        // When the frontier dries up, resweep the pool with fresh randomness.
        if queue.is_empty() {
            if pool.is_empty() {
                break 'outer;
            }
            eprintln!("-- resweeping pool of {} classes --", pool.len());
            queue.extend(pool.iter().cloned());
        }
    }
    println!(
        "shootwalk {label}: {new_count} new classes, {expansions} expansions, {:?}",
        t0.elapsed()
    );
}

fn slicewalk(which: &str, cap: usize, max_slices: usize) {
    let t0 = Instant::now();
    let (seeds, known, label): (Vec<BellInequality>, Vec<BellInequality>, &str) = match which {
        "3422" => {
            let li = lift(&known::i3322(), 3, 4);
            let lc = lift(&known::chsh(), 3, 4);
            (vec![li.clone(), lc.clone()], vec![li, lc], "3422")
        }
        "4422" => {
            let mut seeds = vec![known::i4422_1()];
            seeds.extend(load_j129());
            let known_set = seeds.clone();
            (seeds, known_set, "4422")
        }
        _ => panic!("unknown slicewalk scenario"),
    };
    let targets = targets_for(seeds[0].scenario);

    let mut out = std::fs::File::create(format!("/root/scratch/found{label}.txt")).unwrap();
    let mut known_keys: BTreeSet<CanonicalKey> = BTreeSet::new();
    for k in &known {
        known_keys.insert(canonical_key(k));
    }
    let mut new_classes: BTreeMap<CanonicalKey, BellInequality> = BTreeMap::new();
    let mut queue: Vec<BellInequality> = seeds;
    let mut sliced = 0;
    while let Some(seed) = queue.pop() {
        if sliced >= max_slices {
            break;
        }
        sliced += 1;
        eprintln!("[{sliced}] slicing {} ({:?})", digits_or_coeffs(&seed), t0.elapsed());
        let found = slice_discover(&seed, cap);
        for f in found {
            let key = canonical_key(&f);
            if known_keys.contains(&key) || new_classes.contains_key(&key) {
                continue;
            }
            let (v, ra, rb) = r2_fingerprint(&f, false);
            let hits: Vec<&str> = targets
                .iter()
                .filter(|(t, _)| (v - t).abs() < 5e-7)
                .map(|(_, n)| *n)
                .collect();
            let line = format!(
                "viol_R2={v:.7} ranks={ra:?}/{rb:?} match={hits:?} :: {}",
                digits_or_coeffs(&f)
            );
            println!("{line}");
            writeln!(out, "{line}").unwrap();
            out.flush().unwrap();
            new_classes.insert(key, f.clone());
            queue.push(f);
        }
    }
    println!(
        "slicewalk {label}: {} new classes after {} slices, {:?}",
        new_classes.len(),
        sliced,
        t0.elapsed()
    );
}

fn time4422() {
    let t0 = Instant::now();
    let seed = known::i4422_1();
    let state = ShellingState::new(&seed).unwrap();
    println!("state built {:?}", t0.elapsed());
    let t1 = Instant::now();
    let found: Vec<Option<BellInequality>> = (0..state.vertex_count())
        .into_par_iter()
        .map(|v| shelling_step(&state, v).ok().flatten())
        .collect();
    let hits = found.iter().flatten().count();
    println!("one expansion: {} facet hits of {} steps in {:?}", hits, state.vertex_count(), t1.elapsed());
    let t2 = Instant::now();
    let mut keys = BTreeSet::new();
    for f in found.iter().flatten() {
        keys.insert(canonical_key(f));
    }
    println!("{} distinct classes, keying took {:?}", keys.len(), t2.elapsed());
}

/// Behaviour of a Schmidt-form model: `p(i,j) = Σ_{k,l} c_k c_l A_i[l,k] B_j[l,k]`.
fn model_behaviour(m: &bellbound_core::seesaw::MeasurementModel) -> Vec<f64> {
    let n = m.spec.n;
    let sc = m.spec.scenario;
    let marg = |op: &bellbound_core::linalg::CMat| -> f64 {
        (0..n).map(|k| m.c[k] * m.c[k] * op[(k, k)].re).sum()
    };
    let joint = |a: &bellbound_core::linalg::CMat, b: &bellbound_core::linalg::CMat| -> f64 {
        let mut s = 0.0;
        for k in 0..n {
            for l in 0..n {
                s += m.c[k] * m.c[l] * (a[(l, k)] * b[(l, k)]).re;
            }
        }
        s
    };
    let mut q = Vec::with_capacity(sc.dim());
    for i in 0..sc.m_a {
        q.push(marg(&m.a_ops[i]));
    }
    for j in 0..sc.m_b {
        q.push(marg(&m.b_ops[j]));
    }
    for i in 0..sc.m_a {
        for j in 0..sc.m_b {
            q.push(joint(&m.a_ops[i], &m.b_ops[j]));
        }
    }
    q
}

/// Targeted hunt for the one missing 3422 class: build the two-CHSH-copies
/// functional on a shared Alice pair, take its rank-(011) optimum behaviour,
/// and shoot rays from inside the polytope toward that point. The exit facet
/// is violated by it, and the missing class maximally so.
fn hunt3422(tilts: usize) {
    let t0 = Instant::now();
    let sc = Scenario::new(3, 4);
    let d = sc.dim();
    // b0=0; A-marginals (0,-2,0), B-marginals (-1,0,-1,0);
    // rows A1: 0 0 0 0, A2: 1 1 1 1, A3: 1 -1 1 -1.
    let two_chsh = parse_general(
        sc,
        0,
        &[0, -2, 0, -1, 0, -1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, -1, 1, -1],
    );
    let spec =
        SpaceSpec::with_ranks(sc, 2, Field::Real, vec![0, 1, 1], vec![1, 1, 1, 1]).unwrap();
    let opts = SeesawOptions { probes: 48, full_runs: 8, seed: 11, ..SeesawOptions::default() };
    let rep = seesaw(&two_chsh, &spec, &opts);
    println!("two-CHSH seesaw value: {:.7} (want 0.4142136)", rep.violation);
    let q = model_behaviour(&rep.model);

    let shooter = Shooter::new(sc);
    let known: Vec<BellInequality> = {
        let li = lift(&known::i3322(), 3, 4);
        let lc = lift(&known::chsh(), 3, 4);
        let i2 = parse_general(
            sc,
            1,
            &[1, -1, 0, 0, -1, 1, -1, -1, 0, -1, 1, 1, 1, 0, 1, 0, 1, -1, -1],
        );
        let i3 = catalog::parse_compact("-10-2-2-100111-12-1-101111", sc).unwrap();
        vec![li, lc, i2, i3]
    };
    let mut known_keys: BTreeSet<CanonicalKey> = BTreeSet::new();
    for k in &known {
        known_keys.insert(canonical_key(k));
    }
    let targets = targets_for(sc);
    let mut seen_active: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen_raw: BTreeSet<Vec<Rat>> = BTreeSet::new();
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEE5);
    let dir0: Vec<f64> = (0..d).map(|k| q[k] - shooter.centroid_f[k]).collect();
    let scales = [0.0, 0.01, 0.03, 0.1, 0.3];
    for trial in 0..tilts {
        let eps = scales[trial % scales.len()];
        let dir: Vec<f64> = dir0.iter().map(|&m| m + eps * rng.gen_range(-1.0..1.0)).collect();
        let anchor: Vec<f64> = if trial % 4 == 3 {
            let mu = rng.gen_range(0.9..0.999);
            shooter.centroid_f.iter().map(|&c| (1.0 - mu) * c).collect()
        } else {
            shooter.centroid_f.clone()
        };
        for cand in shooter.pass(&anchor, &dir, &mut seen_active, 0, 0) {
            if !seen_raw.insert(Walk::raw_key(&cand)) {
                continue;
            }
            let key = canonical_key(&cand);
            if !known_keys.insert(key) {
                continue;
            }
            let triv = is_positivity(&cand);
            if triv {
                continue;
            }
            let (v, ra, rb) = r2_fingerprint(&cand, false);
            let hits: Vec<&str> =
                targets.iter().filter(|(t, _)| (v - t).abs() < 5e-7).map(|(_, n)| *n).collect();
            println!(
                "viol_R2={v:.7} ranks={ra:?}/{rb:?} match={hits:?} :: {}",
                digits_or_coeffs(&cand)
            );
            if hits.is_empty() {
                for (tag, dv) in degen_sweep(&cand, 2, Field::Real) {
                    let dh: Vec<&str> = targets
                        .iter()
                        .filter(|(t, _)| (dv - t).abs() < 5e-7)
                        .map(|(_, n)| *n)
                        .collect();
                    if !dh.is_empty() || tag == "plain" {
                        println!("   {tag:>6}  {dv:.7}  {dh:?}");
                    }
                }
            }
        }
    }
    println!("hunt3422 done in {:?}", t0.elapsed());
}

/// Degenerate-rank second pass over the two unmatched 3422 classes.
fn fp3422() {
    let sc = Scenario::new(3, 4);
    let cands: Vec<(&str, BellInequality)> = vec![
        (
            "x1",
            parse_general(
                sc,
                2,
                &[2, 0, -1, 0, 1, 0, 1, 0, -1, -1, -1, -1, 0, 1, -1, 1, -1, 1, 0],
            ),
        ),
        (
            "x2",
            parse_general(
                sc,
                1,
                &[1, -1, 0, 0, -1, 1, -1, -1, 0, -1, 1, 1, 1, 0, 1, 0, 1, -1, -1],
            ),
        ),
    ];
    let targets = targets_for(sc);
    for (name, ineq) in &cands {
        assert!(ineq.is_tight().unwrap_or(false), "{name} not tight?");
        println!("== {name} :: {}", digits_or_coeffs(ineq));
        for (tag, v) in degen_sweep(ineq, 2, Field::Real) {
            let hits: Vec<&str> = targets
                .iter()
                .filter(|(t, _)| (v - t).abs() < 5e-7)
                .map(|&(_, n)| n)
                .collect();
            println!("   {tag:>6}  {v:.7}  {hits:?}");
        }
    }
    // Same-class check between the two candidates.
    let k1 = canonical_key(&cands[0].1);
    let k2 = canonical_key(&cands[1].1);
    println!("same class: {}", k1 == k2);
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_default();
    let arg = |i: usize, default: usize| -> usize {
        std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
    };
    match mode.as_str() {
        "walk3422" => walk3422(),
        "time4422" => time4422(),
        "slice3422" => slicewalk("3422", arg(2, 120), arg(3, 60)),
        "slice4422" => slicewalk("4422", arg(2, 120), arg(3, 40)),
        "shoot3422" => shootwalk("3422", arg(2, 6), arg(3, 80)),
        "shoot4422" => shootwalk("4422", arg(2, 6), arg(3, 200)),
        "fp3422" => fp3422(),
        "hunt3422" => hunt3422(arg(2, 60)),
        other => {
            let _ = writeln!(std::io::stderr(), "unknown mode {other:?}");
            std::process::exit(2);
        }
    }
}
