//! `bellbound` — catalogs, bounds, certificates, and thresholds for
//! two-party two-outcome Bell inequalities, from the command line.

mod catalogs;
mod golden;
mod record;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bellbound_core::catalog::{format_catalog, parse_catalog, Catalog};
use bellbound_core::detect::{optimize_threshold, DetectOptions, ThresholdMode};
use bellbound_core::facet::{shelling_run, slice, SliceSpec};
use bellbound_core::npa::{certify, solve_upper_bound, Level, NpaOptions};
use bellbound_core::seesaw::{seesaw, Field, SeesawOptions, SpaceSpec};
use bellbound_core::sym::{canonical_key, is_positivity};
use bellbound_core::{BellInequality, Rat};

use record::{results_dir, ResultRecord};

#[derive(Parser)]
#[command(
    name = "bellbound",
    version,
    about = "Bounds, catalogs, and certificates for two-outcome Bell inequalities"
)]
struct Cli {
    /// Default RNG seed for stochastic subcommands (their local --seed wins).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for data-parallel steps (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Also write the result record to this path (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Where result records are filed (default `./results`, or
    /// `$BELLBOUND_RESULTS`).
    #[arg(long)]
    results_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Shelling,
    Slicing,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sym,
    Asym,
}

#[derive(Clone, Copy, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Slow,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a catalog file and verify the print-then-parse identity.
    Parse {
        /// Catalog file to read.
        #[arg(long)]
        file: PathBuf,
    },
    /// Exact classical (local deterministic) bound of an inequality.
    Classical {
        #[arg(long)]
        ineq: String,
    },
    /// Facet test: saturating vertices and their affine rank.
    Tight {
        #[arg(long)]
        ineq: String,
    },
    /// Canonical form under outcome flips, setting permutations, and party
    /// swap; optionally compare against a second entry.
    Canon {
        #[arg(long)]
        ineq: String,
        /// Second entry; the output then says whether the two are equivalent.
        #[arg(long)]
        against: Option<String>,
    },
    /// Generate tight inequalities from a seed by shelling or slicing.
    Generate {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Seed inequality: a catalog name, or a path to a catalog file
        /// whose first entry is used.
        #[arg(long)]
        seed: String,
        /// Shelling rounds (ignored for slicing).
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Vertex cap for the sliced hull (ignored for shelling).
        #[arg(long, default_value_t = 120)]
        cap: usize,
        /// Output catalog path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Variational lower bound on the quantum value (alternating
    /// projector/state optimization over a fixed local dimension).
    Seesaw {
        #[arg(long)]
        ineq: String,
        /// Local Hilbert-space dimension per party.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// `auto`, or per-setting ranks `rA1,rA2,../rB1,rB2,..` (0 pins a
        /// setting to the zero operator, `dim` to the identity).
        #[arg(long, default_value = "auto")]
        ranks: String,
        /// Random restarts (probe initializations).
        #[arg(long, default_value_t = 48)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Moment-matrix (NPA) upper bound at a hierarchy level.
    Npa {
        #[arg(long)]
        ineq: String,
        /// L1, 1a, L2, 2a, 2b, L3, or custom:1,A,B,AA,AB,...
        #[arg(long, default_value = "1a")]
        level: String,
        /// Interior-point duality-gap tolerance.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Word-count cap (guards the SDP size).
        #[arg(long, default_value_t = 200)]
        capacity: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Two-sided bracket: seesaw lower bound against an NPA upper bound.
    Certify {
        #[arg(long)]
        ineq: String,
        #[arg(long, default_value = "1a")]
        level: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        #[arg(long, default_value = "auto")]
        ranks: String,
        #[arg(long, default_value_t = 48)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Detection-efficiency threshold for the maximally entangled pair.
    Eta {
        #[arg(long)]
        ineq: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Allow complex settings (`no` restricts to the real plane).
        #[arg(long, value_enum, default_value_t = YesNo::Yes)]
        complex: YesNo,
        /// Cap on degenerate/no-click setting assignments searched.
        #[arg(long, default_value_t = 4096)]
        budget: usize,
        /// Angle-search restarts per assignment.
        #[arg(long, default_value_t = 6)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-derive the published reference numbers and report pass/fail.
    Golden {
        #[arg(long, value_enum, default_value_t = TierArg::Fast)]
        tier: TierArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

/// Parse `auto` or `rA1,rA2,../rB1,..` into per-party rank vectors.
fn parse_ranks(
    spec: &str,
    m_a: usize,
    m_b: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>)>, String> {
    if spec == "auto" {
        return Ok(None);
    }
    let (a_txt, b_txt) = spec
        .split_once('/')
        .ok_or("ranks must be `auto` or `rA1,rA2,../rB1,rB2,..`")?;
    let parse_side = |txt: &str, want: usize, side: &str| -> Result<Vec<usize>, String> {
        let v: Vec<usize> = txt
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad rank `{t}`")))
            .collect::<Result<_, _>>()?;
        if v.len() != want {
            return Err(format!("{side} needs {want} ranks, got {}", v.len()));
        }
        Ok(v)
    };
    Ok(Some((parse_side(a_txt, m_a, "Alice")?, parse_side(b_txt, m_b, "Bob")?)))
}

fn space_spec(
    ineq: &BellInequality,
    dim: usize,
    field: Field,
    ranks: &str,
) -> Result<SpaceSpec, String> {
    match parse_ranks(ranks, ineq.scenario.m_a, ineq.scenario.m_b)? {
        Some((ra, rb)) => SpaceSpec::with_ranks(ineq.scenario, dim, field, ra, rb),
        None => SpaceSpec::new(ineq.scenario, dim, field),
    }
    .map_err(|e| e.to_string())
}

fn seesaw_options(restarts: usize, seed: u64) -> SeesawOptions {
    SeesawOptions {
        probes: restarts.max(1),
        full_runs: (restarts / 8).clamp(4, 24).min(restarts.max(1)),
        seed,
        ..SeesawOptions::default()
    }
}

/// Flattened row-major operator entries: plain entries for the real field,
/// re/im pairs for the complex one.
fn flatten_ops(ops: &[bellbound_core::linalg::CMat], n: usize, field: Field) -> Vec<Vec<f64>> {
    ops.iter()
        .map(|m| {
            let mut flat = Vec::with_capacity(n * n * 2);
            for i in 0..n {
                for j in 0..n {
                    flat.push(m[(i, j)].re);
                    if field == Field::Complex {
                        flat.push(m[(i, j)].im);
                    }
                }
            }
            flat
        })
        .collect()
}

fn seesaw_outputs(
    ineq: &BellInequality,
    spec: &SpaceSpec,
    opts: &SeesawOptions,
) -> serde_json::Value {
    let rep = seesaw(ineq, spec, opts);
    let mut c: Vec<f64> = rep.model.c.iter().map(|x| x.abs()).collect();
    c.sort_by(|a, b| b.partial_cmp(a).unwrap());
    json!({
        "violation": rep.violation,
        "quantum_value": rep.violation + to_f64(&ineq.b0),
        "schmidt": c,
        "op_ranks_a": rep.op_ranks_a,
        "op_ranks_b": rep.op_ranks_b,
        "reduced_dim": rep.reduced_dim,
        "converged": rep.converged,
        "restarts_used": rep.restarts_used,
        "run_values": rep.run_values,
        "ops_a": flatten_ops(&rep.model.a_ops, spec.n, spec.field),
        "ops_b": flatten_ops(&rep.model.b_ops, spec.n, spec.field),
    })
}

fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Load the seed for `generate`: a built-in name, or a file whose first
/// entry seeds the walk.
fn generate_seed(text: &str) -> Result<(String, BellInequality), String> {
    if Path::new(text).exists() {
        let content = std::fs::read_to_string(text).map_err(|e| e.to_string())?;
        let cat = parse_catalog(&content).map_err(|e| e.to_string())?;
        let first = cat.entries.into_iter().next().ok_or("seed file has no entries")?;
        Ok((first.name, first.ineq))
    } else {
        catalogs::lookup(text).map(|q| (text.to_string(), q))
    }
}

fn persist(
    results_flag: Option<&Path>,
    json_out: Option<&Path>,
    rec: &ResultRecord,
    human: &str,
) -> Result<(), String> {
    let dir = results_dir(results_flag);
    let path = rec.store(&dir).map_err(|e| format!("writing record: {e}"))?;
    println!("{human}");
    println!("record: {}", path.display());
    if let Some(extra) = json_out {
        let text = serde_json::to_string_pretty(rec).expect("record serializes");
        if extra.as_os_str() == "-" {
            println!("{text}");
        } else {
            std::fs::write(extra, text).map_err(|e| format!("writing {}: {e}", extra.display()))?;
        }
    }
    Ok(())
}

fn params_of(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.cmd {
        Cmd::Parse { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| format!("reading {}: {e}", file.display()))?;
            let cat = parse_catalog(&text).map_err(|e| e.to_string())?;
            let reprinted = format_catalog(&cat);
            let back = parse_catalog(&reprinted).map_err(|e| {
                format!("print-then-parse identity broke on reprint: {e}")
            })?;
            let identical = cat.entries.len() == back.entries.len()
                && cat
                    .entries
                    .iter()
                    .zip(&back.entries)
                    .all(|(x, y)| x.name == y.name && x.ineq == y.ineq);
            if !identical {
                return Err("print-then-parse identity failed".into());
            }
            let mut scenarios: Vec<String> = Vec::new();
            for e in &cat.entries {
                let s = e.ineq.scenario.to_string();
                if !scenarios.contains(&s) {
                    scenarios.push(s);
                }
            }
            println!(
                "{}: {} entries ({}), print-then-parse identity holds",
                file.display(),
                cat.entries.len(),
                scenarios.join(", ")
            );
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Classical { ineq } => {
            let q = catalogs::lookup(ineq)?;
            let bound = q.classical_bound();
            let rec = ResultRecord::new(
                ineq,
                "classical",
                params_of(&[]),
                json!({"bound": bound.to_string(), "bound_float": to_f64(&bound),
                       "threshold": q.b0.to_string()}),
                cli.seed,
            );
            persist(cli.results_dir.as_deref(), cli.json.as_deref(), &rec,
                &format!("classical bound of {ineq}: {bound}"))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Tight { ineq } => {
            let q = catalogs::lookup(ineq)?;
            let rep = q.tightness().map_err(|e| e.to_string())?;
            let rec = ResultRecord::new(
                ineq,
                "tight",
                params_of(&[]),
                json!({"tight": rep.is_tight, "saturating": rep.saturating_count,
                       "affine_rank": rep.affine_rank, "needed": rep.required_rank}),
                cli.seed,
            );
            persist(
                cli.results_dir.as_deref(),
                cli.json.as_deref(),
                &rec,
                &format!(
                    "{ineq}: {} ({} saturating vertices, affine rank {} of {} needed)",
                    if rep.is_tight { "tight facet" } else { "valid but not tight" },
                    rep.saturating_count,
                    rep.affine_rank,
                    rep.required_rank
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Canon { ineq, against } => {
            let q = catalogs::lookup(ineq)?;
            let key = canonical_key(&q);
            let key_text =
                key.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let digest = catalogs::sha256_hex(&key_text)[..16].to_string();
            let mut outputs = json!({
                "digest": digest,
                "canonical_coeffs": key.coeffs,
                "positivity": is_positivity(&q),
            });
            let mut human = format!("{ineq}: canonical digest {digest}");
            if let Some(other_name) = against {
                let other = catalogs::lookup(other_name)?;
                let same = other.scenario == q.scenario && canonical_key(&other) == key;
                outputs["against"] = json!(other_name);
                outputs["equivalent"] = json!(same);
                human = format!(
                    "{ineq} and {other_name} are {}",
                    if same { "equivalent" } else { "inequivalent" }
                );
            }
            let rec = ResultRecord::new(
                ineq,
                "canon",
                params_of(&[("against", against.clone().unwrap_or_default())]),
                outputs,
                cli.seed,
            );
            persist(cli.results_dir.as_deref(), cli.json.as_deref(), &rec, &human)?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Generate { method, seed, rounds, cap, out } => {
            let (seed_name, seed_ineq) = generate_seed(seed)?;
            let mut cat = Catalog::default();
            let (count, detail) = match method {
                MethodArg::Shelling => {
                    let outcome =
                        shelling_run(&seed_ineq, *rounds).map_err(|e| e.to_string())?;
                    for (i, f) in outcome.facets.iter().enumerate() {
                        cat.push(format!("{seed_name}_s{i}"), f.clone());
                    }
                    (
                        outcome.facets.len(),
                        format!(
                            "{} facets in {} rounds{}",
                            outcome.facets.len(),
                            outcome.rounds_used,
                            if outcome.fixed_point { " (fixed point)" } else { "" }
                        ),
                    )
                }
                MethodArg::Slicing => {
                    let outcome = slice(&SliceSpec {
                        base: seed_ineq.clone(),
                        b0_star: None,
                        max_points: *cap,
                    })
                    .map_err(|e| e.to_string())?;
                    for (i, f) in outcome.facets.iter().enumerate() {
                        cat.push(format!("{seed_name}_c{i}"), f.clone());
                    }
                    (
                        outcome.facets.len(),
                        format!(
                            "{} facets from a {}-vertex slice at {}",
                            outcome.facets.len(),
                            outcome.points_kept,
                            outcome.b0_star
                        ),
                    )
                }
            };
            std::fs::write(out, format_catalog(&cat))
                .map_err(|e| format!("writing {}: {e}", out.display()))?;
            let rec = ResultRecord::new(
                &seed_name,
                "generate",
                params_of(&[
                    ("method", format!("{}", match method {
                        MethodArg::Shelling => "shelling",
                        MethodArg::Slicing => "slicing",
                    })),
                    ("rounds", rounds.to_string()),
                    ("cap", cap.to_string()),
                ]),
                json!({"facets": count, "out": out.display().to_string()}),
                cli.seed,
            );
            persist(cli, &rec, &format!("{detail} → {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Seesaw { ineq, dim, field, ranks, restarts, seed, json: local_json } => {
            let q = catalogs::lookup(ineq)?;
            let spec = space_spec(&q, *dim, (*field).into(), ranks)?;
            let seed_val = seed.unwrap_or(cli.seed);
            let opts = seesaw_options(*restarts, seed_val);
            let outputs = seesaw_outputs(&q, &spec, &opts);
            let violation = outputs["violation"].as_f64().unwrap_or(f64::NAN);
            let rec = ResultRecord::new(
                ineq,
                "seesaw",
                params_of(&[
                    ("dim", dim.to_string()),
                    ("field", field_name(*field).into()),
                    ("ranks", ranks.clone()),
                    ("restarts", restarts.to_string()),
                ]),
                outputs,
                seed_val,
            );
            let json_out = local_json.as_deref().or(cli.json.as_deref());
            persist(cli.results_dir.as_deref(), json_out, &rec,
                &format!("{ineq}: violation {violation:.7}"))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Npa { ineq, level, tol, capacity, json: local_json } => {
            let q = catalogs::lookup(ineq)?;
            let lvl: Level = level.parse().map_err(|e| format!("{e}"))?;
            let opts = NpaOptions { capacity: *capacity, tol: *tol, ..NpaOptions::default() };
            let rep = solve_upper_bound(&q, &lvl, &opts).map_err(|e| e.to_string())?;
            let rec = ResultRecord::new(
                ineq,
                "npa",
                params_of(&[
                    ("level", lvl.label()),
                    ("tol", format!("{tol:e}")),
                    ("capacity", capacity.to_string()),
                ]),
                json!({
                    "level": rep.level_label,
                    "variant": rep.variant,
                    "words": rep.n_words,
                    "classes": rep.n_classes,
                    "upper_bound": rep.upper_bound,
                    "moment_value": rep.moment_value,
                    "sdp_gap": rep.sdp_gap,
                    "min_eigenvalue": rep.min_eigenvalue,
                    "converged": rep.converged,
                    "iterations": rep.iterations,
                }),
                cli.seed,
            );
            let json_out = local_json.as_deref().or(cli.json.as_deref());
            persist(
                cli.results_dir.as_deref(),
                json_out,
                &rec,
                &format!(
                    "{ineq} at {}: upper bound {:.7} ({} words, {} classes)",
                    rep.level_label, rep.upper_bound, rep.n_words, rep.n_classes
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Certify { ineq, level, dim, field, ranks, restarts, seed, json: local_json } => {
            let q = catalogs::lookup(ineq)?;
            let lvl: Level = level.parse().map_err(|e| format!("{e}"))?;
            let spec = space_spec(&q, *dim, (*field).into(), ranks)?;
            let seed_val = seed.unwrap_or(cli.seed);
            let opts = seesaw_options(*restarts, seed_val);
            let lower = seesaw(&q, &spec, &opts).violation;
            let npa_opts = NpaOptions::default();
            let rep = certify(&q, &lvl, lower, &npa_opts).map_err(|e| e.to_string())?;
            let rec = ResultRecord::new(
                ineq,
                "certify",
                params_of(&[
                    ("level", lvl.label()),
                    ("dim", dim.to_string()),
                    ("field", field_name(*field).into()),
                    ("ranks", ranks.clone()),
                    ("restarts", restarts.to_string()),
                ]),
                json!({
                    "lower": rep.lower,
                    "upper": rep.upper.upper_bound,
                    "gap": rep.gap,
                    "matched": rep.matched,
                    "level": rep.upper.level_label,
                }),
                seed_val,
            );
            let json_out = local_json.as_deref().or(cli.json.as_deref());
            persist(
                cli.results_dir.as_deref(),
                json_out,
                &rec,
                &format!(
                    "{ineq}: {:.7} ≤ Q ≤ {:.7} (gap {:.2e}{})",
                    rep.lower,
                    rep.upper.upper_bound,
                    rep.gap,
                    if rep.matched { ", matched" } else { "" }
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Eta { ineq, mode, complex, budget, restarts, seed, json: local_json } => {
            let q = catalogs::lookup(ineq)?;
            let field = match complex {
                YesNo::Yes => Field::Complex,
                YesNo::No => Field::Real,
            };
            let mode_val = match mode {
                ModeArg::Sym => ThresholdMode::Symmetric,
                ModeArg::Asym => ThresholdMode::AsymmetricB,
            };
            let seed_val = seed.unwrap_or(cli.seed);
            let opts = DetectOptions {
                field,
                budget: *budget,
                restarts: *restarts,
                seed: seed_val,
                ..DetectOptions::default()
            };
            let search = optimize_threshold(&q, mode_val, &opts)
                .ok_or("no strategy with a finite threshold found")?;
            let rep = &search.report;
            let threshold = match mode_val {
                ThresholdMode::Symmetric => rep.eta_sym,
                ThresholdMode::AsymmetricB => rep.eta_asym_b,
            }
            .ok_or("strategy found but threshold is unbounded")?;
            let rec = ResultRecord::new(
                ineq,
                "eta",
                params_of(&[
                    ("mode", match mode { ModeArg::Sym => "sym", ModeArg::Asym => "asym" }
                        .to_string()),
                    ("complex", match complex { YesNo::Yes => "yes", YesNo::No => "no" }
                        .to_string()),
                    ("budget", budget.to_string()),
                    ("restarts", restarts.to_string()),
                ]),
                json!({
                    "threshold": threshold,
                    "q": rep.q, "m_a": rep.m_a, "m_b": rep.m_b, "x": rep.x,
                    "local_bound": rep.l.to_string(),
                    "reduced_bound": search.reduced_bound.to_string(),
                    "budget_exhausted": search.budget_exhausted,
                    "combos_searched": search.combos_searched,
                }),
                seed_val,
            );
            let json_out = local_json.as_deref().or(cli.json.as_deref());
            persist(
                cli.results_dir.as_deref(),
                json_out,
                &rec,
                &format!(
                    "{ineq} {} threshold: {threshold:.4}{}",
                    match mode { ModeArg::Sym => "symmetric", ModeArg::Asym => "asymmetric" },
                    if search.budget_exhausted { " (budget exhausted)" } else { "" }
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Golden { tier } => {
            let tier_val = match tier {
                TierArg::Fast => golden::Tier::Fast,
                TierArg::Slow => golden::Tier::Slow,
            };
            let lines = golden::golden_suite(tier_val, cli.jobs);
            let (table, all_pass) = golden::render(&lines);
            print!("{table}");
            println!(
                "{}: {} of {} passed",
                if all_pass { "OK" } else { "FAILED" },
                lines.iter().filter(|l| l.pass).count(),
                lines.len()
            );
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn field_name(f: FieldArg) -> &'static str {
    match f {
        FieldArg::Real => "real",
        FieldArg::Complex => "complex",
    }
}
