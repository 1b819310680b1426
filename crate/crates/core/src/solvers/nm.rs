//! Derivative-free maximization by the Nelder–Mead simplex method.
//!
//! Standard coefficients (reflection 1, expansion 2, contraction 1/2,
//! shrink 1/2) with one addition: when the simplex collapses (the spread of
//! function values falls below tolerance) while evaluation budget remains,
//! it is rebuilt around the incumbent with half the previous edge length.
//! That restart-on-stagnation step costs little and reliably pulls the
//! search out of the needle-shaped simplices this method is prone to.

/// Tuning knobs. The defaults are used everywhere in this crate.
#[derive(Clone, Copy, Debug)]
pub struct NmOptions {
    /// Initial simplex edge along each coordinate.
    pub edge: f64,
    /// Total function-evaluation budget.
    pub max_evals: usize,
    /// Value-spread threshold that triggers a restart (or, once the edge
    /// has become tiny, termination).
    pub ftol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions { edge: 0.3, max_evals: 4000, ftol: 1e-12 }
    }
}

#[derive(Clone, Debug)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub restarts: usize,
}

/// Maximize `f` starting from `x0`.
pub fn maximize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: NmOptions) -> NmResult {
    let d = x0.len();
    if d == 0 {
        let value = f(x0);
        return NmResult { x: vec![], value, evals: 1, restarts: 0 };
    }
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut best_x = x0.to_vec();
    let mut best_v = eval(&best_x, &mut evals);
    let mut edge = opts.edge;
    let mut restarts = 0usize;

    'restart: while evals < opts.max_evals && edge > 1e-8 {
        // Fresh simplex around the incumbent.
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        let mut vals: Vec<f64> = Vec::with_capacity(d + 1);
        pts.push(best_x.clone());
        vals.push(best_v);
        for i in 0..d {
            let mut p = best_x.clone();
            p[i] += edge;
            let v = eval(&p, &mut evals);
            pts.push(p);
            vals.push(v);
        }

        while evals < opts.max_evals {
            // Order: index of best (max), worst (min), second-worst.
            let mut hi = 0;
            let mut lo = 0;
            for i in 1..=d {
                if vals[i] > vals[hi] {
                    hi = i;
                }
                if vals[i] < vals[lo] {
                    lo = i;
                }
            }
            let mut second_lo = if lo == 0 { 1 } else { 0 };
            for i in 0..=d {
                if i != lo && vals[i] < vals[second_lo] {
                    second_lo = i;
                }
            }
            if vals[hi] > best_v {
                best_v = vals[hi];
                best_x = pts[hi].clone();
            }
            if vals[hi] - vals[lo] < opts.ftol {
                // Collapsed: restart smaller, or give up when tiny.
                edge *= 0.5;
                restarts += 1;
                continue 'restart;
            }

            // Centroid of all but the worst.
            let mut centroid = vec![0.0; d];
            for (i, p) in pts.iter().enumerate() {
                if i != lo {
                    for (c, x) in centroid.iter_mut().zip(p) {
                        *c += x;
                    }
                }
            }
            for c in &mut centroid {
                *c /= d as f64;
            }

            let lerp = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&pts[lo])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            // Reflect.
            let xr = lerp(1.0);
            let vr = eval(&xr, &mut evals);
            if vr > vals[hi] {
                // Try to expand.
                let xe = lerp(2.0);
                let ve = eval(&xe, &mut evals);
                if ve > vr {
                    pts[lo] = xe;
                    vals[lo] = ve;
                } else {
                    pts[lo] = xr;
                    vals[lo] = vr;
                }
                continue;
            }
            if vr > vals[second_lo] {
                pts[lo] = xr;
                vals[lo] = vr;
                continue;
            }
            // Contract (outside if the reflection at least beat the worst).
            let (xc, vc) = if vr > vals[lo] {
                let x = lerp(0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = lerp(-0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if vc > vals[lo].max(vr) {
                pts[lo] = xc;
                vals[lo] = vc;
                continue;
            }
            // Shrink toward the best point.
            let hi_pt = pts[hi].clone();
            for i in 0..=d {
                if i == hi {
                    continue;
                }
                for (x, h) in pts[i].iter_mut().zip(&hi_pt) {
                    *x = h + 0.5 * (*x - h);
                }
                vals[i] = eval(&pts[i].clone(), &mut evals);
            }
        }
    }

    NmResult { x: best_x, value: best_v, evals, restarts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| -(x[0] - 1.5).powi(2) - (x[1] + 0.5).powi(2);
        let r = maximize(f, &[0.0, 0.0], NmOptions::default());
        assert!((r.x[0] - 1.5).abs() < 1e-5, "got {:?}", r.x);
        assert!((r.x[1] + 0.5).abs() < 1e-5);
        assert!(r.value > -1e-9);
    }

    #[test]
    fn rosenbrock_flipped() {
        // Maximize the negated Rosenbrock function: optimum 0 at (1,1).
        let f = |x: &[f64]| -(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2));
        let r = maximize(f, &[-1.2, 1.0], NmOptions { max_evals: 20000, ..Default::default() });
        assert!(r.value > -1e-8, "value {}", r.value);
        assert!((r.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn respects_budget_and_reports_restarts() {
        let mut count = 0usize;
        let f = |x: &[f64]| {
            let _ = x;
            count += 1;
            0.0 // totally flat: collapses immediately, restarts until edge dies
        };
        let r = maximize(f, &[0.0; 3], NmOptions { max_evals: 500, ..Default::default() });
        assert!(r.evals <= 500);
        assert!(r.restarts > 0);
        drop(r);
        assert!(count <= 500);
    }

    #[test]
    fn one_dimensional_cosine() {
        let f = |x: &[f64]| (x[0]).cos();
        let r = maximize(f, &[2.5], NmOptions::default());
        // Nearest maximum of cos is at 2π (from 2.5 the simplex may also
        // slide back to 0); either way the value is 1.
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_dimensional_input() {
        let r = maximize(|_| 7.0, &[], NmOptions::default());
        assert_eq!(r.value, 7.0);
        assert_eq!(r.evals, 1);
    }
}
