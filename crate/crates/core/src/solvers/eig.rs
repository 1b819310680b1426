//! Dense eigendecomposition for symmetric and Hermitian matrices.
//!
//! Real symmetric input is reduced to tridiagonal form by Householder
//! reflections with accumulated transforms, then diagonalized by the
//! implicit-shift QL iteration. Hermitian input is handled through the real
//! embedding `[[X, -Y], [Y, X]]` of `A = X + iY`: the embedding is symmetric
//! with every eigenvalue of `A` doubled, and an embedded eigenvector
//! `(x; y)` yields the complex eigenvector `x + iy`. The doubled copies are
//! collapsed afterwards by Gram–Schmidt over the complex vectors.
//!
//! Matrices here stay small (at most a few hundred rows), so cubic dense
//! algorithms are appropriate; accuracy is what matters, and the residual
//! `‖Av - λv‖` stays near machine precision times `‖A‖`.

use num_complex::Complex64;

use crate::linalg::{cdot, cnormalize, CMat, Mat};

/// Eigenvalues in ascending order; `vectors` holds the corresponding
/// orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Decompose a real symmetric matrix. Only the lower triangle is read.
pub fn sym_eig(a: &Mat) -> SymEig {
    assert!(a.is_square());
    let n = a.n_rows;
    if n == 0 {
        return SymEig { values: vec![], vectors: Mat::zeros(0, 0) };
    }
    let mut z = a.sym();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e);
    tql2(&mut d, &mut e, &mut z);
    // Sort ascending, carrying columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| z[(r, order[c])]);
    SymEig { values, vectors }
}

/// Largest eigenvalue and its eigenvector.
pub fn principal_sym(a: &Mat) -> (f64, Vec<f64>) {
    let eig = sym_eig(a);
    let n = a.n_rows;
    let v = (0..n).map(|r| eig.vectors[(r, n - 1)]).collect();
    (eig.values[n - 1], v)
}

/// Householder reduction to tridiagonal form with accumulation (classic
/// tred2). On exit `d` holds the diagonal, `e[1..]` the subdiagonal, and
/// `z` the orthogonal transform.
fn tred2(z: &mut Mat, d: &mut [f64], e: &mut [f64]) {
    let n = z.n_rows;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = z[(i, l)];
            } else {
                for k in 0..=l {
                    z[(i, k)] /= scale;
                    h += z[(i, k)] * z[(i, k)];
                }
                let f = z[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[(j, i)] = z[(i, j)] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[(j, k)] * z[(i, k)];
                    }
                    for k in j + 1..=l {
                        g_acc += z[(k, j)] * z[(i, k)];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let t = f * e[k] + g * z[(i, k)];
                        z[(j, k)] -= t;
                    }
                }
            }
        } else {
            e[i] = z[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[(i, k)] * z[(k, j)];
                }
                for k in 0..i {
                    let t = g * z[(k, i)];
                    z[(k, j)] -= t;
                }
            }
        }
        d[i] = z[(i, i)];
        z[(i, i)] = 1.0;
        for j in 0..i {
            z[(j, i)] = 0.0;
            z[(i, j)] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix with eigenvector
/// accumulation (classic tql2).
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut Mat) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the first negligible subdiagonal at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Decompose a Hermitian matrix: eigenvalues ascending, orthonormal complex
/// eigenvectors as the columns of the returned matrix.
pub fn herm_eig(a: &CMat) -> (Vec<f64>, CMat) {
    assert!(a.is_square());
    let n = a.n_rows;
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let emb = sym_eig(&a.herm().real_embedding());
    // Each eigenvalue appears twice ((x;y) and (-y;x) map to v and iv);
    // Gram–Schmidt over the complex images keeps one copy per dimension.
    let mut values: Vec<f64> = Vec::with_capacity(n);
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..2 * n {
        if values.len() == n {
            break;
        }
        let mut v: Vec<Complex64> = (0..n)
            .map(|r| Complex64::new(emb.vectors[(r, c)], emb.vectors[(n + r, c)]))
            .collect();
        for u in &vecs {
            let proj = cdot(u, &v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in &mut v {
                *x /= norm;
            }
            cnormalize(&mut v);
            values.push(emb.values[c]);
            vecs.push(v);
        }
    }
    assert_eq!(values.len(), n, "embedding must yield a full eigenbasis");
    let vectors = CMat::from_fn(n, n, |r, c| vecs[c][r]);
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix with its eigenvector.
pub fn principal_herm(a: &CMat) -> (f64, Vec<Complex64>) {
    let (values, vectors) = herm_eig(a);
    let n = a.n_rows;
    let v = (0..n).map(|r| vectors[(r, n - 1)]).collect();
    (values[n - 1], v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> Mat {
        let raw = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        raw.sym()
    }

    fn random_herm(n: usize, rng: &mut impl Rng) -> CMat {
        let raw = CMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        raw.herm()
    }

    #[test]
    fn two_by_two_exact() {
        let a = Mat::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = sym_eig(&a);
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residuals_and_orthogonality_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[1usize, 2, 3, 8, 25] {
            let a = random_sym(n, &mut rng);
            let scale = a.max_abs().max(1.0);
            let eig = sym_eig(&a);
            for c in 0..n {
                let v: Vec<f64> = (0..n).map(|r| eig.vectors[(r, c)]).collect();
                let av = a.matvec(&v);
                for r in 0..n {
                    assert!(
                        (av[r] - eig.values[c] * v[r]).abs() < 1e-10 * scale,
                        "residual too large at n={n}"
                    );
                }
            }
            let q = eig.vectors.clone();
            let qtq = q.t().mul(&q);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((qtq[(i, j)] - want).abs() < 1e-10);
                }
            }
            // Eigenvalues ascend and sum to the trace.
            for w in eig.values.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
            let tr: f64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!((tr - sum).abs() < 1e-9 * scale.max(1.0) * n as f64);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // diag(2, 2, 5) rotated: eigenvalues {2, 2, 5} recovered.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = {
            // random orthogonal via Gram-Schmidt on a random matrix
            let m = random_sym(3, &mut rng);
            sym_eig(&m).vectors
        };
        let d = Mat::from_rows(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let a = q.mul(&d).mul(&q.t());
        let eig = sym_eig(&a);
        assert!((eig.values[0] - 2.0).abs() < 1e-10);
        assert!((eig.values[1] - 2.0).abs() < 1e-10);
        assert!((eig.values[2] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn residuals_and_orthogonality_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for &n in &[1usize, 2, 3, 6, 12] {
            let a = random_herm(n, &mut rng);
            let scale = a.max_abs().max(1.0);
            let (values, vectors) = herm_eig(&a);
            assert_eq!(values.len(), n);
            for c in 0..n {
                let v: Vec<Complex64> = (0..n).map(|r| vectors[(r, c)]).collect();
                let av = a.matvec(&v);
                for r in 0..n {
                    assert!(
                        (av[r] - values[c] * v[r]).norm() < 1e-10 * scale,
                        "Hermitian residual too large at n={n}"
                    );
                }
            }
            let g = vectors.adjoint().mul(&vectors);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn principal_matches_rayleigh_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_herm(5, &mut rng);
        let (top, v) = principal_herm(&a);
        let rayleigh = cdot(&v, &a.matvec(&v)).re;
        assert!((rayleigh - top).abs() < 1e-10);
        // No random unit vector beats the principal value.
        for _ in 0..2000 {
            let mut w: Vec<Complex64> = (0..5)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            cnormalize(&mut w);
            assert!(cdot(&w, &a.matvec(&w)).re <= top + 1e-9);
        }
    }
}
