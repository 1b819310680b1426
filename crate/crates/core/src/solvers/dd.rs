//! Exact convex-hull facet enumeration by double description.
//!
//! Given points spanning `R^d`, the valid inequalities `b·x ≤ b0` form a
//! polyhedral cone in `(b0, b)`-space: after translating an interior point
//! (the centroid) to the origin, that cone is pointed and its extreme rays
//! are exactly the facets of the hull plus the single trivial ray
//! `0·x ≤ 1`. The rays are built incrementally (Motzkin's method): start
//! from a simplicial subcone given by `d+1` independent point constraints,
//! then insert the remaining constraints one at a time, keeping the
//! satisfied rays and stitching new ones from adjacent pairs that straddle
//! the new hyperplane. Adjacency is decided combinatorially from incidence
//! bitsets, which is exact for a pointed cone whose ray list is kept
//! irredundant — precisely what the insertion maintains.
//!
//! All arithmetic is integer (`i128` with overflow checks): constraint rows
//! and rays are rescaled to primitive vectors as they are formed, which in
//! practice keeps every entry tiny for 0/1 polytopes.

use num_traits::Zero;
use rayon::prelude::*;

use crate::ineq::affine_rank_i128;
use crate::rat::{gcd_i128, primitive_i128, Rat};

#[derive(Debug, thiserror::Error)]
pub enum DdError {
    #[error("hull on {got} points exceeds the configured capacity of {cap}")]
    CapacityExceeded { got: usize, cap: usize },
    #[error("points affinely span only {affine_rank} of {dim} dimensions")]
    NotFullDimensional { affine_rank: usize, dim: usize },
    #[error("integer overflow while combining rays; coefficients grew past i128")]
    Overflow,
    #[error("point coordinates too large for the integer kernel")]
    CoordinateOverflow,
}

/// One facet `b·x ≤ b0` of the hull, in primitive integer form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FacetIneq {
    pub b: Vec<i128>,
    pub b0: i128,
}

impl FacetIneq {
    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (c, v) in self.b.iter().zip(x) {
            acc += Rat::from_integer((*c).into()) * v;
        }
        acc
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.evaluate(x) <= Rat::from_integer(self.b0.into())
    }

    pub fn saturated_by(&self, x: &[Rat]) -> bool {
        self.evaluate(x) == Rat::from_integer(self.b0.into())
    }
}

struct Ray {
    v: Vec<i128>,
    /// Bit `w` set when constraint row `w` holds with equality. Only bits of
    /// already-processed rows are ever set.
    zeros: Vec<u64>,
}

impl Ray {
    fn new(v: Vec<i128>, n_rows: usize) -> Ray {
        Ray { v, zeros: vec![0; n_rows.div_ceil(64)] }
    }

    fn set_zero(&mut self, row: usize) {
        self.zeros[row / 64] |= 1 << (row % 64);
    }
}

fn and_bits(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_subset(sub: &[u64], sup: &[u64]) -> bool {
    sub.iter().zip(sup).all(|(s, t)| s & !t == 0)
}

fn dot_checked(a: &[i128], b: &[i128]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = acc.checked_add(x.checked_mul(*y)?)?;
    }
    Some(acc)
}

fn make_primitive(v: &mut [i128]) {
    let mut g: i128 = 0;
    for &x in v.iter() {
        g = gcd_i128(g, x);
    }
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Facets of the convex hull of `points` (all of dimension `d`, affinely
/// spanning). `cap` bounds the number of input points.
pub fn double_description(points: &[Vec<Rat>], cap: usize) -> Result<Vec<FacetIneq>, DdError> {
    let n = points.len();
    if n > cap {
        return Err(DdError::CapacityExceeded { got: n, cap });
    }
    let d = points.first().map_or(0, |p| p.len());
    assert!(n > 0 && points.iter().all(|p| p.len() == d), "need same-dimension points");

    // Centroid as the interior point; work with q_w = x_w - centroid.
    let mut centroid = vec![Rat::zero(); d];
    for p in points {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x;
        }
    }
    let n_rat = Rat::from_integer(n.into());
    for c in &mut centroid {
        *c /= &n_rat;
    }

    // Constraint rows (1, -q_w), each rescaled to primitive integers.
    let dim = d + 1;
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(n);
    for p in points {
        let mut row: Vec<Rat> = Vec::with_capacity(dim);
        row.push(Rat::from_integer(1.into()));
        for (x, c) in p.iter().zip(&centroid) {
            row.push(-(x - c));
        }
        rows.push(primitive_i128(&row).ok_or(DdError::CoordinateOverflow)?);
    }

    // Full-dimensionality check up front so the failure mode is named.
    let affine_rank = affine_rank_points(points).ok_or(DdError::CoordinateOverflow)?;
    if affine_rank != d {
        return Err(DdError::NotFullDimensional { affine_rank, dim: d });
    }

    // Initial simplicial cone: d+1 independent rows; its extreme rays are
    // the columns of the inverse of that row matrix.
    let basis_rows = independent_rows(&rows, dim)
        .expect("full-dimensional input yields d+1 independent rows");
    let inv = invert_rational(&basis_rows.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for k in 0..dim {
        let col: Vec<Rat> = (0..dim).map(|r| inv[r][k].clone()).collect();
        let mut v = primitive_i128(&col).ok_or(DdError::Overflow)?;
        make_primitive(&mut v);
        let mut ray = Ray::new(v, n);
        for (pos, &ri) in basis_rows.iter().enumerate() {
            if pos != k {
                ray.set_zero(ri);
            }
        }
        rays.push(ray);
    }

    // Insert the remaining constraints.
    let in_basis: Vec<bool> = {
        let mut f = vec![false; n];
        for &i in &basis_rows {
            f[i] = true;
        }
        f
    };
    for w in 0..n {
        if in_basis[w] {
            continue;
        }
        rays = insert_row(rays, &rows[w], w)?;
    }

    // Translate rays back to inequalities on the original coordinates and
    // drop the trivial recession ray (b = 0).
    let mut facets = Vec::with_capacity(rays.len().saturating_sub(1));
    for ray in rays {
        let b: Vec<i128> = ray.v[1..].to_vec();
        if b.iter().all(|&x| x == 0) {
            continue;
        }
        // Ray is (t, b) with b·q ≤ t on translated points; shift back:
        // b·x ≤ t + b·centroid, then clear denominators.
        let mut shift = Rat::from_integer(ray.v[0].into());
        for (c, x) in b.iter().zip(&centroid) {
            shift += Rat::from_integer((*c).into()) * x;
        }
        let mut all: Vec<Rat> = Vec::with_capacity(dim);
        all.push(shift);
        all.extend(b.iter().map(|&x| Rat::from_integer(x.into())));
        let prim = primitive_i128(&all).ok_or(DdError::Overflow)?;
        facets.push(FacetIneq { b0: prim[0], b: prim[1..].to_vec() });
    }
    Ok(facets)
}

/// Affine rank of rational points: clear denominators with one global
/// scale (per-point scaling would distort the affine structure), then run
/// the integer rank kernel.
pub fn affine_rank_points(points: &[Vec<Rat>]) -> Option<usize> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};
    let mut lcm = BigInt::one();
    for p in points {
        for x in p {
            lcm = lcm.lcm(x.denom());
        }
    }
    let scaled: Option<Vec<Vec<i128>>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| (x.numer() * (&lcm / x.denom())).to_i128())
                .collect()
        })
        .collect();
    Some(affine_rank_i128(&scaled?))
}

fn insert_row(rays: Vec<Ray>, row: &[i128], w: usize) -> Result<Vec<Ray>, DdError> {
    let mut plus: Vec<Ray> = Vec::new();
    let mut minus: Vec<Ray> = Vec::new();
    let mut zero: Vec<Ray> = Vec::new();
    let mut values: Vec<(Ray, i128)> = Vec::with_capacity(rays.len());
    for ray in rays {
        let s = dot_checked(row, &ray.v).ok_or(DdError::Overflow)?;
        values.push((ray, s));
    }
    for (mut ray, s) in values {
        if s == 0 {
            ray.set_zero(w);
            zero.push(ray);
        } else if s > 0 {
            plus.push(ray);
        } else {
            minus.push(ray);
        }
    }
    if minus.is_empty() {
        let mut out = plus;
        out.append(&mut zero);
        return Ok(out);
    }

    // Candidate pairs must share at least dim-2 tight constraints; the
    // full combinatorial test then decides adjacency.
    let all: Vec<&Ray> = plus.iter().chain(minus.iter()).chain(zero.iter()).collect();
    let dim = row.len();
    let pairs: Vec<(usize, usize)> = (0..plus.len())
        .flat_map(|i| (0..minus.len()).map(move |j| (i, j)))
        .collect();
    let new_rays: Result<Vec<Option<Ray>>, DdError> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let p = &plus[i];
            let m = &minus[j];
            let common = and_bits(&p.zeros, &m.zeros);
            let count: u32 = common.iter().map(|b| b.count_ones()).sum();
            if (count as usize) + 2 < dim {
                return Ok(None);
            }
            let adjacent = all.iter().all(|r| {
                (std::ptr::eq(*r, p as &Ray) || std::ptr::eq(*r, m as &Ray))
                    || !is_subset(&common, &r.zeros)
            });
            if !adjacent {
                return Ok(None);
            }
            let sp = dot_checked(row, &p.v).ok_or(DdError::Overflow)?;
            let sm = dot_checked(row, &m.v).ok_or(DdError::Overflow)?;
            let mut v = Vec::with_capacity(p.v.len());
            for (a, b) in p.v.iter().zip(&m.v) {
                let t = sp
                    .checked_mul(*b)
                    .and_then(|x| sm.checked_mul(*a).and_then(|y| x.checked_sub(y)))
                    .ok_or(DdError::Overflow)?;
                v.push(t);
            }
            make_primitive(&mut v);
            let mut ray = Ray { v, zeros: common };
            ray.set_zero(w);
            Ok(Some(ray))
        })
        .collect();
    let mut out = plus;
    out.append(&mut zero);
    out.extend(new_rays?.into_iter().flatten());
    Ok(out)
}

/// Indices of `k` linearly independent rows, by exact elimination. The
/// working set is kept in reduced echelon form (each pivot column is zero
/// in every other working row), so one reduction pass per candidate row is
/// a complete dependence test.
fn independent_rows(rows: &[Vec<i128>], k: usize) -> Option<Vec<usize>> {
    let dim = rows.first()?.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut elim: Vec<(usize, Vec<Rat>)> = Vec::with_capacity(k); // (pivot, row)
    for (idx, row) in rows.iter().enumerate() {
        let mut r: Vec<Rat> = row.iter().map(|&x| Rat::from_integer(x.into())).collect();
        for (p, e) in &elim {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for j in 0..dim {
                    let t = &f * &e[j];
                    r[j] -= t;
                }
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[p].clone();
            for x in &mut r {
                *x = &*x / &inv;
            }
            for (_, e) in &mut elim {
                if !e[p].is_zero() {
                    let f = e[p].clone();
                    for j in 0..dim {
                        let t = &f * &r[j];
                        e[j] -= t;
                    }
                }
            }
            elim.push((p, r));
            chosen.push(idx);
            if chosen.len() == k {
                return Some(chosen);
            }
        }
    }
    None
}

/// Exact inverse of a small square rational matrix given as integer rows.
fn invert_rational(m: &[Vec<i128>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| {
            let mut r: Vec<Rat> = row.iter().map(|&x| Rat::from_integer(x.into())).collect();
            r.resize(2 * n, Rat::zero());
            r
        })
        .collect();
    for i in 0..n {
        a[i][n + i] = Rat::from_integer(1.into());
    }
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("matrix is invertible");
        a.swap(c, p);
        let inv = a[c][c].clone();
        for j in 0..2 * n {
            a[c][j] = &a[c][j] / &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn pts(raw: &[&[i64]]) -> Vec<Vec<Rat>> {
        raw.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()
    }

    /// Brute-force sanity on a facet list: every facet is valid on all
    /// points and is saturated by at least `d` affinely independent points.
    fn check_support(points: &[Vec<Rat>], facets: &[FacetIneq]) {
        let d = points[0].len();
        for f in facets {
            assert!(points.iter().all(|p| f.satisfied_by(p)), "facet not valid");
            let sat: Vec<Vec<i128>> = points
                .iter()
                .filter(|p| f.saturated_by(p))
                .map(|p| {
                    // tests use small integer/half-integer points; scale by 2
                    p.iter()
                        .map(|x| {
                            let y = x * rat(2);
                            assert!(y.is_integer());
                            i128::try_from(y.to_integer()).unwrap()
                        })
                        .collect()
                })
                .collect();
            assert!(
                affine_rank_i128(&sat) == d - 1,
                "facet {:?} ≤ {} saturated by a set of affine rank {} (want {})",
                f.b,
                f.b0,
                affine_rank_i128(&sat),
                d - 1
            );
        }
    }

    #[test]
    fn unit_square_has_four_facets() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let f = double_description(&p, 100).unwrap();
        assert_eq!(f.len(), 4);
        check_support(&p, &f);
    }

    #[test]
    fn cube_has_six_facets() {
        let corners: Vec<Vec<Rat>> = (0..8)
            .map(|m| (0..3).map(|b| rat((m >> b & 1) as i64)).collect())
            .collect();
        let f = double_description(&corners, 100).unwrap();
        assert_eq!(f.len(), 6);
        check_support(&corners, &f);
    }

    #[test]
    fn four_dimensional_cross_polytope_has_sixteen_facets() {
        let mut p: Vec<Vec<Rat>> = Vec::new();
        for i in 0..4 {
            for s in [-1i64, 1] {
                let mut v = vec![rat(0); 4];
                v[i] = rat(s);
                p.push(v);
            }
        }
        let f = double_description(&p, 100).unwrap();
        assert_eq!(f.len(), 16);
        check_support(&p, &f);
    }

    #[test]
    fn interior_points_do_not_add_facets() {
        let mut p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        p.push(vec![rat(1), rat(1)]);
        p.push(vec![ratio(1, 2), ratio(1, 2)]);
        let f = double_description(&p, 100).unwrap();
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn capacity_and_dimension_errors() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            double_description(&p, 2),
            Err(DdError::CapacityExceeded { got: 3, cap: 2 })
        ));
        let flat = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(matches!(
            double_description(&flat, 100),
            Err(DdError::NotFullDimensional { affine_rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn simplex_facets_in_r3() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let f = double_description(&p, 100).unwrap();
        assert_eq!(f.len(), 4);
        check_support(&p, &f);
    }
}
