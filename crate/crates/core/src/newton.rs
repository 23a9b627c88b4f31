//! Newton polyhedra of monomial ideals and the exact volume of their dilates
//! clipped by the unit cube.
//!
//! For a monomial ideal `a` and `t >= 0` the F-signature of the pair is
//! `vol(tP ∩ [0,1]^n)`, where `P` is the convex hull of the exponent vectors
//! plus the nonnegative orthant. Volumes are computed exactly: vertices come
//! from brute-force enumeration of `n`-subsets of halfspaces, and the polytope
//! is triangulated as a star from its vertex centroid over a pulling
//! triangulation of each facet.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest ambient dimension accepted by the volume routines.
pub const MAX_DIMENSION: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("a monomial ideal needs at least one generator")]
    Empty,
    #[error("exponent vector {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("ambient dimension {0} exceeds the cap of {MAX_DIMENSION}")]
    DimensionCap(usize),
    #[error("t = {0} must be nonnegative")]
    NegativeT(BigRational),
    #[error("exponent vectors must have at least one coordinate")]
    NoVariables,
}

/// `⟨normal, u⟩ >= offset` with a primitive nonnegative integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Facet {
    fn value(&self, u: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(u)
            .map(|(w, x)| BigRational::from_integer(w.clone()) * x)
            .sum()
    }
}

/// Irredundant halfspace description of `conv(exponents) + R_{>=0}^n`. The
/// coordinate halfspaces `u_i >= 0` are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    n: usize,
    facets: Vec<Facet>,
}

impl NewtonPolyhedron {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// `u ∈ λP`.
    pub fn contains_scaled(&self, u: &[BigRational], lambda: &BigRational) -> bool {
        u.iter().all(|x| !x.is_negative())
            && self
                .facets
                .iter()
                .all(|f| f.value(u) >= lambda * BigRational::from_integer(f.offset.clone()))
    }
}

fn check_points(exponents: &[Vec<u32>]) -> Result<usize, NewtonError> {
    let n = exponents.first().ok_or(NewtonError::Empty)?.len();
    for (index, e) in exponents.iter().enumerate() {
        if e.len() != n {
            return Err(NewtonError::DimensionMismatch {
                index,
                expected: n,
                found: e.len(),
            });
        }
    }
    Ok(n)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Basis of the null space of `rows` (each of length `n`), exactly.
fn null_space(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..n {
                    let d = &f * &m[r][k];
                    m[i][k] = &m[i][k] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to the primitive integer vector in its direction.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Drop exponent vectors that dominate another one; they do not change `P`.
fn minimal_points(exponents: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let set: BTreeSet<&Vec<u32>> = exponents.iter().collect();
    set.iter()
        .filter(|a| {
            !set.iter()
                .any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y))
        })
        .map(|a| (*a).clone())
        .collect()
}

fn for_each_subset(len: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + len - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Facets of `conv(exponents) + R_{>=0}^n` other than the coordinate
/// hyperplanes. Candidate hyperplanes pass through `k >= 1` minimal points
/// and are parallel to `n - k` coordinate directions; a candidate is kept
/// when its normal is nonnegative and every point lies on its upper side.
pub fn newton_polyhedron(exponents: &[Vec<u32>]) -> Result<NewtonPolyhedron, NewtonError> {
    let n = check_points(exponents)?;
    if n == 0 {
        return Err(NewtonError::NoVariables);
    }
    let points = minimal_points(exponents);
    let qpoints: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| p.iter().map(|&x| rat(x as i64)).collect())
        .collect();
    // items 0..m are points, m..m+n are coordinate directions
    let m = qpoints.len();
    let mut facets = BTreeSet::new();
    for_each_subset(m + n, n, |subset| {
        let chosen: Vec<usize> = subset.iter().copied().filter(|&i| i < m).collect();
        let Some(&base) = chosen.first() else {
            return;
        };
        let mut rows = Vec::new();
        for &i in &chosen[1..] {
            rows.push(
                qpoints[i]
                    .iter()
                    .zip(&qpoints[base])
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            );
        }
        for &i in subset.iter().filter(|&&i| i >= m) {
            let mut row = vec![BigRational::zero(); n];
            row[i - m] = BigRational::one();
            rows.push(row);
        }
        let ns = null_space(&rows, n);
        if ns.len() != 1 {
            return;
        }
        let mut w = ns.into_iter().next().unwrap();
        if w.iter().all(|x| !x.is_positive()) {
            w = w.iter().map(|x| -x).collect();
        }
        if w.iter().any(|x| x.is_negative()) {
            return;
        }
        let normal = primitive(&w);
        let value = |p: &Vec<u32>| -> BigInt {
            normal
                .iter()
                .zip(p)
                .map(|(a, &b)| a * BigInt::from(b))
                .sum()
        };
        let offset = value(&points[base]);
        if offset.is_zero() || points.iter().any(|p| value(p) < offset) {
            return;
        }
        facets.insert(Facet { normal, offset });
    });
    Ok(NewtonPolyhedron {
        n,
        facets: facets.into_iter().collect(),
    })
}

/// `⟨normal, u⟩ >= offset` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Halfspace {
    fn value(&self, u: &[BigRational]) -> BigRational {
        self.normal.iter().zip(u).map(|(a, b)| a * b).sum()
    }
}

/// `tP ∩ [0,1]^n` with its vertices and a triangulation. Simplices index into
/// [`ClippedPolytope::points`], which lists the vertices followed by the
/// vertex centroid.
#[derive(Debug, Clone)]
pub struct ClippedPolytope {
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec<BigRational>>,
    pub points: Vec<Vec<BigRational>>,
    pub simplices: Vec<Vec<usize>>,
    pub volume: BigRational,
}

fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[i][k] = &m[i][k] - d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for k in c..n {
                    let d = &f * &m[c][k];
                    m[i][k] = &m[i][k] - d;
                }
            }
        }
    }
    det
}

/// Affine dimension of a point set (`-1` for the empty set is reported as `None`).
fn affine_dimension(points: &[&Vec<BigRational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let rows: Vec<Vec<BigRational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let n = first.len();
    Some(n - null_space(&rows, n).len())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

struct Triangulator<'a> {
    vertices: &'a [Vec<BigRational>],
    /// `tight[v]` lists the halfspaces that vertex `v` satisfies with equality.
    tight: Vec<BTreeSet<usize>>,
    nhalf: usize,
}

impl Triangulator<'_> {
    fn dim(&self, face: &BTreeSet<usize>) -> Option<usize> {
        let pts: Vec<&Vec<BigRational>> = face.iter().map(|&v| &self.vertices[v]).collect();
        affine_dimension(&pts)
    }

    /// Facets of the face spanned by `face`, which has dimension `k`.
    fn subfaces(&self, face: &BTreeSet<usize>, k: usize) -> Vec<BTreeSet<usize>> {
        let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for h in 0..self.nhalf {
            let sub: BTreeSet<usize> = face.iter().copied().filter(|&v| self.tight[v].contains(&h)).collect();
            if sub.len() >= k && sub.len() < face.len() && self.dim(&sub) == Some(k - 1) {
                out.insert(sub);
            }
        }
        out.into_iter().collect()
    }

    /// Pulling triangulation of a `k`-dimensional face from its smallest vertex.
    fn pull(&self, face: &BTreeSet<usize>, k: usize) -> Vec<Vec<usize>> {
        let apex = *face.iter().next().expect("nonempty face");
        if k == 0 {
            return vec![vec![apex]];
        }
        let mut out = Vec::new();
        for sub in self.subfaces(face, k) {
            if sub.contains(&apex) {
                continue;
            }
            for mut s in self.pull(&sub, k - 1) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }
}

fn clip_halfspaces(p: &NewtonPolyhedron, t: &BigRational) -> Vec<Halfspace> {
    let n = p.n;
    let mut hs = Vec::new();
    for f in &p.facets {
        hs.push(Halfspace {
            normal: f.normal.iter().map(|w| BigRational::from_integer(w.clone())).collect(),
            offset: t * BigRational::from_integer(f.offset.clone()),
        });
    }
    for i in 0..n {
        let mut lo = vec![BigRational::zero(); n];
        lo[i] = BigRational::one();
        hs.push(Halfspace {
            normal: lo,
            offset: BigRational::zero(),
        });
        let mut hi = vec![BigRational::zero(); n];
        hi[i] = -BigRational::one();
        hs.push(Halfspace {
            normal: hi,
            offset: -BigRational::one(),
        });
    }
    hs
}

/// Clip `tP` by the unit cube, enumerate vertices, triangulate and measure.
pub fn clip(p: &NewtonPolyhedron, t: &BigRational) -> Result<ClippedPolytope, NewtonError> {
    let n = p.n;
    if n > MAX_DIMENSION {
        return Err(NewtonError::DimensionCap(n));
    }
    if t.is_negative() {
        return Err(NewtonError::NegativeT(t.clone()));
    }
    let halfspaces = clip_halfspaces(p, t);
    let mut found: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for_each_subset(halfspaces.len(), n, |subset| {
        let a: Vec<Vec<BigRational>> = subset.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let b: Vec<BigRational> = subset.iter().map(|&i| halfspaces[i].offset.clone()).collect();
        if let Some(u) = solve_square(&a, &b) {
            if halfspaces.iter().all(|h| h.value(&u) >= h.offset) {
                found.insert(u);
            }
        }
    });
    let vertices: Vec<Vec<BigRational>> = found.into_iter().collect();
    let tight: Vec<BTreeSet<usize>> = vertices
        .iter()
        .map(|v| {
            (0..halfspaces.len())
                .filter(|&h| halfspaces[h].value(v) == halfspaces[h].offset)
                .collect()
        })
        .collect();
    let empty = ClippedPolytope {
        halfspaces: halfspaces.clone(),
        vertices: vertices.clone(),
        points: vertices.clone(),
        simplices: Vec::new(),
        volume: BigRational::zero(),
    };
    let all: BTreeSet<usize> = (0..vertices.len()).collect();
    let tri = Triangulator {
        vertices: &vertices,
        tight,
        nhalf: halfspaces.len(),
    };
    if tri.dim(&all) != Some(n) {
        return Ok(empty);
    }
    let count = BigRational::from_integer(BigInt::from(vertices.len()));
    let centroid: Vec<BigRational> = (0..n)
        .map(|i| vertices.iter().map(|v| v[i].clone()).sum::<BigRational>() / &count)
        .collect();
    let apex = vertices.len();
    let mut points = vertices.clone();
    points.push(centroid);
    let mut simplices = Vec::new();
    for facet in tri.subfaces(&all, n) {
        for mut s in tri.pull(&facet, n - 1) {
            s.push(apex);
            simplices.push(s);
        }
    }
    let volume = simplices.iter().map(|s| simplex_volume(&points, s)).sum::<BigRational>();
    Ok(ClippedPolytope {
        halfspaces,
        vertices,
        points,
        simplices,
        volume,
    })
}

/// `|det(v_1 - v_0, ..., v_n - v_0)| / n!`.
pub fn simplex_volume(points: &[Vec<BigRational>], simplex: &[usize]) -> BigRational {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<BigRational>> = simplex[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    determinant(rows).abs() / BigRational::from_integer(factorial(simplex.len() - 1))
}

/// `vol(tP ∩ [0,1]^n)`, exactly.
pub fn clip_and_volume(p: &NewtonPolyhedron, t: &BigRational) -> Result<BigRational, NewtonError> {
    Ok(clip(p, t)?.volume)
}

/// Number of `u ∈ Z^n ∩ [0,q]^n` lying in `tqP`.
pub fn lattice_count(p: &NewtonPolyhedron, t: &BigRational, q: u64) -> Result<BigUint, NewtonError> {
    if t.is_negative() {
        return Err(NewtonError::NegativeT(t.clone()));
    }
    // b ⟨w,u⟩ >= a q c for t = a/b
    let (a, b) = (t.numer().clone(), t.denom().clone());
    let rhs: Vec<BigInt> = p.facets.iter().map(|f| &a * BigInt::from(q) * &f.offset).collect();
    let normals: Vec<Vec<BigInt>> = p
        .facets
        .iter()
        .map(|f| f.normal.iter().map(|w| w * &b).collect())
        .collect();
    let mut partial = vec![BigInt::zero(); rhs.len()];
    Ok(count_from(&normals, &rhs, q, p.n, 0, &mut partial))
}

fn count_from(
    normals: &[Vec<BigInt>],
    rhs: &[BigInt],
    q: u64,
    n: usize,
    coord: usize,
    partial: &mut Vec<BigInt>,
) -> BigUint {
    if coord + 1 == n {
        // smallest admissible last coordinate
        let mut lo = BigInt::zero();
        for ((w, r), s) in normals.iter().zip(rhs).zip(partial.iter()) {
            let need = r - s;
            let wl = &w[coord];
            if wl.is_zero() {
                if need.is_positive() {
                    return BigUint::zero();
                }
            } else {
                let bound = need.div_ceil(wl);
                if bound > lo {
                    lo = bound;
                }
            }
        }
        let q = BigInt::from(q);
        return if lo > q {
            BigUint::zero()
        } else {
            (q - lo + 1u32).to_biguint().expect("nonnegative")
        };
    }
    let mut total = BigUint::zero();
    for x in 0..=q {
        let xb = BigInt::from(x);
        for (s, w) in partial.iter_mut().zip(normals) {
            *s += &w[coord] * &xb;
        }
        total += count_from(normals, rhs, q, n, coord + 1, partial);
        for (s, w) in partial.iter_mut().zip(normals) {
            *s -= &w[coord] * &xb;
        }
    }
    total
}

/// The F-signature `s(S, a^t)` of a monomial pair.
pub fn monomial_signature(exponents: &[Vec<u32>], t: &BigRational) -> Result<BigRational, NewtonError> {
    clip_and_volume(&newton_polyhedron(exponents)?, t)
}

/// `x^u ∈ closure(a^λ)`.
pub fn closure_membership(u: &[u32], exponents: &[Vec<u32>], lambda: &BigRational) -> Result<bool, NewtonError> {
    let p = newton_polyhedron(exponents)?;
    if u.len() != p.n {
        return Err(NewtonError::DimensionMismatch {
            index: 0,
            expected: p.n,
            found: u.len(),
        });
    }
    let u: Vec<BigRational> = u.iter().map(|&x| rat(x as i64)).collect();
    Ok(p.contains_scaled(&u, lambda))
}

/// Decimal rendering with `places` digits after the point, rounded half up.
pub fn decimal(x: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    let frac = frac.to_u64().map(|f| f.to_string()).unwrap_or_else(|| frac.to_string());
    format!("{sign}{int}.{frac:0>width$}", width = places as usize)
}
