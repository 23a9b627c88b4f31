//! Sparse linear algebra over `F_p` on the box of monomials `x^u` with
//! `0 <= u_i < q`, which is a basis of `S / <x_1^q, ..., x_n^q>`.
//!
//! For generators `f_1, ..., f_r` the multiplication map
//! `g ↦ (g f_1, ..., g f_r) mod <x_i^q>` has kernel `(<x_i^q> : <f_j>) / <x_i^q>`,
//! so its rank is the length of `S / (<x_i^q> : <f_j>)`. The matrix splits
//! into independent blocks (connected components of the column/row incidence
//! graph), each eliminated separately.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::field::PrimeField;
use crate::groebner::{GroebnerBasis, GroebnerError, Ideal};
use crate::poly::{Monomial, Polynomial, Ring};

type SparseVec = Vec<(u32, u64)>;

struct BoxIndex {
    n: usize,
    q: u32,
    size: usize,
}

impl BoxIndex {
    fn new(n: usize, q: u64, cap: usize) -> Result<BoxIndex, GroebnerError> {
        let q32 = u32::try_from(q).map_err(|_| GroebnerError::ResourceCap {
            what: "box side length",
            limit: u32::MAX as usize,
        })?;
        let size = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(q as usize));
        match size {
            Some(s) if s <= cap => Ok(BoxIndex { n, q: q32, size: s }),
            _ => Err(GroebnerError::ResourceCap {
                what: "box monomials",
                limit: cap,
            }),
        }
    }

    fn exponents(&self, mut idx: usize) -> Vec<u32> {
        let mut e = vec![0; self.n];
        for slot in e.iter_mut().rev() {
            *slot = (idx % self.q as usize) as u32;
            idx /= self.q as usize;
        }
        e
    }

    fn index_of_sum(&self, a: &[u32], b: &[u32]) -> Option<usize> {
        let mut idx = 0usize;
        for (x, y) in a.iter().zip(b) {
            let s = x + y;
            if s >= self.q {
                return None;
            }
            idx = idx * self.q as usize + s as usize;
        }
        Some(idx)
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let parent = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = parent;
            x = parent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

/// The multiplication matrix, column by column, plus its block structure.
struct MultiplicationMap {
    boxed: BoxIndex,
    columns: Vec<SparseVec>,
    components: Vec<Vec<u32>>,
}

impl MultiplicationMap {
    fn build(ring: &Ring, q: u64, gens: &[Polynomial]) -> Result<Self, GroebnerError> {
        let limits = ring.limits();
        let boxed = BoxIndex::new(ring.nvars(), q, limits.max_box)?;
        let gens: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
        let terms: usize = gens.iter().map(|g| g.len()).sum();
        let rows_total = boxed.size.checked_mul(gens.len().max(1));
        let entries = boxed.size.checked_mul(terms.max(1));
        match (rows_total, entries) {
            (Some(r), Some(e)) if r <= u32::MAX as usize && r <= limits.max_entries && e <= limits.max_entries => {}
            _ => {
                return Err(GroebnerError::ResourceCap {
                    what: "matrix entries",
                    limit: limits.max_entries,
                })
            }
        }
        let rows_total = rows_total.expect("checked");
        let mut columns = Vec::with_capacity(boxed.size);
        let mut owner = vec![u32::MAX; rows_total];
        let mut uf = UnionFind((0..boxed.size as u32).collect());
        for col in 0..boxed.size {
            let m = boxed.exponents(col);
            let mut v: SparseVec = Vec::new();
            for (j, g) in gens.iter().enumerate() {
                for (u, c) in g.terms() {
                    if let Some(idx) = boxed.index_of_sum(&m, u.exponents()) {
                        let row = (j * boxed.size + idx) as u32;
                        v.push((row, *c));
                    }
                }
            }
            v.sort_unstable_by_key(|&(r, _)| r);
            for &(row, _) in &v {
                let slot = &mut owner[row as usize];
                if *slot == u32::MAX {
                    *slot = col as u32;
                } else {
                    uf.union(*slot, col as u32);
                }
            }
            columns.push(v);
        }
        let mut by_root: HashMap<u32, Vec<u32>> = HashMap::new();
        for col in 0..boxed.size as u32 {
            let root = uf.find(col);
            by_root.entry(root).or_default().push(col);
        }
        let mut components: Vec<Vec<u32>> = by_root.into_values().collect();
        components.sort_unstable_by_key(|c| c[0]);
        Ok(MultiplicationMap {
            boxed,
            columns,
            components,
        })
    }
}

/// Row-echelon accumulator keyed by leading row index.
struct Echelon<'a> {
    field: &'a PrimeField,
    pivots: HashMap<u32, (SparseVec, SparseVec)>,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a PrimeField) -> Self {
        Echelon {
            field,
            pivots: HashMap::new(),
        }
    }

    /// `a + c*b` for sorted sparse vectors.
    fn axpy(&self, a: &SparseVec, c: u64, b: &SparseVec) -> SparseVec {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, f.mul(c, b[j].1)));
                j += 1;
            } else {
                let v = f.add(a[i].1, f.mul(c, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Reduce `v` (tracking `combo` when requested). Returns `true` if `v`
    /// was independent and became a new pivot; otherwise `combo` holds the
    /// dependency relation.
    fn insert(&mut self, mut v: SparseVec, combo: &mut Option<SparseVec>) -> bool {
        while let Some(&(lead, val)) = v.first() {
            match self.pivots.get(&lead) {
                Some((row, row_combo)) => {
                    let c = self.field.neg(self.field.div(val, row[0].1));
                    v = self.axpy(&v, c, row);
                    if let Some(cb) = combo.as_mut() {
                        *cb = self.axpy(cb, c, row_combo);
                    }
                }
                None => {
                    let cb = combo.take().unwrap_or_default();
                    self.pivots.insert(lead, (v, cb));
                    return true;
                }
            }
        }
        false
    }
}

/// Rank of the multiplication map, i.e. `length(S / (<x_i^q> : <gens>))`.
pub fn multiplication_rank(ring: &Ring, q: u64, gens: &[Polynomial]) -> Result<BigUint, GroebnerError> {
    let map = MultiplicationMap::build(ring, q, gens)?;
    let field = ring.field();
    let mut rank: u64 = 0;
    for comp in &map.components {
        let mut ech = Echelon::new(field);
        for &col in comp {
            let v = map.columns[col as usize].clone();
            if ech.insert(v, &mut None) {
                rank += 1;
            }
        }
    }
    Ok(BigUint::from(rank))
}

/// Reduced Groebner basis (in the ring's order) of `(<x_i^q> : <gens>)`,
/// read off the kernel of the multiplication map: processing box monomials
/// in increasing order, a monomial is a leading monomial exactly when its
/// image depends on the images of smaller monomials.
pub fn box_colon_basis(ring: &Ring, q: u64, gens: &[Polynomial]) -> Result<Ideal, GroebnerError> {
    let map = MultiplicationMap::build(ring, q, gens)?;
    let field = ring.field();
    let order = ring.order();
    let n = ring.nvars();
    let size = map.boxed.size;
    let monos: Vec<Monomial> = (0..size).map(|i| Monomial::new(map.boxed.exponents(i))).collect();

    let sorted_components: Vec<Vec<u32>> = map
        .components
        .iter()
        .map(|comp| {
            let mut c = comp.clone();
            c.sort_by(|&a, &b| order.cmp(&monos[a as usize], &monos[b as usize]));
            c
        })
        .collect();

    // pass 1: which box monomials are leading monomials
    let mut dependent = vec![false; size];
    for comp in &sorted_components {
        let mut ech = Echelon::new(field);
        for &col in comp {
            if !ech.insert(map.columns[col as usize].clone(), &mut None) {
                dependent[col as usize] = true;
            }
        }
    }
    let q32 = map.boxed.q;
    let minimal = |col: usize| -> bool {
        let e = &monos[col];
        (0..n).all(|i| {
            if e.exponents()[i] == 0 {
                return true;
            }
            let mut d = e.exponents().to_vec();
            d[i] -= 1;
            let idx = d.iter().fold(0usize, |acc, &x| acc * q32 as usize + x as usize);
            !dependent[idx]
        })
    };
    let wanted: Vec<bool> = (0..size).map(|c| dependent[c] && minimal(c)).collect();

    // pass 2: relations for the minimal leading monomials
    let mut elements: Vec<Polynomial> = Vec::new();
    for comp in &sorted_components {
        if !comp.iter().any(|&c| wanted[c as usize]) {
            continue;
        }
        let mut ech = Echelon::new(field);
        for &col in comp {
            let mut combo = Some(vec![(col, 1u64)]);
            let independent = ech.insert(map.columns[col as usize].clone(), &mut combo);
            if !independent && wanted[col as usize] {
                let relation = combo.expect("dependency keeps its relation");
                elements.push(
                    ring.from_terms(
                        relation
                            .into_iter()
                            .map(|(c, v)| (monos[c as usize].clone(), v)),
                    )
                    .monic(),
                );
            }
        }
    }
    // pure powers x_i^q not already divisible by a box leading monomial
    for i in 0..n {
        let m = Monomial::var(n, i, q32);
        let covered = elements
            .iter()
            .any(|g| g.leading_monomial().unwrap().divides(&m));
        if !covered {
            elements.push(ring.term(m, 1));
        }
    }
    elements.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(Ideal::from_basis(GroebnerBasis::from_parts(ring.clone(), elements)))
}
