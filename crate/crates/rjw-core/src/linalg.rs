//! Linear algebra over Z_(2): column echelon forms, kernels, membership and
//! Smith normal form. Pivots are chosen by minimal 2-adic valuation, so every
//! elimination step stays inside the local ring.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::numeric::TwoLocalNumber as Z2;

pub type Vector = Vec<Z2>;

fn val(x: &Z2) -> Option<u64> {
    x.valuation2()
}

/// `a -= t * b`
fn axpy(a: &mut [Z2], t: &Z2, b: &[Z2]) {
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x = &*x - &(t * y);
        }
    }
}

fn quotient(a: &Z2, p: &Z2) -> Z2 {
    a.checked_div(p).expect("pivot of minimal valuation divides")
}

/// Column echelon form of the span of `cols` (each of length `dim`).
/// Returned vectors are independent, span the same Z_(2)-module and have
/// strictly increasing pivot rows with zeros above each pivot.
pub fn echelon(cols: Vec<Vector>, dim: usize) -> Vec<Vector> {
    echelon_with_pivots(cols, dim).0
}

pub fn echelon_with_pivots(mut rest: Vec<Vector>, dim: usize) -> (Vec<Vector>, Vec<usize>) {
    rest.retain(|c| c.iter().any(|x| !x.is_zero()));
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    for r in 0..dim {
        if rest.is_empty() {
            break;
        }
        let best = rest
            .iter()
            .enumerate()
            .filter_map(|(i, c)| val(&c[r]).map(|v| (v, i)))
            .min();
        let Some((_, bi)) = best else { continue };
        let p = rest.swap_remove(bi);
        for c in rest.iter_mut() {
            if !c[r].is_zero() {
                let t = quotient(&c[r], &p[r]);
                axpy(c, &t, &p);
            }
        }
        rest.retain(|c| c.iter().any(|x| !x.is_zero()));
        basis.push(p);
        pivots.push(r);
    }
    (basis, pivots)
}

/// Basis of {α : Σ α_i cols_i = 0}.
pub fn kernel(cols: &[Vector], dim: usize) -> Vec<Vector> {
    let k = cols.len();
    let mut aug: Vec<Vector> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut v = c.clone();
            v.extend((0..k).map(|j| if i == j { Z2::one() } else { Z2::zero() }));
            v
        })
        .collect();
    for r in 0..dim {
        let best = aug
            .iter()
            .enumerate()
            .filter(|(_, c)| c[..dim].iter().any(|x| !x.is_zero()))
            .filter_map(|(i, c)| val(&c[r]).map(|v| (v, i)))
            .min();
        let Some((_, bi)) = best else { continue };
        let p = aug.swap_remove(bi);
        for c in aug.iter_mut() {
            if !c[r].is_zero() {
                let t = quotient(&c[r], &p[r]);
                axpy(c, &t, &p);
            }
        }
    }
    aug.into_iter()
        .filter(|c| c[..dim].iter().all(|x| x.is_zero()))
        .map(|c| c[dim..].to_vec())
        .collect()
}

/// A free Z_(2)-submodule of Z_(2)^dim held in column echelon form.
/// Equality is equality of submodules.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::span(dim, (0..dim).map(|i| unit_vector(dim, i)).collect())
    }

    pub fn span(dim: usize, gens: Vec<Vector>) -> Self {
        let (basis, pivots) = echelon_with_pivots(gens, dim);
        Lattice { dim, basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Z2]) -> Option<Vector> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            // entries above the pivot were cleared by earlier steps
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let t = if rest[p].is_zero() { Z2::zero() } else { rest[p].checked_div(&b[p])? };
            if !t.is_zero() {
                axpy(&mut rest, &t, b);
            }
            coords.push(t);
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[Z2]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Lattice::span(self.dim, g)
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Vector>) -> Lattice {
        let mut g = self.basis.clone();
        g.extend(extra);
        Lattice::span(self.dim, g)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        let k = self.basis.len();
        let gens = kernel(&cols, self.dim)
            .into_iter()
            .map(|a| combine(&self.basis, &a[..k], self.dim))
            .collect();
        Lattice::span(self.dim, gens)
    }

    /// Keep only the listed coordinates.
    pub fn project(&self, keep: &[usize]) -> Lattice {
        let gens = self.basis.iter().map(|v| keep.iter().map(|&i| v[i].clone()).collect()).collect();
        Lattice::span(keep.len(), gens)
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && self.contains_lattice(other)
            && other.contains_lattice(self)
    }
}

impl Eq for Lattice {}

pub fn unit_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![Z2::zero(); dim];
    v[i] = Z2::one();
    v
}

pub fn combine(cols: &[Vector], coeffs: &[Z2], dim: usize) -> Vector {
    let mut out = vec![Z2::zero(); dim];
    for (c, t) in cols.iter().zip(coeffs) {
        if !t.is_zero() {
            for (o, x) in out.iter_mut().zip(c) {
                if !x.is_zero() {
                    *o = &*o + &(t * x);
                }
            }
        }
    }
    out
}

/// The invariants of a subquotient Z/B.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Invariants {
    pub free: usize,
    /// exponents e of the cyclic summands Z/2^e, sorted
    pub torsion: Vec<u64>,
}

impl Invariants {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn merge(&mut self, other: &Invariants) {
        self.free += other.free;
        self.torsion.extend_from_slice(&other.torsion);
        self.torsion.sort_unstable();
    }

    /// 0 for each free summand, then 2^e for each torsion summand.
    pub fn factors(&self) -> Vec<u64> {
        let mut out = vec![0; self.free];
        out.extend(self.torsion.iter().map(|&e| 1u64 << e));
        out
    }
}

/// Smith normal form of a `rows × cols` matrix given by columns. Returns the
/// diagonal valuations and the row-basis change: column `i` of the returned
/// matrix (length `rows`) is the new basis vector paired with diagonal `i`.
pub fn smith(mut cols: Vec<Vector>, rows: usize) -> (Vec<u64>, Vec<Vector>) {
    // basis[i] expresses the current i-th row coordinate in the original one
    let mut basis: Vec<Vector> = (0..rows).map(|i| unit_vector(rows, i)).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    loop {
        if t >= rows {
            break;
        }
        let best = cols
            .iter()
            .enumerate()
            .skip(t)
            .flat_map(|(j, c)| c.iter().enumerate().skip(t).filter_map(move |(i, x)| val(x).map(|v| (v, i, j))))
            .min();
        let Some((v, i, j)) = best else { break };
        cols.swap(t, j);
        for c in cols.iter_mut() {
            c.swap(t, i);
        }
        basis.swap(t, i);
        let p = cols[t][t].clone();
        // clear column t below the pivot with row operations
        for r in t + 1..rows {
            if cols[t][r].is_zero() {
                continue;
            }
            let q = quotient(&cols[t][r], &p);
            // row_r -= q row_t  <=>  basis_t += q basis_r
            for c in cols.iter_mut() {
                if !c[t].is_zero() {
                    let d = &q * &c[t];
                    c[r] = &c[r] - &d;
                }
            }
            let br = basis[r].clone();
            for (x, y) in basis[t].iter_mut().zip(&br) {
                if !y.is_zero() {
                    *x = &*x + &(&q * y);
                }
            }
        }
        // clear row t to the right with column operations
        let pc = cols[t].clone();
        for c in cols.iter_mut().skip(t + 1) {
            if !c[t].is_zero() {
                let q = quotient(&c[t], &p);
                axpy(c, &q, &pc);
            }
        }
        diag.push(v);
        t += 1;
    }
    (diag, basis)
}

/// Invariants of Z/B with B ⊆ Z, plus an adapted basis of Z: each returned
/// vector is paired with the order of its class (None for free).
pub fn subquotient(z: &Lattice, b: &Lattice) -> Option<(Invariants, Vec<(Vector, Option<u64>)>)> {
    let coords: Vec<Vector> = b.basis.iter().map(|v| z.coordinates(v)).collect::<Option<_>>()?;
    let r = z.rank();
    let (diag, change) = smith(coords, r);
    let mut inv = Invariants::default();
    let mut gens = Vec::new();
    for (i, ch) in change.iter().enumerate() {
        let v = combine(&z.basis, ch, z.dim);
        match diag.get(i) {
            Some(0) => {}
            Some(&e) => {
                inv.torsion.push(e);
                gens.push((v, Some(e)));
            }
            None => {
                inv.free += 1;
                gens.push((v, None));
            }
        }
    }
    inv.torsion.sort_unstable();
    Some((inv, gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Z2::from_i64(x)).collect()
    }

    #[test]
    fn multiplication_by_two() {
        let z = Lattice::full(1);
        let b = Lattice::span(1, vec![v(&[2])]);
        let (inv, _) = subquotient(&z, &b).unwrap();
        assert_eq!(inv.factors(), vec![2]);
        assert!(kernel(&[v(&[2])], 1).is_empty());
    }

    #[test]
    fn zero_map_keeps_source() {
        let k = kernel(&[v(&[0, 0]), v(&[0, 0])], 2);
        assert_eq!(k.len(), 2);
        let (inv, _) = subquotient(&Lattice::full(2), &Lattice::zero(2)).unwrap();
        assert_eq!(inv.free, 2);
    }

    #[test]
    fn odd_factors_are_units() {
        let b = Lattice::span(2, vec![v(&[3, 0]), v(&[0, 12])]);
        let (inv, gens) = subquotient(&Lattice::full(2), &b).unwrap();
        assert_eq!(inv.factors(), vec![4]);
        assert_eq!(gens.len(), 1);
        assert!(Lattice::full(2).contains(&v(&[5, 7])));
        assert!(!b.contains(&v(&[0, 2])));
        assert_eq!(b.coordinates(&v(&[6, 24])).unwrap().len(), 2);
    }

    #[test]
    fn intersections() {
        let a = Lattice::span(2, vec![v(&[2, 0]), v(&[0, 1])]);
        let b = Lattice::span(2, vec![v(&[1, 1])]);
        let c = a.intersect(&b);
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&v(&[2, 2])));
        assert!(!c.contains(&v(&[1, 1])));
    }
}
