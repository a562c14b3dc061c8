//! Cells, truncated ambients and the page recursion on cycle and boundary
//! lattices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use num_traits::{One, Zero};

use crate::coeffring::{lambda, Monomial, RingDescriptor};
use crate::linalg::{self, Invariants, Lattice, Vector};
use crate::numeric::TwoLocalNumber as Z2;

use super::{Bidegree, BssError, TruncationBox};

/// What the extra exponent `e` of a cell monomial counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ext {
    /// no series variable
    None,
    /// powers of û
    UHat,
    /// powers of w = ûû*; tag 1 marks the second basis vector v_n(û - û*)
    W,
}

/// x^s · v̂^a v_n^b · (û or w)^e, with an optional basis tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellMono {
    pub s: u32,
    pub e: u32,
    pub tag: u8,
    pub coef: Monomial,
}

impl CellMono {
    pub fn new(s: u32, coef: Monomial, e: u32) -> Self {
        CellMono { s, e, tag: 0, coef }
    }
    pub fn tagged(mut self, tag: u8) -> Self {
        self.tag = tag;
        self
    }
    pub fn vn(&self) -> i32 {
        self.coef.vn_exp()
    }
    pub fn vhat_exps(&self) -> &[i32] {
        &self.coef[..self.coef.len() - 1]
    }
    pub fn times(&self, m: &Monomial) -> Self {
        CellMono { coef: self.coef.mul(m), ..*self }
    }
    pub fn shift(&self, ds: u32, de: u32) -> Self {
        CellMono { s: self.s + ds, e: self.e + de, ..*self }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Grading {
    pub n: u32,
    pub ext: Ext,
    ring: RingDescriptor,
}

impl Grading {
    pub fn new(n: u32, ext: Ext) -> Self {
        Grading { n, ext, ring: RingDescriptor::hatted(n) }
    }
    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }
    pub fn x_degree(&self) -> i64 {
        1 - lambda(self.n)
    }
    pub fn var_degree(&self) -> i64 {
        match self.ext {
            Ext::None => 0,
            Ext::UHat => 1 - lambda(self.n),
            Ext::W => 2 * (1 - lambda(self.n)),
        }
    }
    pub fn tag_degree(&self, tag: u8) -> i64 {
        if tag == 0 {
            0
        } else {
            self.ring.generator_degree(self.n as usize - 1) + 1 - lambda(self.n)
        }
    }
    pub fn bidegree(&self, m: &CellMono) -> Bidegree {
        let j = m.coef.degree(&self.ring)
            + m.e as i64 * self.var_degree()
            + self.tag_degree(m.tag)
            + m.s as i64 * self.x_degree();
        Bidegree { i: m.s, j }
    }

    pub fn name(&self, m: &CellMono) -> String {
        let mut out = String::new();
        let ring = self.ring;
        for (k, &e) in m.coef.iter().enumerate() {
            if e != 0 {
                if !out.is_empty() {
                    out.push('*');
                }
                out.push_str(&ring.generator_name(k));
                if e != 1 {
                    let _ = write!(out, "^{}", e);
                }
            }
        }
        let var = match self.ext {
            Ext::None => "",
            Ext::UHat => "uh",
            Ext::W => "w",
        };
        for (name, e) in [(var, m.e), ("x", m.s)] {
            if e != 0 {
                if !out.is_empty() {
                    out.push('*');
                }
                out.push_str(name);
                if e != 1 {
                    let _ = write!(out, "^{}", e);
                }
            }
        }
        if m.tag == 1 {
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str("vn(uh-uh*)");
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// The monomials of a truncation box grouped by bidegree.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub grading: Grading,
    pub bx: TruncationBox,
    cells: BTreeMap<Bidegree, Vec<CellMono>>,
    index: BTreeMap<CellMono, usize>,
}

/// All exponent vectors (a_1..a_{n-1}) with entries at most `a_max`.
pub fn vhat_exponents(n: u32, a_max: u32) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=a_max as i32).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn coef_monomial(a: &[i32], b: i32) -> Monomial {
    let mut e = a.to_vec();
    e.push(b);
    Monomial::new(&e)
}

impl Ambient {
    /// `tags` lists the basis tags to include (only meaningful for Ext::W).
    pub fn build(grading: Grading, bx: TruncationBox, tags: &[u8]) -> Self {
        let n = grading.n;
        let e_max = if grading.ext == Ext::None { 1 } else { bx.prec };
        let mut cells: BTreeMap<Bidegree, Vec<CellMono>> = BTreeMap::new();
        for a in vhat_exponents(n, bx.a_max) {
            for b in -bx.b_max..=bx.b_max {
                for e in 0..e_max {
                    for s in 0..=bx.s_max {
                        for &tag in tags {
                            let m = CellMono::new(s, coef_monomial(&a, b as i32), e).tagged(tag);
                            cells.entry(grading.bidegree(&m)).or_default().push(m);
                        }
                    }
                }
            }
        }
        let mut index = BTreeMap::new();
        for list in cells.values_mut() {
            list.sort();
            for (i, m) in list.iter().enumerate() {
                index.insert(*m, i);
            }
        }
        Ambient { grading, bx, cells, index }
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Bidegree, &Vec<CellMono>)> {
        self.cells.iter()
    }
    pub fn cell(&self, bd: &Bidegree) -> Option<&[CellMono]> {
        self.cells.get(bd).map(|v| v.as_slice())
    }
    pub fn dim(&self, bd: &Bidegree) -> usize {
        self.cells.get(bd).map_or(0, |v| v.len())
    }
    pub fn position(&self, m: &CellMono) -> Option<usize> {
        self.index.get(m).copied()
    }
    pub fn contains(&self, m: &CellMono) -> bool {
        self.index.contains_key(m)
    }

    /// Dense vector in cell `bd` from terms; monomials outside the box are
    /// dropped, which is the quotient by the discarded region.
    pub fn vector(&self, bd: &Bidegree, terms: impl IntoIterator<Item = (CellMono, Z2)>) -> Vector {
        let mut v = vec![Z2::zero(); self.dim(bd)];
        for (m, c) in terms {
            if let Some(p) = self.position(&m) {
                debug_assert_eq!(self.grading.bidegree(&m), *bd);
                v[p] = &v[p] + &c;
            }
        }
        v
    }

    pub fn format(&self, bd: &Bidegree, v: &[Z2]) -> String {
        let cell = self.cell(bd).unwrap_or(&[]);
        format_terms(&self.grading, cell, v)
    }
}

pub fn format_terms(g: &Grading, cell: &[CellMono], v: &[Z2]) -> String {
    let mut out = String::new();
    for (m, c) in cell.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != Z2::one() {
            let _ = write!(out, "{}*", mag);
        }
        out.push_str(&g.name(m));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub type Differential<'a> = &'a dyn Fn(&CellMono) -> Vec<(CellMono, Z2)>;

/// Cycle and boundary lattices of one page, per cell.
#[derive(Debug, Clone)]
pub struct Lattices {
    pub z: BTreeMap<Bidegree, Lattice>,
    pub b: BTreeMap<Bidegree, Lattice>,
}

impl Lattices {
    pub fn e1(amb: &Ambient) -> Self {
        let mut z = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (bd, cell) in amb.cells() {
            z.insert(*bd, Lattice::full(cell.len()));
            b.insert(*bd, Lattice::zero(cell.len()));
        }
        Lattices { z, b }
    }
}

fn apply(amb: &Ambient, d: Differential, bd: &Bidegree, tgt: &Bidegree, v: &[Z2]) -> Vector {
    let cell = amb.cell(bd).unwrap();
    let mut out = vec![Z2::zero(); amb.dim(tgt)];
    for (m, c) in cell.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        for (t, k) in d(m) {
            if let Some(p) = amb.position(&t) {
                debug_assert_eq!(amb.grading.bidegree(&t), *tgt, "differential bidegree");
                out[p] = &out[p] + &(c * &k);
            }
        }
    }
    out
}

/// Matrix of `d` from cell `bd` into its target, as columns.
pub fn differential_columns(amb: &Ambient, d: Differential, bd: &Bidegree, r: u32) -> Vec<Vector> {
    let tgt = target(bd, r);
    (0..amb.dim(bd))
        .map(|i| apply(amb, d, bd, &tgt, &linalg::unit_vector(amb.dim(bd), i)))
        .collect()
}

pub fn target(bd: &Bidegree, r: u32) -> Bidegree {
    Bidegree { i: bd.i + r, j: bd.j + r as i64 + 1 }
}

/// Pass from E_r to E_{r+1} along `d`. Returns the new lattices and the cells
/// where `d` fails to be well defined on E_r.
pub fn next_page(amb: &Ambient, state: &Lattices, r: u32, d: Differential) -> (Lattices, Vec<Bidegree>) {
    let mut z = state.z.clone();
    let mut b = state.b.clone();
    let mut bad = Vec::new();
    for (bd, zl) in &state.z {
        let tgt = target(bd, r);
        let Some(zt) = state.z.get(&tgt) else { continue };
        let bt = &state.b[&tgt];
        let images: Vec<Vector> = zl.basis.iter().map(|v| apply(amb, d, bd, &tgt, v)).collect();
        if images.iter().all(|v| v.iter().all(|x| x.is_zero())) {
            continue;
        }
        let well_defined = images.iter().all(|v| zt.contains(v))
            && state.b[bd].basis.iter().all(|v| bt.contains(&apply(amb, d, bd, &tgt, v)));
        if !well_defined {
            bad.push(*bd);
        }
        // z in Z_r with d z in B_r
        let mut cols = images.clone();
        cols.extend(bt.basis.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let k = zl.rank();
        let gens = linalg::kernel(&cols, amb.dim(&tgt))
            .into_iter()
            .map(|a| linalg::combine(&zl.basis, &a[..k], zl.dim))
            .collect();
        z.insert(*bd, Lattice::span(zl.dim, gens));
        let nb = b[&tgt].with(images);
        b.insert(tgt, nb);
    }
    (Lattices { z, b }, bad)
}

/// Check d ∘ d = 0 exactly on the ambient; returns the first offending cell.
pub fn square_zero(amb: &Ambient, d: Differential, r: u32) -> Option<Bidegree> {
    for (bd, cell) in amb.cells() {
        let t1 = target(bd, r);
        if amb.cell(&t1).is_none() {
            continue;
        }
        let t2 = target(&t1, r);
        for i in 0..cell.len() {
            let once = apply(amb, d, bd, &t1, &linalg::unit_vector(cell.len(), i));
            if amb.cell(&t2).is_some() && apply(amb, d, &t1, &t2, &once).iter().any(|x| !x.is_zero()) {
                return Some(*bd);
            }
        }
    }
    None
}

/// The coordinates of a cell that survive projection to the core box.
pub fn core_positions(amb: &Ambient, bd: &Bidegree, core: &TruncationBox) -> Vec<usize> {
    amb.cell(bd)
        .unwrap_or(&[])
        .iter()
        .enumerate()
        .filter(|(_, m)| core.holds_quotient(m, amb.grading.ext))
        .map(|(i, _)| i)
        .collect()
}

/// A page restricted to the core box: per cell the core monomials and the
/// projected cycle and boundary lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedCell {
    pub monos: Vec<CellMono>,
    pub z: Lattice,
    pub b: Lattice,
}

impl ProjectedCell {
    pub fn invariants(&self) -> (Invariants, Vec<(Vector, Option<u64>)>) {
        linalg::subquotient(&self.z, &self.b).expect("boundaries lie in cycles")
    }
}

pub type Projected = BTreeMap<Bidegree, ProjectedCell>;

pub fn project(amb: &Ambient, state: &Lattices, core: &TruncationBox, cells: &[Bidegree]) -> Result<Projected, BssError> {
    let mut out = BTreeMap::new();
    for bd in cells {
        let cell = amb.cell(bd).ok_or(BssError::BoxTooSmall(*bd))?;
        let keep = core_positions(amb, bd, core);
        let monos = keep.iter().map(|&i| cell[i]).collect();
        let z = state.z[bd].project(&keep);
        let b = state.b[bd].project(&keep);
        out.insert(*bd, ProjectedCell { monos, z, b });
    }
    Ok(out)
}

/// The bidegrees of core monomials.
pub fn core_cells(g: &Grading, core: &TruncationBox, tags: &[u8]) -> Vec<Bidegree> {
    let mut set = alloc::collections::BTreeSet::new();
    let e_max = if g.ext == Ext::None { 1 } else { core.prec };
    for a in vhat_exponents(g.n, core.a_max) {
        for b in -core.b_max..=core.b_max {
            for e in 0..e_max {
                for s in 0..=core.s_max {
                    for &tag in tags {
                        set.insert(g.bidegree(&CellMono::new(s, coef_monomial(&a, b as i32), e).tagged(tag)));
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

pub fn unit(x: i64) -> Z2 {
    Z2::from_i64(x)
}

pub fn describe(bd: &Bidegree) -> String {
    format!("({}, {})", bd.i, bd.j)
}
