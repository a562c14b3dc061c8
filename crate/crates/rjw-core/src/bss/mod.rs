//! The Bockstein spectral sequence on truncation boxes, for the point and for
//! CP^∞.
//!
//! Every box is an interval in the partial order generated by the
//! differentials, so the truncated E_1 is an honest subquotient complex. Pages
//! are computed on an enlarged box and projected to the requested one; a cell
//! is reported safe when two enlargements of different size agree on it.

pub mod cp;
pub mod engine;
pub mod pt;
pub mod zero_line;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use engine::{CellMono, Ext, Grading};

use crate::coeffring::RingDescriptor;
use crate::linalg::{self, Invariants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    /// filtration, the power of x
    pub i: u32,
    /// internal degree
    pub j: i64,
}

impl Bidegree {
    pub fn new(i: u32, j: i64) -> Self {
        Bidegree { i, j }
    }
    /// The ER(n) degree the cell contributes to.
    pub fn total(&self) -> i64 {
        self.j - self.i as i64
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BssError {
    #[error("no monomials in bidegree {0}")]
    BoxTooSmall(Bidegree),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("class is not present on page {0}")]
    NotASurvivor(u32),
    #[error("closed form mismatch at {at}: computed {computed}, expected {expected}")]
    ClosedFormMismatch { at: Bidegree, computed: String, expected: String },
    #[error(transparent)]
    Cp(#[from] crate::cpbasis::CpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Pt,
    CpInf,
}

impl Space {
    pub fn as_str(self) -> &'static str {
        match self {
            Space::Pt => "pt",
            Space::CpInf => "cpinf",
        }
    }
}

/// Exponent bounds: v̂_k exponents at most `a_max`, v_n exponent in
/// [-b_max, b_max], series precision `prec`, filtration 0..=s_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationBox {
    pub a_max: u32,
    pub b_max: i64,
    pub prec: u32,
    pub s_max: u32,
}

impl TruncationBox {
    pub fn new(n: u32, a_max: u32, b_max: i64, prec: u32) -> Result<Self, BssError> {
        if n == 0 || b_max < 0 {
            return Err(BssError::InvalidBox(alloc::format!("n = {}, B = {}", n, b_max)));
        }
        Ok(TruncationBox { a_max, b_max, prec, s_max: (1 << (n + 1)) - 1 })
    }

    /// Parse "A,B,N".
    pub fn parse(n: u32, spec: &str) -> Result<Self, BssError> {
        let parts: Vec<&str> = spec.split(',').map(|p| p.trim()).collect();
        let bad = || BssError::InvalidBox(String::from(spec));
        if parts.len() != 3 {
            return Err(bad());
        }
        let a = parts[0].parse().map_err(|_| bad())?;
        let b = parts[1].parse().map_err(|_| bad())?;
        let p = parts[2].parse().map_err(|_| bad())?;
        Self::new(n, a, b, p)
    }

    pub fn with_s_max(mut self, s: u32) -> Self {
        self.s_max = s;
        self
    }

    /// Membership in the quotient directions (v̂ exponents, series degree,
    /// filtration); the v_n exponent is fixed by the other data in a cell.
    pub fn holds_quotient(&self, m: &CellMono, ext: Ext) -> bool {
        m.s <= self.s_max
            && m.vhat_exps().iter().all(|&a| a >= 0 && a as u32 <= self.a_max)
            && (ext == Ext::None || m.e < self.prec)
    }

    /// Enlarge by `m`, widening the v_n range enough to hold every core
    /// coordinate of every core cell.
    pub fn enlarge(&self, g: &Grading, m: &Margin) -> TruncationBox {
        let ring = RingDescriptor::hatted(g.n);
        let vn = ring.generator_degree(g.n as usize - 1).abs();
        let mut spread: i64 = (1..g.n as usize).map(|k| self.a_max as i64 * ring.generator_degree(k - 1).abs()).sum();
        if g.ext != Ext::None {
            spread += (self.prec as i64 + m.e as i64) * g.var_degree().abs() + g.tag_degree(1).abs();
        }
        spread += (m.a as i64) * (1..g.n as usize).map(|k| ring.generator_degree(k - 1).abs()).sum::<i64>();
        TruncationBox {
            a_max: self.a_max + m.a,
            b_max: self.b_max + spread / vn + 1 + m.b,
            prec: self.prec + m.e,
            s_max: self.s_max + m.s,
        }
    }
}

/// How far the computation box extends beyond the reported one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Margin {
    pub a: u32,
    pub b: i64,
    pub e: u32,
    pub s: u32,
}

impl Margin {
    pub fn doubled(&self) -> Margin {
        Margin { a: 2 * self.a, b: 2 * self.b, e: 2 * self.e, s: 2 * self.s }
    }
}

/// Generators with their bidegrees and relation columns over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    pub generators: Vec<(String, Bidegree)>,
    pub relations: Vec<linalg::Vector>,
}

impl PresentedModule {
    /// Invariants of the cokernel of the relation matrix.
    pub fn invariants(&self) -> Invariants {
        let rows = self.generators.len();
        let (diag, _) = linalg::smith(self.relations.clone(), rows);
        let mut inv = Invariants { free: rows - diag.len(), torsion: diag.into_iter().filter(|&e| e > 0).collect() };
        inv.torsion.sort_unstable();
        inv
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub bidegree: Bidegree,
    pub safe: bool,
    pub invariants: Invariants,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: u32,
    pub space: Space,
    pub cells: Vec<CellResult>,
}

impl Page {
    pub fn cell(&self, i: u32, j: i64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.bidegree == Bidegree::new(i, j))
    }
}

/// Build the reported page from the two projections of different margins.
pub fn page_from(r: u32, space: Space, g: &Grading, small: &engine::Projected, large: &engine::Projected) -> Page {
    let cells = large
        .iter()
        .map(|(bd, cell)| {
            let safe = small.get(bd) == Some(cell);
            let (invariants, gens) = cell.invariants();
            let generators = gens
                .iter()
                .map(|(v, ord)| {
                    let rep = engine::format_terms(g, &cell.monos, v);
                    match ord {
                        None => rep,
                        Some(e) => alloc::format!("{} (order {})", rep, 1u64 << e),
                    }
                })
                .collect();
            CellResult { bidegree: *bd, safe, invariants, generators }
        })
        .collect();
    Page { r, space, cells }
}
