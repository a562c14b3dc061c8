//! The spectral sequence for the point: injected differentials, page
//! iteration and the closed forms for each page.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeffring::{vhat_n_exponent, Monomial};
use crate::linalg::Invariants;
use crate::numeric::TwoLocalNumber as Z2;
use crate::report::Report;

use super::engine::{self, Ambient, CellMono, Ext, Grading, Lattices, Projected};
use super::{page_from, Bidegree, BssError, Margin, Page, Space, TruncationBox};

/// Page on which the k-th family of differentials acts.
pub fn differential_page(k: u32) -> u32 {
    (1 << (k + 1)) - 1
}

/// The family index k with r = 2^{k+1} - 1, if r carries a differential.
pub fn family_of_page(r: u32) -> Option<u32> {
    let k = (r + 1).trailing_zeros();
    ((r + 1).is_power_of_two() && k >= 1).then(|| k - 1)
}

/// d_r for r = 2^{k+1} - 1, generated by
/// d_r(v_n^{-2^k}) = v̂_k v_n^{-2^{n+k}} x^r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HigherDifferential {
    pub n: u32,
    pub k: u32,
}

impl HigherDifferential {
    pub fn new(n: u32, k: u32) -> Result<Self, BssError> {
        if k > n {
            return Err(BssError::InvalidBox(format!("k = {} exceeds n = {}", k, n)));
        }
        Ok(HigherDifferential { n, k })
    }

    pub fn page(&self) -> u32 {
        differential_page(self.k)
    }

    /// v̂_k v_n^{2^k - 2^{n+k}}, the factor by which the coefficient moves.
    fn shift(&self) -> Monomial {
        let n = self.n as usize;
        let mut e = vec![0i32; n];
        let k = self.k as usize;
        let mut b = (1i64 << k) - (1i64 << (n + k));
        if k >= 1 && k < n {
            e[k - 1] = 1;
        } else if k == n {
            b += vhat_n_exponent(self.n);
        }
        e[n - 1] = b as i32;
        Monomial::new(&e)
    }

    /// Image of a monomial on page r. For k = 0 this is the master formula
    /// v_n^{1-2^n}(1 - c)(z)x; for k ≥ 1 the power rule applied to
    /// v_n^{-2^k}. Monomials with v_n exponent not divisible by 2^k map to 0.
    pub fn image(&self, m: &CellMono) -> Option<(CellMono, Z2)> {
        let b = m.vn() as i64;
        let r = self.page();
        if self.k == 0 {
            if b.rem_euclid(2) == 0 {
                return None;
            }
            let mut e = vec![0i32; self.n as usize];
            e[self.n as usize - 1] = 1 - (1 << self.n);
            return Some((m.times(&Monomial::new(&e)).shift(1, 0), Z2::from_i64(2)));
        }
        let p = 1i64 << self.k;
        if b % p != 0 || b == 0 {
            return None;
        }
        Some((m.times(&self.shift()).shift(r, 0), Z2::from_i64(-b / p)))
    }

    /// Like `image` but refuses classes that cannot be on page r: for k ≥ 1
    /// every surviving v_n power is even.
    pub fn evaluate(&self, m: &CellMono) -> Result<Option<(CellMono, Z2)>, BssError> {
        if self.k >= 1 && m.vn().rem_euclid(2) == 1 {
            return Err(BssError::NotASurvivor(self.page()));
        }
        Ok(self.image(m))
    }

    pub fn as_fn(&self) -> impl Fn(&CellMono) -> Vec<(CellMono, Z2)> + '_ {
        move |m| self.image(m).into_iter().collect()
    }
}

/// Whether v̂_l has exponent zero for every 1 ≤ l < j.
fn free_below(a: &[i32], j: u32) -> bool {
    (1..j as usize).all(|l| a.get(l - 1).is_none_or(|&e| e == 0))
}

/// R_n/I_j at a single monomial.
fn quotient_by_ideal(n: u32, a: &[i32], j: u32) -> Invariants {
    if j == 0 {
        Invariants { free: 1, torsion: vec![] }
    } else if j <= n && free_below(a, j) {
        Invariants { free: 0, torsion: vec![1] }
    } else {
        Invariants::default()
    }
}

/// The summand of E_r^{s,*} at the monomial x^s v̂^a v_n^b predicted by the
/// closed forms of the pages.
pub fn closed_form(n: u32, r: u32, m: &CellMono) -> Invariants {
    let a = m.vhat_exps();
    let b = m.vn() as i64;
    let s = m.s;
    if r == 1 {
        return Invariants { free: 1, torsion: vec![] };
    }
    let k = 31 - r.leading_zeros();
    let pk = 1i64 << k;
    if s + 1 >= 1 << k {
        return if b % pk == 0 { quotient_by_ideal(n, a, k) } else { Invariants::default() };
    }
    let j = 31 - (s + 1).leading_zeros();
    if b % pk == 0 {
        return quotient_by_ideal(n, a, j);
    }
    let i = b.trailing_zeros();
    if !(j < i && i < k) {
        return Invariants::default();
    }
    if j == 0 {
        return Invariants { free: 1, torsion: vec![] };
    }
    if free_below(a, j) && (j..i).any(|l| l >= 1 && a.get(l as usize - 1).is_some_and(|&e| e > 0)) {
        Invariants { free: 0, torsion: vec![1] }
    } else {
        Invariants::default()
    }
}

pub fn default_margin(n: u32) -> Margin {
    Margin { a: n, b: 2 * ((1 << (2 * n)) + (1 << (n + 1))), e: 0, s: (1 << (n + 1)) - 1 }
}

pub fn last_page(n: u32) -> u32 {
    1 << (n + 1)
}

/// Cycle and boundary lattices of E_1 .. E_{2^{n+1}} on one ambient.
pub fn lattices(n: u32, amb: &Ambient) -> (Vec<Lattices>, Vec<(u32, Bidegree)>) {
    let mut pages = vec![Lattices::e1(amb)];
    let mut bad = Vec::new();
    for r in 1..last_page(n) {
        let cur = pages.last().unwrap();
        let next = match family_of_page(r).or(if r == 1 { Some(0) } else { None }) {
            Some(k) => {
                let d = HigherDifferential { n, k };
                let f = d.as_fn();
                let (nx, b) = engine::next_page(amb, cur, r, &f);
                bad.extend(b.into_iter().map(|bd| (r, bd)));
                nx
            }
            None => cur.clone(),
        };
        pages.push(next);
    }
    (pages, bad)
}

pub struct PtRun {
    pub n: u32,
    pub core: TruncationBox,
    pub pages: Vec<Page>,
    pub projected: Vec<Projected>,
    pub report: Report,
}

fn run_once(n: u32, core: &TruncationBox, margin: &Margin) -> Result<(Vec<Projected>, Vec<(u32, Bidegree)>, Ambient), BssError> {
    let g = Grading::new(n, Ext::None);
    let full = core.enlarge(&g, margin);
    let amb = Ambient::build(g, full, &[0]);
    let (pages, bad) = lattices(n, &amb);
    let cells = engine::core_cells(&g, core, &[0]);
    let projected = pages.iter().map(|p| engine::project(&amb, p, core, &cells)).collect::<Result<_, _>>()?;
    Ok((projected, bad, amb))
}

/// E_1 .. E_{2^{n+1}} for the point, checked against the closed forms.
pub fn pt_pages(n: u32, core: &TruncationBox) -> Result<PtRun, BssError> {
    pt_pages_with(n, core, &default_margin(n))
}

pub fn pt_pages_with(n: u32, core: &TruncationBox, margin: &Margin) -> Result<PtRun, BssError> {
    let g = Grading::new(n, Ext::None);
    let (small, _, _) = run_once(n, core, margin)?;
    let (large, bad, amb) = run_once(n, core, &margin.doubled())?;
    let mut report = Report::new("bss-pt");
    let pages: Vec<Page> = small
        .iter()
        .zip(&large)
        .enumerate()
        .map(|(idx, (s, l))| page_from(idx as u32 + 1, Space::Pt, &g, s, l))
        .collect();

    let d1 = HigherDifferential { n, k: 0 };
    let f = d1.as_fn();
    match engine::square_zero(&amb, &f, 1) {
        None => report.pass("d1 o d1 = 0"),
        Some(bd) => report.fail("d1 o d1 = 0", format!("at {}", bd)),
    }

    let core_bad: Vec<_> = bad.iter().filter(|(_, bd)| large[0].contains_key(bd)).collect();
    match core_bad.first() {
        None => report.pass("differentials well defined on pages"),
        Some((r, bd)) => report.fail("differentials well defined on pages", format!("d_{} at {}", r, bd)),
    }

    for page in &pages {
        let mut first = None;
        let mut safe = 0;
        for cell in page.cells.iter().filter(|c| c.safe) {
            safe += 1;
            let mut expected = Invariants::default();
            for m in &large[0][&cell.bidegree].monos {
                expected.merge(&closed_form(n, page.r, m));
            }
            if expected != cell.invariants && first.is_none() {
                first = Some(format!(
                    "{}: computed {:?}, expected {:?}",
                    cell.bidegree,
                    cell.invariants.factors(),
                    expected.factors()
                ));
            }
        }
        let name = format!("E_{} closed form", page.r);
        match first {
            None => report.push(name, safe > 0, Some(format!("{} safe cells", safe))),
            Some(w) => report.fail(name, w),
        }
    }

    // pages are constant on [2^k, 2^{k+1} - 1]
    let mut stable = None;
    for r in 2..=last_page(n) {
        let k = 31 - r.leading_zeros();
        if r != 1 << k && large[r as usize - 1] != large[(1usize << k) - 1] && stable.is_none() {
            stable = Some(format!("E_{} differs from E_{}", r, 1 << k));
        }
    }
    match stable {
        None => report.pass("stabilization ranges"),
        Some(w) => report.fail("stabilization ranges", w),
    }

    let einf = pages.last().unwrap();
    let top = (1u32 << (n + 1)) - 1;
    match einf.cells.iter().find(|c| c.safe && c.bidegree.i >= top && !c.invariants.is_zero()) {
        None => report.pass("E_infinity vanishes in filtration >= 2^(n+1) - 1"),
        Some(c) => report.fail("E_infinity vanishes in filtration >= 2^(n+1) - 1", format!("{}", c.bidegree)),
    }

    let period = (1i64 << (n + 2)) * ((1i64 << n) - 1);
    let mut per = None;
    for c in einf.cells.iter().filter(|c| c.safe) {
        if let Some(d) = einf.cell(c.bidegree.i, c.bidegree.j + period) {
            if d.safe && d.invariants != c.invariants && per.is_none() {
                per = Some(format!("{} vs {}", c.bidegree, d.bidegree));
            }
        }
    }
    match per {
        None => report.pass(format!("periodicity {}", period)),
        Some(w) => report.fail(format!("periodicity {}", period), w),
    }

    Ok(PtRun { n, core: *core, pages, projected: large, report })
}

/// The generating differential of family k as (source, target, coefficient).
pub fn generator(n: u32, k: u32) -> (CellMono, CellMono, Z2) {
    let mut e = vec![0i32; n as usize];
    e[n as usize - 1] = -(1 << k);
    let src = CellMono::new(0, Monomial::new(&e), 0);
    let (t, c) = HigherDifferential { n, k }.image(&src).expect("generator is not a cycle");
    (src, t, c)
}

pub fn describe_generator(n: u32, k: u32) -> String {
    let g = Grading::new(n, Ext::None);
    let (s, t, c) = generator(n, k);
    format!("d_{}({}) = {}*{}", differential_page(k), g.name(&s), c, g.name(&t))
}
