//! CP^∞: brute-force E_2 from the master formula for d_1, and the later pages
//! through the tensor model E_r(pt) ⊗ M with M = Ê(n)^*[[w]]/(ξ).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::coeffring::{lambda, Monomial};
use crate::cpbasis::{CpContext, WSeries};
use crate::fgl::ZSeries;
use crate::linalg::{Lattice, Vector};
use crate::numeric::TwoLocalNumber as Z2;
use crate::report::Report;

use super::engine::{self, coef_monomial, vhat_exponents, Ambient, CellMono, Ext, Grading, Lattices, Projected, ProjectedCell};
use super::pt::{self, HigherDifferential};
use super::{page_from, Bidegree, BssError, Margin, Page, Space, TruncationBox};

pub fn vn_power(n: u32, b: i64) -> Monomial {
    let mut e = vec![0i32; n as usize];
    e[n as usize - 1] = b as i32;
    Monomial::new(&e)
}

/// base · f, with the series variable added to the `e` slot.
pub fn series_terms(base: &CellMono, f: &ZSeries, c: &Z2) -> Vec<(CellMono, Z2)> {
    let mut out = Vec::new();
    for (k, coeff) in f.coeffs.iter().enumerate() {
        for (m, x) in coeff.terms() {
            out.push((CellMono { e: base.e + k as u32, ..base.times(m) }, x * c));
        }
    }
    out
}

/// Vector over an explicit sorted list of monomials; others are dropped.
pub fn vector_on(monos: &[CellMono], terms: impl IntoIterator<Item = (CellMono, Z2)>) -> Vector {
    let mut v = vec![Z2::zero(); monos.len()];
    for (m, c) in terms {
        if let Ok(p) = monos.binary_search(&m) {
            v[p] = &v[p] + &c;
        }
    }
    v
}

pub fn default_margin(n: u32) -> Margin {
    Margin { a: 1, b: 1 << (n + 1), e: 1 << n, s: 1 }
}

/// The d_1 of the CP^∞ spectral sequence on û-monomials:
/// d_1(z) = v_n^{1-2^n}(1 - c)(z) x, with c(û) = û*.
pub struct CpDifferential {
    n: u32,
    ustar_pows: Vec<ZSeries>,
    shift: Monomial,
}

impl CpDifferential {
    pub fn new(ctx: &CpContext) -> Self {
        let mut pows = vec![ZSeries::constant(ctx.ustar.var, ctx.u_prec, crate::coeffring::Elem::one(ctx.ring()))];
        for e in 1..ctx.u_prec {
            let next = pows[e - 1].mul(&ctx.ustar);
            pows.push(next);
        }
        CpDifferential { n: ctx.n, ustar_pows: pows, shift: vn_power(ctx.n, 1 - (1i64 << ctx.n)) }
    }

    pub fn image(&self, m: &CellMono) -> Vec<(CellMono, Z2)> {
        let mut out = vec![(m.times(&self.shift).shift(1, 0), Z2::one())];
        let Some(p) = self.ustar_pows.get(m.e as usize) else { return out };
        let sign = Z2::from_i64(if m.vn().rem_euclid(2) == 1 { 1 } else { -1 });
        let base = CellMono { s: m.s + 1, e: 0, tag: 0, coef: m.coef.mul(&self.shift) };
        out.extend(series_terms(&base, p, &sign));
        out
    }

    pub fn height(&self) -> u32 {
        self.n
    }
}

fn solve_exponent(g: &Grading, bd: &Bidegree, a: &[i32], extra: i64) -> Option<i64> {
    let base = g.bidegree(&CellMono::new(bd.i, coef_monomial(a, 0), 0)).j + extra;
    let vn_deg = g.ring().generator_degree(g.n as usize - 1);
    let rest = bd.j - base;
    (rest % vn_deg == 0).then(|| rest / vn_deg)
}

/// Closed-form cycles and boundaries of E_2 in one cell, as vectors on the
/// cell's core monomials: cycles S[[w]]{1, v_n(û-û*)}; boundaries spanned by
/// 2w^l, (û+û*)w^l (even v_n powers) and (û-û*)w^l (odd) on x^s, s > 0.
pub fn e2_closed_form(ctx: &CpContext, g: &Grading, core: &TruncationBox, bd: &Bidegree, monos: &[CellMono]) -> (Lattice, Lattice) {
    let n = g.n;
    let xl = 1 - lambda(n);
    let dim = monos.len();
    let one = Z2::one();
    let mut zg = Vec::new();
    let mut bg = Vec::new();
    for a in vhat_exponents(n, core.a_max) {
        for l in 0..(core.prec as usize).div_ceil(2) {
            let wl = &ctx.w_pows[l];
            let wdeg = 2 * xl * l as i64;
            if let Some(b) = solve_exponent(g, bd, &a, wdeg) {
                let base = CellMono::new(bd.i, coef_monomial(&a, b as i32), 0);
                if b.rem_euclid(2) == 0 {
                    zg.push(vector_on(monos, series_terms(&base, wl, &one)));
                    if bd.i > 0 {
                        bg.push(vector_on(monos, series_terms(&base, wl, &Z2::from_i64(2))));
                    }
                }
            }
            if let Some(b) = solve_exponent(g, bd, &a, wdeg + xl) {
                let base = CellMono::new(bd.i, coef_monomial(&a, b as i32), 0);
                let minus = ctx.u_minus.mul(wl);
                if b.rem_euclid(2) == 1 {
                    zg.push(vector_on(monos, series_terms(&base, &minus, &one)));
                    if bd.i > 0 {
                        bg.push(vector_on(monos, series_terms(&base, &minus, &one)));
                    }
                } else if bd.i > 0 {
                    bg.push(vector_on(monos, series_terms(&base, &ctx.u_plus.mul(wl), &one)));
                }
            }
        }
    }
    (Lattice::span(dim, zg), Lattice::span(dim, bg))
}

pub struct CpE2 {
    pub n: u32,
    pub core: TruncationBox,
    pub page: Page,
    pub projected: Projected,
    pub report: Report,
    pub ctx: CpContext,
}

fn e2_once(ctx: &CpContext, core: &TruncationBox, margin: &Margin) -> Result<(Projected, Ambient, Lattices), BssError> {
    let g = Grading::new(ctx.n, Ext::UHat);
    let full = core.enlarge(&g, margin);
    let amb = Ambient::build(g, full, &[0]);
    let d = CpDifferential::new(ctx);
    let f = |m: &CellMono| d.image(m);
    let (e2, _) = engine::next_page(&amb, &Lattices::e1(&amb), 1, &f);
    let cells = engine::core_cells(&g, core, &[0]);
    let proj = engine::project(&amb, &e2, core, &cells)?;
    Ok((proj, amb, e2))
}

/// Brute-force E_2 for CP^∞ on a box, compared with the closed form.
pub fn cp_e2(n: u32, core: &TruncationBox) -> Result<CpE2, BssError> {
    cp_e2_with(n, core, &default_margin(n))
}

pub fn cp_e2_with(n: u32, core: &TruncationBox, margin: &Margin) -> Result<CpE2, BssError> {
    let g = Grading::new(n, Ext::UHat);
    let big = margin.doubled();
    let ctx = CpContext::new(n, (core.prec + big.e) as usize)?;
    let (small, _, _) = e2_once(&ctx, core, margin)?;
    let (large, amb, _) = e2_once(&ctx, core, &big)?;
    let page = page_from(2, Space::CpInf, &g, &small, &large);
    let mut report = Report::new("bss-cp-e2");

    let d = CpDifferential::new(&ctx);
    let f = |m: &CellMono| d.image(m);
    match engine::square_zero(&amb, &f, 1) {
        None => report.pass("d1 o d1 = 0"),
        Some(bd) => report.fail("d1 o d1 = 0", format!("at {}", bd)),
    }

    let mut zfail = None;
    let mut bfail = None;
    let mut ifail = None;
    let mut safe = 0;
    for cell in page.cells.iter().filter(|c| c.safe) {
        safe += 1;
        let pc = &large[&cell.bidegree];
        let (zc, bc) = e2_closed_form(&ctx, &g, core, &cell.bidegree, &pc.monos);
        if zc != pc.z && zfail.is_none() {
            zfail = Some(format!("{}", cell.bidegree));
        }
        if bc != pc.b && bfail.is_none() {
            bfail = Some(format!("{}", cell.bidegree));
        }
        let closed = ProjectedCell { monos: pc.monos.clone(), z: zc, b: bc };
        if closed.invariants().0 != cell.invariants && ifail.is_none() {
            ifail = Some(format!("{}: {:?} vs {:?}", cell.bidegree, cell.invariants.factors(), closed.invariants().0.factors()));
        }
    }
    let witness = Some(format!("{} safe cells", safe));
    for (name, fail) in [
        ("E2 cycles = S[[w]]{1, vn(uh-uh*)}", zfail),
        ("E2 boundaries = span{2w^l, (uh+uh*)w^l, (uh-uh*)w^l} x", bfail),
        ("E2 invariants match closed form", ifail),
    ] {
        match fail {
            None => report.push(name, safe > 0, witness.clone()),
            Some(w) => report.fail(name, w),
        }
    }

    // d_1(v_n^{2p+1} w^l) from the master formula
    let p = 0i64;
    let l = 1usize;
    let base = CellMono::new(0, vn_power(n, 2 * p + 1), 0);
    let mut got: BTreeMap<CellMono, Z2> = BTreeMap::new();
    for (m, c) in series_terms(&base, &ctx.w_pows[l], &Z2::one()) {
        for (t, k) in d.image(&m) {
            let e = got.entry(t).or_insert_with(Z2::zero);
            *e = &*e + &(&c * &k);
        }
    }
    got.retain(|_, c| !c.is_zero());
    let want_base = CellMono::new(1, vn_power(n, 2 * p + 2 - (1 << n)), 0);
    let mut want: BTreeMap<CellMono, Z2> = BTreeMap::new();
    for (m, c) in series_terms(&want_base, &ctx.w_pows[l], &Z2::from_i64(2)) {
        let e = want.entry(m).or_insert_with(Z2::zero);
        *e = &*e + &c;
    }
    want.retain(|_, c| !c.is_zero());
    let trunc = |m: &BTreeMap<CellMono, Z2>| -> BTreeMap<CellMono, Z2> {
        m.iter().filter(|(k, _)| (k.e as usize) < ctx.u_prec).map(|(k, v)| (*k, v.clone())).collect()
    };
    report.push(
        "d1(vn^(2p+1) w^l) = 2 vn^(2p+2-2^n) w^l x",
        trunc(&got) == trunc(&want),
        Some(format!("exponent 2p+2-2^n = {}; a display with 2p-2^n differs by the unit vn^2", 2 * p + 2 - (1 << n))),
    );

    Ok(CpE2 { n, core: *core, page, projected: large, report, ctx })
}

/// The box for the w-model derived from a û box: w-precision ⌈N/2⌉.
pub fn w_box(core: &TruncationBox) -> TruncationBox {
    TruncationBox { prec: core.prec.div_ceil(2), ..*core }
}

/// Tensor-model lattices on the w-ambient, with the pt pages they came from.
pub struct TensorRun {
    pub amb: Ambient,
    pub pt_amb: Ambient,
    pub pt: Vec<Lattices>,
    pub xi: WSeries,
    /// computed pages E_2 .. E_{2^{n+1}}
    pub computed: Vec<Lattices>,
}

impl TensorRun {
    /// Z_r(pt)[[w]] or B_r(pt)[[w]] in cell `bd`.
    pub fn lift(&self, r: u32, boundaries: bool, bd: &Bidegree) -> Lattice {
        let dim = self.amb.dim(bd);
        let wdeg = self.amb.grading.var_degree();
        let page = &self.pt[r as usize - 1];
        let mut gens = Vec::new();
        for l in 0..self.amb.bx.prec {
            let pbd = Bidegree { i: bd.i, j: bd.j - l as i64 * wdeg };
            let Some(cell) = self.pt_amb.cell(&pbd) else { continue };
            let lat = if boundaries { &page.b[&pbd] } else { &page.z[&pbd] };
            for v in &lat.basis {
                gens.push(self.amb.vector(bd, cell.iter().zip(v).map(|(m, c)| (m.shift(0, l), c.clone()))));
            }
        }
        Lattice::span(dim, gens)
    }

    /// ξ · (Z_r(pt)[[w]] in the cell one ξ-degree lower).
    pub fn xi_multiples(&self, r: u32, bd: &Bidegree) -> Vec<Vector> {
        let src = Bidegree { i: bd.i, j: bd.j - (1 - lambda(self.amb.grading.n)) };
        if self.amb.cell(&src).is_none() {
            return Vec::new();
        }
        let z = self.lift(r, false, &src);
        let cell = self.amb.cell(&src).unwrap();
        z.basis
            .iter()
            .map(|v| {
                let terms = cell
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .flat_map(|(m, c)| series_terms(m, self.xi.series(), c))
                    .collect::<Vec<_>>();
                self.amb.vector(bd, terms)
            })
            .collect()
    }

    /// E_r(pt) ⊗ M as lattices.
    pub fn tensor_closed(&self, r: u32) -> Lattices {
        let cells: Vec<Bidegree> = self.amb.cells().map(|(bd, _)| *bd).collect();
        self.tensor_closed_on(r, &cells)
    }

    pub fn tensor_closed_on(&self, r: u32, cells: &[Bidegree]) -> Lattices {
        let mut z = BTreeMap::new();
        let mut b = BTreeMap::new();
        for bd in cells {
            z.insert(*bd, self.lift(r, false, bd));
            b.insert(*bd, self.lift(r, true, bd).with(self.xi_multiples(r, bd)));
        }
        Lattices { z, b }
    }
}

pub fn tensor_run(n: u32, full: &TruncationBox, xi: &WSeries) -> TensorRun {
    let g = Grading::new(n, Ext::W);
    let amb = Ambient::build(g, *full, &[0]);
    let pt_amb = Ambient::build(Grading::new(n, Ext::None), TruncationBox { prec: 1, ..*full }, &[0]);
    let (pt_pages, _) = pt::lattices(n, &pt_amb);
    let mut run = TensorRun { amb, pt_amb, pt: pt_pages, xi: xi.clone(), computed: Vec::new() };
    let mut state = run.tensor_closed(2);
    let mut computed = vec![state.clone()];
    for r in 2..pt::last_page(n) {
        if let Some(k) = pt::family_of_page(r) {
            let d = HigherDifferential { n, k };
            let f = d.as_fn();
            state = engine::next_page(&run.amb, &state, r, &f).0;
        }
        computed.push(state.clone());
    }
    run.computed = computed;
    run
}

pub fn tensor_margin(n: u32) -> Margin {
    Margin { a: n, b: (1 << (2 * n)) + (1 << (n + 1)), e: 2, s: (1 << (n + 1)) - 1 }
}

pub struct CpPages {
    pub n: u32,
    pub core: TruncationBox,
    /// E_r(pt) ⊗ M computed by running the differentials, r = 2 .. 2^{n+1}
    pub tilde: Vec<Page>,
    pub tilde_projected: Vec<Projected>,
    pub report: Report,
}

fn project_all(run: &TensorRun, core: &TruncationBox, cells: &[Bidegree]) -> Result<(Vec<Projected>, Vec<Projected>), BssError> {
    let mut comp = Vec::new();
    let mut closed: Vec<Projected> = Vec::new();
    for (idx, lat) in run.computed.iter().enumerate() {
        let r = idx as u32 + 2;
        comp.push(engine::project(&run.amb, lat, core, cells)?);
        // the pt pages only change at powers of two
        if r.is_power_of_two() {
            closed.push(engine::project(&run.amb, &run.tensor_closed_on(r, cells), core, cells)?);
        } else {
            closed.push(closed.last().unwrap().clone());
        }
    }
    Ok((comp, closed))
}

/// Pages r ≥ 2 of the quotient spectral sequence, checked against
/// E_r(pt) ⊗ M page by page. `core` is a û box; the w-precision is half.
pub fn cp_pages(n: u32, core: &TruncationBox) -> Result<CpPages, BssError> {
    cp_pages_with(n, core, &tensor_margin(n))
}

pub fn cp_pages_with(n: u32, core: &TruncationBox, margin: &Margin) -> Result<CpPages, BssError> {
    let wcore = w_box(core);
    let g = Grading::new(n, Ext::W);
    let big = margin.doubled();
    let full_small = wcore.enlarge(&g, margin);
    let full_large = wcore.enlarge(&g, &big);
    let ctx = CpContext::new(n, 2 * full_large.prec as usize)?;
    let xi = ctx.xi()?;
    let cells = engine::core_cells(&g, &wcore, &[0]);
    let small = tensor_run(n, &full_small, &xi);
    let large = tensor_run(n, &full_large, &xi);
    let (cs, _) = project_all(&small, &wcore, &cells)?;
    let (cl, closed) = project_all(&large, &wcore, &cells)?;
    let mut report = Report::new("bss-cp-pages");
    let mut tilde = Vec::new();
    for (idx, (s, l)) in cs.iter().zip(&cl).enumerate() {
        let r = idx as u32 + 2;
        let page = page_from(r, Space::CpInf, &g, s, l);
        let mut first = None;
        let mut safe = 0;
        for cell in page.cells.iter().filter(|c| c.safe) {
            safe += 1;
            let want = closed[idx][&cell.bidegree].invariants().0;
            if want != cell.invariants && first.is_none() {
                first = Some(format!("{}: {:?} vs {:?}", cell.bidegree, cell.invariants.factors(), want.factors()));
            }
        }
        let name = format!("E_{} of the quotient = E_{}(pt) (x) M", r, r);
        match first {
            None => report.push(name, safe > 0, Some(format!("{} safe cells", safe))),
            Some(w) => report.fail(name, w),
        }
        tilde.push(page);
    }
    Ok(CpPages { n, core: *core, tilde, tilde_projected: cl, report })
}
