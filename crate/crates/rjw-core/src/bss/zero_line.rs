//! The filtration-zero line of E_∞ for CP^∞, presented over E_∞^{0,*}(pt)[[w]]
//! by the generators 1, v_n^{2p}(û+û*) and v_n^{2p+1}(û-û*), 0 ≤ p < 2^n.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::coeffring::lambda;
use crate::cpbasis::{CpContext, WSeries};
use crate::linalg::{self, Lattice, Vector};
use crate::numeric::TwoLocalNumber as Z2;
use crate::report::Report;

use super::cp::{series_terms, vector_on, w_box, CpPages};
use super::engine::{self, coef_monomial, vhat_exponents, Ambient, CellMono, Ext, Grading};
use super::pt;
use super::{Bidegree, BssError, Margin, PresentedModule, TruncationBox};

/// The basis of E_∞^{0,*}(pt) consists of c·v̂^a v_n^b with c the returned
/// scale: b must be even; c = 1 when 2^{n+1} | b or some v̂_l with
/// l < v_2(b) divides the monomial, and c = 2 otherwise.
pub fn einf_pt_scale(n: u32, a: &[i32], b: i64) -> Option<i64> {
    if b.rem_euclid(2) != 0 {
        return None;
    }
    if b.rem_euclid(1 << (n + 1)) == 0 {
        return Some(1);
    }
    let i = b.trailing_zeros() as usize;
    if (1..i).any(|l| a.get(l - 1).is_some_and(|&e| e > 0)) {
        Some(1)
    } else {
        Some(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    One,
    /// v_n^{2p}(û+û*)
    Plus(u32),
    /// v_n^{2p+1}(û-û*)
    Minus(u32),
}

impl Gen {
    pub fn all(n: u32) -> Vec<Gen> {
        let mut out = vec![Gen::One];
        out.extend((0..1u32 << n).map(Gen::Plus));
        out.extend((0..1u32 << n).map(Gen::Minus));
        out
    }

    pub fn degree(&self, n: u32) -> i64 {
        let vn = -2 * ((1i64 << n) - 1);
        let u = 1 - lambda(n);
        match *self {
            Gen::One => 0,
            Gen::Plus(p) => 2 * p as i64 * vn + u,
            Gen::Minus(p) => (2 * p as i64 + 1) * vn + u,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Gen::One => String::from("1"),
            Gen::Plus(p) => format!("vn^{}(uh+uh*)", 2 * p),
            Gen::Minus(p) => format!("vn^{}(uh-uh*)", 2 * p + 1),
        }
    }
}

/// A Z_(2)-basis element (scale · v̂^a v_n^b) w^l · gen of the free module F.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FKey {
    pub a: Vec<i32>,
    pub b: i64,
    pub l: u32,
    pub gen: Gen,
}

impl FKey {
    pub fn scale(&self, n: u32) -> i64 {
        einf_pt_scale(n, &self.a, self.b).expect("key off the basis")
    }

    pub fn name(&self, g: &Grading, n: u32) -> String {
        let m = CellMono::new(0, coef_monomial(&self.a, self.b as i32), self.l);
        let s = self.scale(n);
        let mono = g.name(&m);
        let coef = if s == 1 {
            mono
        } else {
            format!("{}*{}", s, mono)
        };
        format!("{} [{}]", coef, self.gen.name())
    }
}

/// The keys of F in bidegree (0, j) with v̂ exponents ≤ a_max and l < l_max.
pub fn f_keys(n: u32, j: i64, a_max: u32, l_max: u32) -> Vec<FKey> {
    let g = Grading::new(n, Ext::W);
    let vn = -2 * ((1i64 << n) - 1);
    let mut out = Vec::new();
    for a in vhat_exponents(n, a_max) {
        let base = g.bidegree(&CellMono::new(0, coef_monomial(&a, 0), 0)).j;
        for l in 0..l_max {
            for gen in Gen::all(n) {
                let rest = j - base - l as i64 * g.var_degree() - gen.degree(n);
                if rest % vn != 0 {
                    continue;
                }
                let b = rest / vn;
                if einf_pt_scale(n, &a, b).is_some() {
                    out.push(FKey {
                        a: a.clone(),
                        b,
                        l,
                        gen,
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// φ: F → E(n)^*[[û]] restricted to the w-model, on one key.
pub fn phi(n: u32, key: &FKey, xi: &WSeries) -> Vec<(CellMono, Z2)> {
    let s = Z2::from_i64(key.scale(n));
    let at = |b: i64| CellMono::new(0, coef_monomial(&key.a, b as i32), key.l);
    match key.gen {
        Gen::One => vec![(at(key.b), s)],
        Gen::Plus(p) => series_terms(&at(key.b + 2 * p as i64), xi.series(), &s),
        Gen::Minus(p) => vec![(at(key.b + 2 * p as i64).tagged(1), s)],
    }
}

fn key_vector(keys: &[FKey], terms: &[(FKey, Z2)]) -> Vector {
    let mut v = vec![Z2::zero(); keys.len()];
    for (k, c) in terms {
        if let Ok(p) = keys.binary_search(k) {
            v[p] = &v[p] + c;
        }
    }
    v
}

fn vhat_unit(n: u32, j: u32) -> Vec<i32> {
    let mut e = vec![0; n as usize - 1];
    if j >= 1 {
        e[j as usize - 1] = 1;
    }
    e
}

fn add(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Coordinate of c·v̂^a v_n^b on its basis key.
fn basis_coeff(n: u32, a: &[i32], b: i64, c: &Z2) -> Z2 {
    let s = einf_pt_scale(n, a, b).expect("product left E_∞(pt)");
    c.checked_div(&Z2::from_i64(s))
        .expect("coefficient not in E_∞(pt)")
}

/// ν·([v_n^0(û+û*)] - ξ(w)·[1]) for the basis element ν = (a, b) at w^l.
pub fn xi_relation(n: u32, a: &[i32], b: i64, l: u32, xi: &WSeries) -> Vec<(FKey, Z2)> {
    let s = Z2::from_i64(einf_pt_scale(n, a, b).unwrap());
    let mut out = vec![(
        FKey {
            a: a.to_vec(),
            b,
            l,
            gen: Gen::Plus(0),
        },
        Z2::one(),
    )];
    for (k, coeff) in xi.series().coeffs.iter().enumerate() {
        for (m, c) in coeff.terms() {
            let na = add(a, &m[..m.len() - 1]);
            let nb = b + m.vn_exp() as i64;
            let x = basis_coeff(n, &na, nb, &(&s * c));
            out.push((
                FKey {
                    a: na,
                    b: nb,
                    l: l + k as u32,
                    gen: Gen::One,
                },
                -x,
            ));
        }
    }
    out
}

/// ν·(v̂_j·[gen_p] - (v̂_j v_n^{2p})·[gen_0]) for 2p = 2^{i+1}m + 2^i, j < i.
pub fn migration_relation(
    n: u32,
    a: &[i32],
    b: i64,
    l: u32,
    j: u32,
    p: u32,
    minus: bool,
) -> Vec<(FKey, Z2)> {
    let s = einf_pt_scale(n, a, b).unwrap();
    let c = Z2::from_i64(if j == 0 { 2 * s } else { s });
    let na = add(a, &vhat_unit(n, j));
    let (gp, g0) = if minus {
        (Gen::Minus(p), Gen::Minus(0))
    } else {
        (Gen::Plus(p), Gen::Plus(0))
    };
    let nb = b + 2 * p as i64;
    vec![
        (
            FKey {
                a: na.clone(),
                b,
                l,
                gen: gp,
            },
            basis_coeff(n, &na, b, &c),
        ),
        (
            FKey {
                a: na.clone(),
                b: nb,
                l,
                gen: g0,
            },
            -basis_coeff(n, &na, nb, &c),
        ),
    ]
}

/// The displayed relations (migration and ξ) landing in the key list.
fn displayed_relations(n: u32, keys: &[FKey], xi: &WSeries) -> Vec<Vector> {
    let mut out = Vec::new();
    for k in keys {
        match k.gen {
            Gen::Plus(0) => out.push(key_vector(keys, &xi_relation(n, &k.a, k.b, k.l, xi))),
            Gen::Plus(p) | Gen::Minus(p) if p > 0 => {
                // k is the first term: a = a' + e_j, so peel off v̂_j
                let i = (2 * p).trailing_zeros();
                for j in 0..i {
                    let mut a = k.a.clone();
                    if j >= 1 {
                        if a[j as usize - 1] == 0 {
                            continue;
                        }
                        a[j as usize - 1] -= 1;
                    }
                    if einf_pt_scale(n, &a, k.b).is_none() {
                        continue;
                    }
                    let rel =
                        migration_relation(n, &a, k.b, k.l, j, p, matches!(k.gen, Gen::Minus(_)));
                    out.push(key_vector(keys, &rel));
                }
            }
            _ => {}
        }
    }
    out
}

/// Coefficient transfer: keys of the same family whose images are multiples
/// of the same monomial, ν·[gen_p] = (ν v_n^{2p-2q})·[gen_q].
fn transfer_relations(n: u32, keys: &[FKey]) -> Vec<Vector> {
    let mut groups: BTreeMap<(bool, Vec<i32>, i64, u32), Vec<(usize, i64)>> = BTreeMap::new();
    for (idx, k) in keys.iter().enumerate() {
        let (minus, p) = match k.gen {
            Gen::One => continue,
            Gen::Plus(p) => (false, p),
            Gen::Minus(p) => (true, p),
        };
        groups
            .entry((minus, k.a.clone(), k.b + 2 * p as i64, k.l))
            .or_default()
            .push((idx, k.scale(n)));
    }
    let mut out = Vec::new();
    for members in groups.values() {
        // all pairs, so the span is saturated
        for (x, &(i1, s1)) in members.iter().enumerate() {
            for &(i2, s2) in &members[x + 1..] {
                let g = s1.min(s2);
                let mut v = vec![Z2::zero(); keys.len()];
                v[i1] = Z2::from_i64(s2 / g);
                v[i2] = Z2::from_i64(-s1 / g);
                out.push(v);
            }
        }
    }
    out
}

/// Per cell: the kernel of φ and the relation lattices, projected to the
/// core keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCell {
    pub kernel: Lattice,
    pub relations: Lattice,
    pub displayed: Lattice,
}

pub fn kernel_cells(
    n: u32,
    core: &TruncationBox,
    full: &TruncationBox,
    cells: &[Bidegree],
    xi: &WSeries,
) -> BTreeMap<Bidegree, KernelCell> {
    let g = Grading::new(n, Ext::W);
    let amb = Ambient::build(g, *full, &[0, 1]);
    let mut out = BTreeMap::new();
    for bd in cells {
        let keys = f_keys(n, bd.j, full.a_max, full.prec);
        let core_idx: Vec<usize> = keys
            .iter()
            .enumerate()
            .filter(|(_, k)| k.l < core.prec && k.a.iter().all(|&x| x as u32 <= core.a_max))
            .map(|(i, _)| i)
            .collect();
        let cols: Vec<Vector> = keys.iter().map(|k| amb.vector(bd, phi(n, k, xi))).collect();
        let ker = linalg::kernel(&cols, amb.dim(bd));
        let dim = keys.len();
        let disp = displayed_relations(n, &keys, xi);
        let mut all = disp.clone();
        all.extend(transfer_relations(n, &keys));
        out.insert(
            *bd,
            KernelCell {
                kernel: Lattice::span(dim, ker).project(&core_idx),
                relations: Lattice::span(dim, all).project(&core_idx),
                displayed: Lattice::span(dim, disp).project(&core_idx),
            },
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCell {
    pub bidegree: Bidegree,
    pub safe: bool,
    pub generators: usize,
    pub kernel_rank: usize,
    /// log_2 of the index of the displayed relations in the kernel, if finite
    pub displayed_index: Option<u64>,
    pub einf_rank: usize,
    pub image_rank: usize,
}

pub struct ZeroLine {
    pub n: u32,
    pub core: TruncationBox,
    pub cells: Vec<ZeroCell>,
    pub module: PresentedModule,
    pub report: Report,
}

pub fn zero_line_margin(n: u32) -> Margin {
    Margin {
        a: 1,
        b: 0,
        e: 1 << n,
        s: 0,
    }
}

/// E_∞^{0,*}(CP^∞) = E_∞^{0,*}(pt)[[w]] + im(N^res) on the core cells, as
/// lattices on the w-model: lift, image of the norm, and their sum.
fn zero_line_lattices(
    n: u32,
    g: &Grading,
    core: &TruncationBox,
    bd: &Bidegree,
    monos: &[CellMono],
    xi: &WSeries,
) -> (Lattice, Lattice) {
    let dim = monos.len();
    let vn = g.ring().generator_degree(n as usize - 1);
    let mut lift = Vec::new();
    let mut image = Vec::new();
    for a in vhat_exponents(n, core.a_max) {
        let base = g.bidegree(&CellMono::new(0, coef_monomial(&a, 0), 0)).j;
        for l in 0..core.prec {
            let wl = l as i64 * g.var_degree();
            let solve = |extra: i64| {
                let rest = bd.j - base - wl - extra;
                (rest % vn == 0)
                    .then(|| rest / vn)
                    .filter(|b| b.rem_euclid(2) == 0)
            };
            let at = |b: i64| CellMono::new(0, coef_monomial(&a, b as i32), l);
            if let Some(b) = solve(0) {
                let s = einf_pt_scale(n, &a, b).unwrap();
                lift.push(vector_on(monos, [(at(b), Z2::from_i64(s))]));
            }
            if let Some(b) = solve(1 - lambda(n)) {
                image.push(vector_on(
                    monos,
                    series_terms(&at(b), xi.series(), &Z2::one()),
                ));
            }
            if let Some(b) = solve(g.tag_degree(1)) {
                image.push(vector_on(monos, [(at(b).tagged(1), Z2::one())]));
            }
        }
    }
    let image = Lattice::span(dim, image);
    (image.with(lift), image)
}

/// The presentation of E_∞^{0,*}(CP^∞) on a û box, checked against the
/// kernel of F → E_∞^{0,*}, with rank additivity against the quotient pages.
pub fn einf_zero_line(n: u32, core: &TruncationBox, pages: &CpPages) -> Result<ZeroLine, BssError> {
    let wcore = w_box(core).with_s_max(0);
    let g = Grading::new(n, Ext::W);
    let margin = zero_line_margin(n);
    let full_s = wcore.enlarge(&g, &margin).with_s_max(0);
    let full_l = wcore.enlarge(&g, &margin.doubled()).with_s_max(0);
    let ctx = CpContext::new(n, 2 * full_l.prec as usize)?;
    let xi = ctx.xi()?;
    let cells = engine::core_cells(&g, &wcore, &[0, 1]);
    let small = kernel_cells(n, &wcore, &full_s, &cells, &xi);
    let large = kernel_cells(n, &wcore, &full_l, &cells, &xi);
    let core_amb = Ambient::build(
        g,
        wcore
            .enlarge(
                &g,
                &Margin {
                    a: 0,
                    b: 0,
                    e: 0,
                    s: 0,
                },
            )
            .with_s_max(0),
        &[0, 1],
    );

    let mut report = Report::new("bss-zero-line");
    let mut out_cells = Vec::new();
    let mut generators = Vec::new();
    let mut relations: Vec<(usize, Vector)> = Vec::new();
    let mut fail = BTreeMap::<&str, String>::new();
    let note = |name: &'static str, ok: bool, w: String, fail: &mut BTreeMap<&str, String>| {
        if !ok {
            fail.entry(name).or_insert(w);
        }
    };
    let einf_pages = pages.tilde.last().expect("quotient pages");
    let rational = Z2::from_i64(1 << ((1 << (n + 1)) - 1));
    let mut counted = 0;
    for bd in &cells {
        let kc = &large[bd];
        let safe = small.get(bd) == Some(kc);
        let keys: Vec<FKey> = f_keys(n, bd.j, wcore.a_max, wcore.prec);
        let offset = generators.len();
        for k in &keys {
            generators.push((k.name(&g, n), *bd));
        }
        for v in &kc.relations.basis {
            relations.push((offset, v.clone()));
        }
        let monos: Vec<CellMono> = core_amb.cell(bd).map(|c| c.to_vec()).unwrap_or_default();
        let (einf, image) = zero_line_lattices(n, &g, &wcore, bd, &monos, &xi);
        let phi_span = Lattice::span(
            monos.len(),
            keys.iter()
                .map(|k| vector_on(&monos, phi(n, k, &xi)))
                .collect(),
        );
        let displayed_index = linalg::subquotient(&kc.kernel, &kc.displayed)
            .filter(|(inv, _)| inv.free == 0)
            .map(|(inv, _)| inv.torsion.iter().sum());
        let cell = ZeroCell {
            bidegree: *bd,
            safe,
            generators: keys.len(),
            kernel_rank: kc.kernel.rank(),
            displayed_index,
            einf_rank: einf.rank(),
            image_rank: image.rank(),
        };
        if safe {
            counted += 1;
            note(
                "kernel = K",
                kc.kernel == kc.relations,
                format!("{}", bd),
                &mut fail,
            );
            note(
                "K lies in the kernel",
                kc.kernel.contains_lattice(&kc.relations),
                format!("{}", bd),
                &mut fail,
            );
            note(
                "displayed relations span the kernel rationally",
                displayed_index.is_some(),
                format!("{}", bd),
                &mut fail,
            );
            note(
                "generators span E_infinity^0",
                phi_span == einf,
                format!("{}", bd),
                &mut fail,
            );
            let all_even = (0..monos.len()).filter(|&i| monos[i].vn().rem_euclid(2) == 0);
            let scaled = all_even.clone().all(|i| {
                let mut v = linalg::unit_vector(monos.len(), i);
                v[i] = rational.clone();
                einf.contains(&v)
            });
            note(
                "rational control 2^(2^(n+1)-1) E_2^0 in E_infinity^0",
                scaled,
                format!("{}", bd),
                &mut fail,
            );
            if let Some(tc) = einf_pages.cell(bd.i, bd.j).filter(|c| c.safe) {
                note(
                    "rank additivity",
                    einf.rank() == image.rank() + tc.invariants.free,
                    format!(
                        "{}: {} != {} + {}",
                        bd,
                        einf.rank(),
                        image.rank(),
                        tc.invariants.free
                    ),
                    &mut fail,
                );
            }
        }
        out_cells.push(cell);
    }
    let witness = format!("{} safe cells", counted);
    for name in [
        "kernel = K",
        "K lies in the kernel",
        "displayed relations span the kernel rationally",
        "generators span E_infinity^0",
        "rational control 2^(2^(n+1)-1) E_2^0 in E_infinity^0",
        "rank additivity",
    ] {
        match fail.get(name) {
            None => report.push(name, counted > 0, Some(witness.clone())),
            Some(w) => report.fail(name, w.clone()),
        }
    }
    let index = out_cells
        .iter()
        .filter(|c| c.safe)
        .filter_map(|c| c.displayed_index)
        .max()
        .unwrap_or(0);
    report.push(
        "index of the displayed relations in the kernel",
        true,
        Some(format!(
            "at most 2^{}; the rest comes from coefficient transfer",
            index
        )),
    );

    // E_∞^{0,*}(pt) against the computed point pages
    let ptbox = TruncationBox { prec: 1, ..wcore };
    let run = pt::pt_pages(n, &ptbox.with_s_max((1 << (n + 1)) - 1))?;
    let last = run.projected.last().unwrap();
    let mut first = None;
    for cell in run
        .pages
        .last()
        .unwrap()
        .cells
        .iter()
        .filter(|c| c.safe && c.bidegree.i == 0)
    {
        let pc = &last[&cell.bidegree];
        let gens = pc
            .monos
            .iter()
            .enumerate()
            .filter_map(|(i, m)| {
                einf_pt_scale(n, m.vhat_exps(), m.vn() as i64).map(|s| {
                    let mut v = linalg::unit_vector(pc.monos.len(), i);
                    v[i] = Z2::from_i64(s);
                    v
                })
            })
            .collect();
        if Lattice::span(pc.monos.len(), gens) != pc.z && first.is_none() {
            first = Some(format!("{}", cell.bidegree));
        }
    }
    match first {
        None => report.pass("E_infinity^0(pt) basis"),
        Some(w) => report.fail("E_infinity^0(pt) basis", w),
    }

    let relations = relations
        .into_iter()
        .map(|(off, v)| {
            let mut full = vec![Z2::zero(); generators.len()];
            full[off..off + v.len()].clone_from_slice(&v);
            full
        })
        .collect();
    Ok(ZeroLine {
        n,
        core: wcore,
        cells: out_cells,
        module: PresentedModule {
            generators,
            relations,
        },
        report,
    })
}

/// The displayed relation v_n^0(û+û*) = ξ(w)·1 at ν = 1, l = 0.
pub fn xi_relation_at_unit(n: u32, xi: &WSeries) -> Vec<(FKey, Z2)> {
    xi_relation(n, &vec![0; n as usize - 1], 0, 0, xi)
}
