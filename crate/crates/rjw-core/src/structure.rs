//! What follows from E_∞: regularity of (v̂_0, .., v̂_n) on
//! M = Ê(n)^*[[w]]/(ξ), Weierstrass division after completing at I, the
//! degree argument for N(û) = ξ(p̂_1), the multiplicative relations checked
//! on restriction to E(n)^*(CP^∞), and the final presentation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::One;

use crate::bss::cp::{series_terms, vector_on, vn_power, CpDifferential};
use crate::bss::engine::Ambient;
use crate::bss::{Bidegree, CellMono, Ext, Grading, TruncationBox};
use crate::coeffring::{i_order, lambda, reduce_mod_ik, Elem, IdealIk, Monomial};
use crate::cpbasis::{CpContext, CpError};
use crate::fgl::{vhat, ZSeries};
use crate::linalg::Lattice;
use crate::numeric::TwoLocalNumber as Z2;
use crate::report::Report;
use crate::series::{reversion, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("leading term of xi is not a unit mod I: {0}")]
    LeadingTermNotUnit(String),
    #[error("division did not terminate after {0} steps")]
    NoConvergence(usize),
    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),
    #[error(transparent)]
    Cp(#[from] CpError),
}

/// ξ as a w-series at w-precision `w_prec`.
pub fn xi_series(n: u32, w_prec: usize) -> Result<ZSeries, StructureError> {
    Ok(crate::cpbasis::xi_series(n, w_prec)?.into_series().truncate(w_prec))
}

/// A unit of Ê(n)^*: one term, odd coefficient, only v_n.
fn is_unit(c: &Elem) -> bool {
    if c.len() != 1 {
        return false;
    }
    let (m, s) = c.terms().next().unwrap();
    m[..m.len() - 1].iter().all(|&e| e == 0) && s.valuation2() == Some(0)
}

fn reduce_series(s: &ZSeries, k: u32) -> ZSeries {
    s.map_coeffs(|c| reduce_mod_ik(c, IdealIk { k }))
}

// ---------------------------------------------------------------- regularity

/// Outcome of the injectivity test for v̂_k on M/I_kM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    /// ξ(0) is a unit mod I_k, so M/I_kM = 0.
    ZeroModule,
    /// v̂_k is a unit.
    Unit,
    /// ξ ≡ 0 mod I_k: M/I_kM is a power series ring over a domain.
    Free,
    /// ξ is nonzero mod I_{k+1}, leading term recorded.
    Injective { leading: String },
    /// ξ ≡ v̂_k f mod I_k, so f is a nonzero kernel element.
    Fails { witness: String },
}

impl Regularity {
    pub fn passed(&self) -> bool {
        !matches!(self, Regularity::Fails { .. })
    }
    pub fn describe(&self) -> String {
        match self {
            Regularity::ZeroModule => String::from("zero module"),
            Regularity::Unit => String::from("vh_n is a unit"),
            Regularity::Free => String::from("xi = 0 mod I_k, quotient is free"),
            Regularity::Injective { leading } => format!("leading term mod I_(k+1): {}", leading),
            Regularity::Fails { witness } => witness.clone(),
        }
    }
}

/// R_k = Ê(n)^*/I_k is a domain with v̂_k prime for k < n, so R_k[[w]] is a
/// domain with v̂_k prime, and v̂_k·f ∈ (ξ̄) forces f ∈ (ξ̄) exactly when
/// ξ̄ is zero or not divisible by v̂_k.
pub fn regularity(n: u32, k: u32, xi: &ZSeries) -> Regularity {
    let bar = reduce_series(xi, k.min(n));
    if is_unit(bar.coeff(0)) {
        return Regularity::ZeroModule;
    }
    if k >= n {
        return Regularity::Unit;
    }
    if bar.is_zero() {
        return Regularity::Free;
    }
    let next = reduce_series(xi, k + 1);
    if let Some(d) = next.valuation() {
        return Regularity::Injective { leading: format!("({})*w^{}", next.coeff(d), d) };
    }
    let ring = xi.ring;
    let f = if k == 0 {
        bar.map_coeffs(|c| c.div_pow2(1).expect("even after reduction mod 2"))
    } else {
        let inv = Monomial::generator(n as usize, k as usize - 1, -1);
        bar.map_coeffs(|c| c.mul_monomial(&inv))
    };
    let vk = vhat(n, k).relabel(ring);
    let back = reduce_series(&f.scale(&vk).sub(&bar), k);
    let witness = if back.is_zero() {
        format!("vh{} * f = xi mod I_{} with f = {}", k, k, f)
    } else {
        format!("division by vh{} failed", k)
    };
    Regularity::Fails { witness }
}

/// Injectivity of v̂_0, .., v̂_n on the successive quotients of M.
pub fn regular_sequence_report(n: u32, xi: &ZSeries) -> Report {
    let mut rep = Report::new("landweber");
    for k in 0..=n {
        let r = regularity(n, k, xi);
        rep.push(format!("multiplication by vh{} is injective on M/I_{}M", k, k), r.passed(), Some(r.describe()));
    }
    rep
}

pub fn regular_sequence_check(n: u32, w_prec: usize) -> Result<Report, StructureError> {
    Ok(regular_sequence_report(n, &xi_series(n, w_prec)?))
}

// ---------------------------------------------------------------- completion

/// Drop terms lying in I^depth, I = (2, v̂_1, .., v̂_{n-1}).
pub fn truncate_i(c: &Elem, depth: i64) -> Elem {
    c.filter_terms(|m, s| i_order(m, s) < depth)
}

fn truncate_series(s: &ZSeries, depth: i64) -> ZSeries {
    s.map_coeffs(|c| truncate_i(c, depth))
}

fn widen(s: &ZSeries, prec: usize) -> ZSeries {
    ZSeries::from_coeffs(s.var, prec, s.ring, s.coeffs.clone())
}

/// Inverse of c in the I-adic completion, to depth; c mod I must be a unit.
pub fn inverse_mod_i(c: &Elem, depth: i64) -> Option<Elem> {
    let t = truncate_i(c, 1);
    if !is_unit(&t) {
        return None;
    }
    let t_inv = t.try_inverse()?;
    let r = c.sub(&t).mul(&t_inv).neg();
    let mut sum = Elem::one(c.ring());
    let mut pow = Elem::one(c.ring());
    loop {
        pow = truncate_i(&pow.mul(&r), depth);
        if pow.is_zero() {
            break;
        }
        sum.add_assign_ref(&pow);
    }
    Some(truncate_i(&sum.mul(&t_inv), depth))
}

/// ξ = P + w^d U with d = 2^{n-1}, P ≡ 0 mod I of degree < d and U(0) a unit.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub d: usize,
    pub omega: Elem,
    pub p: ZSeries,
    pub u_inv: ZSeries,
}

pub fn prepare(xi: &ZSeries, n: u32, depth: i64) -> Result<Prepared, StructureError> {
    let d = 1usize << (n - 1);
    let prec = xi.prec;
    if prec <= d {
        return Err(StructureError::LeadingTermNotUnit(format!("w-precision {} does not reach w^{}", prec, d)));
    }
    for l in 0..d {
        if xi.coeff(l).terms().any(|(m, c)| i_order(m, c) == 0) {
            return Err(StructureError::LeadingTermNotUnit(format!("coefficient of w^{} is {}, not in I", l, xi.coeff(l))));
        }
    }
    let cd = xi.coeff(d);
    let omega = truncate_i(cd, 1);
    let cd_inv = inverse_mod_i(cd, depth)
        .ok_or_else(|| StructureError::LeadingTermNotUnit(format!("coefficient of w^{} is {}", d, cd)))?;
    let p = ZSeries::from_coeffs(Var::W, prec, xi.ring, xi.coeffs[..d].to_vec());
    let u: Vec<Elem> = xi.coeffs[d..].to_vec();
    let pu = prec - d;
    let mut inv = ZSeries::zero(Var::W, pu, xi.ring);
    inv.coeffs[0] = cd_inv.clone();
    for k in 1..pu {
        let mut acc = Elem::zero(xi.ring);
        for j in 1..=k {
            if !u[j].is_zero() && !inv.coeffs[k - j].is_zero() {
                acc.add_assign_ref(&u[j].mul(&inv.coeffs[k - j]));
            }
        }
        inv.coeffs[k] = truncate_i(&acc.mul(&cd_inv).neg(), depth);
    }
    Ok(Prepared { d, omega, p, u_inv: inv })
}

/// f = q·ξ + r with deg r < d.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotient: ZSeries,
    pub remainder: ZSeries,
    pub steps: usize,
}

impl Division {
    /// q·ξ + r = f modulo (w^prec, I^depth).
    pub fn recomposes(&self, f: &ZSeries, xi: &ZSeries, depth: i64) -> bool {
        let prec = self.quotient.prec;
        // compare classes: representatives may differ by terms in I^depth
        let lhs = self.quotient.mul(&xi.truncate(prec)).add(&self.remainder);
        truncate_series(&lhs.sub(&f.truncate(prec)), depth).is_zero()
    }

    pub fn remainder_degree(&self) -> Option<usize> {
        self.remainder.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

/// Division by ξ in Ê(n)^*_I[[w]], coefficients kept to I-adic depth `depth`.
pub fn weierstrass_reduce(f: &ZSeries, xi: &ZSeries, n: u32, depth: i64) -> Result<Division, StructureError> {
    let prep = prepare(xi, n, depth)?;
    let prec = f.prec.min(xi.prec);
    let d = prep.d;
    let xi = truncate_series(&xi.truncate(prec), depth);
    let u_inv = prep.u_inv.truncate(prec - d);
    let mut rest = truncate_series(&f.truncate(prec).with_var(Var::W), depth);
    let mut q = ZSeries::zero(Var::W, prec, xi.ring);
    let mut steps = 0;
    loop {
        let high = ZSeries::from_coeffs(Var::W, prec - d, xi.ring, rest.coeffs[d..].to_vec());
        if high.is_zero() {
            break;
        }
        if steps > depth as usize + 1 {
            return Err(StructureError::NoConvergence(steps));
        }
        let qi = widen(&truncate_series(&high.mul(&u_inv), depth), prec);
        rest = truncate_series(&rest.sub(&qi.mul(&xi)), depth);
        q = q.add(&qi);
        steps += 1;
    }
    Ok(Division { quotient: q, remainder: rest, steps })
}

/// M = Ê(n)^*[[w]]/(ξ) after completion, with reduction to degree < 2^{n-1}.
#[derive(Debug, Clone)]
pub struct QuotientModuleM {
    pub n: u32,
    pub xi: ZSeries,
    pub depth: i64,
}

impl QuotientModuleM {
    pub fn new(n: u32, w_prec: usize, depth: i64) -> Result<Self, StructureError> {
        Ok(QuotientModuleM { n, xi: xi_series(n, w_prec)?, depth })
    }

    pub fn bound(&self) -> usize {
        1 << (self.n - 1)
    }

    pub fn reduce(&self, f: &ZSeries) -> Result<ZSeries, StructureError> {
        Ok(weierstrass_reduce(f, &self.xi, self.n, self.depth)?.remainder)
    }
}

/// Reduce each basis candidate w^l, l ≤ 2^{n-1}, and check the division.
pub fn completion_report(n: u32, xi: &ZSeries, depth: i64) -> Report {
    let mut rep = Report::new("completion");
    let d = 1usize << (n - 1);
    let prep = match prepare(xi, n, depth) {
        Ok(p) => p,
        Err(e) => {
            rep.fail("xi = unit * w^d mod (w^(d+1), I)", format!("{}", e));
            return rep;
        }
    };
    let vh = vhat(n, n).relabel(xi.ring);
    rep.push(
        format!("xi = vh{} w^{} mod (w^{}, I)", n, d, d + 1),
        reduce_mod_ik(&prep.omega.sub(&vh), IdealIk { k: n }).is_zero(),
        Some(format!("leading coefficient mod I: {}", prep.omega)),
    );
    let mut ok = true;
    let mut witness = String::new();
    for l in 0..=(d + 1).min(xi.prec - 1) {
        let f = ZSeries::monomial(Var::W, xi.prec, xi.ring, l, Elem::one(xi.ring));
        match weierstrass_reduce(&f, xi, n, depth) {
            Ok(div) => {
                let deg_ok = div.remainder_degree().is_none_or(|r| r < d);
                let back = div.recomposes(&f, xi, depth);
                let fixed = l >= d || (div.quotient.is_zero() && div.remainder.agrees_with(&f));
                if !(deg_ok && back && fixed) && ok {
                    ok = false;
                    witness = format!("w^{}: degree bound {}, recomposition {}, fixed {}", l, deg_ok, back, fixed);
                }
            }
            Err(e) => {
                if ok {
                    ok = false;
                    witness = format!("w^{}: {}", l, e);
                }
            }
        }
    }
    if ok {
        witness = format!("basis 1, .., p1^{}; I-depth {}", d - 1, depth);
    }
    rep.push("q xi + r = w^l with deg r < 2^(n-1)", ok, Some(witness));
    rep
}

// ---------------------------------------------------------------- degrees

/// The arithmetic showing that N(û) - ξ(p̂_1) has no room for a correction
/// term x^r·(class) with 1 ≤ r < 2^{n+1}.
pub fn degree_uniqueness_check(n: u32) -> Report {
    let mut rep = Report::new("degree uniqueness");
    let one_minus = 1 - lambda(n);
    let closed = -(1i64 << (n + 2)) * ((1i64 << (n - 1)) - 1);
    rep.push("1 - lambda = -2^(n+2)(2^(n-1)-1)", one_minus == closed, Some(format!("1 - lambda = {}", one_minus)));
    let mut admissible = Vec::new();
    for r in 1..(1i64 << (n + 1)) {
        let j = 63 - r.leading_zeros() as i64;
        if (one_minus + r).rem_euclid(1i64 << (j + 1)) == 0 {
            admissible.push(r);
        }
    }
    let witness = if admissible.is_empty() {
        format!("r = 1..{} all excluded; N(uh) = xi(p1) is the unique lift", (1i64 << (n + 1)) - 1)
    } else {
        format!("admissible r: {:?}", admissible)
    };
    rep.push("no admissible x-power correction", admissible.is_empty(), Some(witness));
    rep
}

// ---------------------------------------------------------------- relations

/// 2p + 2l = 2^{n+1} q + 2r with 0 ≤ 2r < 2^{n+1}.
pub fn qr_decomposition(n: u32, p: u32, l: u32) -> (u32, u32) {
    let s = p + l;
    (s >> n, s & ((1 << n) - 1))
}

/// Restriction of N(v_n^k û) to E(n)^*(CP^∞): v_n^k(û + (-1)^k û*).
pub fn norm_restriction_vn(ctx: &CpContext, k: i64) -> ZSeries {
    let z = ZSeries::monomial(Var::UHat, ctx.u_prec, ctx.ring(), 1, Elem::vn(ctx.ring(), k as i32));
    ctx.norm_restriction(&z)
}

fn compare(rep: &mut Report, name: String, lhs: &ZSeries, rhs: &ZSeries) {
    match lhs.first_difference(rhs) {
        None => rep.pass(name),
        Some(i) => {
            let w = format!("first difference at uh^{}: {} vs {}", i, lhs.coeff(i), rhs.coeff(i));
            rep.fail(name, w)
        }
    }
}

/// The three product relations for one pair (p, l), restricted.
pub fn relation_check(ctx: &CpContext, p: u32, l: u32) -> Report {
    let n = ctx.n;
    let mut rep = Report::new("relations");
    let (q, r) = qr_decomposition(n, p, l);
    let top = 1u32 << (n + 1);
    let decomposed = 2 * p + 2 * l == top * q + 2 * r && q <= 1 && 2 * r < top;
    rep.push(
        format!("2p+2l = 2^(n+1)q + 2r for p={}, l={}", p, l),
        decomposed,
        Some(format!("q = {}, r = {}", q, r)),
    );
    let nv = |k: u32| norm_restriction_vn(ctx, k as i64);
    let shift = Elem::vn(ctx.ring(), (top * q) as i32);
    let (p, l, r) = (2 * p, 2 * l, 2 * r);
    let tail = format!(" [p={}, l={}, q={}, r={}]", p / 2, l / 2, q, r / 2);

    let lhs = nv(p).mul(&nv(l));
    let rhs = nv(r).mul(&nv(0)).scale(&shift);
    compare(&mut rep, format!("N(vn^{} uh) N(vn^{} uh) = vn^{} N(vn^{} uh) N(uh){}", p, l, top * q, r, tail), &lhs, &rhs);

    let lhs = nv(p + 1).mul(&nv(l));
    let rhs = nv(r + 1).mul(&nv(0)).scale(&shift);
    compare(
        &mut rep,
        format!("N(vn^{} uh) N(vn^{} uh) = vn^{} N(vn^{} uh) N(uh){}", p + 1, l, top * q, r + 1, tail),
        &lhs,
        &rhs,
    );

    let lhs = nv(p + 1).mul(&nv(l + 1));
    let four = Elem::vn(ctx.ring(), (r + 2) as i32).scale(&Z2::from_i64(4));
    let rhs = nv(r + 2).mul(&nv(0)).sub(&ctx.w_u.scale(&four)).scale(&shift);
    compare(
        &mut rep,
        format!("N(vn^{} uh) N(vn^{} uh) = vn^{} (N(vn^{} uh) N(uh) - 4 vn^{} p1){}", p + 1, l + 1, top * q, r + 2, r + 2, tail),
        &lhs,
        &rhs,
    );
    rep
}

/// v̂_j·N(v_n^{2p}û) = (v̂_j v_n^{2p})·N(û) and its odd companion, for
/// 2p = 2^{i+1}m + 2^i and j < i, restricted.
pub fn module_relation_check(ctx: &CpContext) -> Report {
    let n = ctx.n;
    let mut rep = Report::new("relations");
    for p in 1u32..(1 << n) {
        let i = (2 * p).trailing_zeros();
        for j in 0..i.min(n) {
            let vj = vhat(n, j).relabel(ctx.ring());
            let coef = vj.mul(&Elem::vn(ctx.ring(), 2 * p as i32));
            let lhs = norm_restriction_vn(ctx, 2 * p as i64).scale(&vj);
            let rhs = norm_restriction_vn(ctx, 0).scale(&coef);
            compare(&mut rep, format!("vh{} N(vn^{} uh) = (vh{} vn^{}) N(uh)", j, 2 * p, j, 2 * p), &lhs, &rhs);
            let lhs = norm_restriction_vn(ctx, 2 * p as i64 + 1).scale(&vj);
            let rhs = norm_restriction_vn(ctx, 1).scale(&coef);
            compare(&mut rep, format!("vh{} N(vn^{} uh) = (vh{} vn^{}) N(vn uh)", j, 2 * p + 1, j, 2 * p), &lhs, &rhs);
        }
    }
    rep
}

/// x·v_n^k(û + (-1)^k û*) lies in the image of d_1 on the truncated E_1.
/// The source cell is taken from a box holding the preimage v_n^{k+2^n-1}û;
/// membership is decided by lattice containment.
pub fn boundary_certificates(ctx: &CpContext) -> Report {
    let n = ctx.n;
    let mut rep = Report::new("relations");
    let g = Grading::new(n, Ext::UHat);
    let d1 = CpDifferential::new(ctx);
    let one = Z2::one();
    let kmax = 1i64 << (n + 1);
    let targets: Vec<(i64, Vec<(CellMono, Z2)>)> = (0..kmax)
        .map(|k| {
            let base = CellMono::new(1, Monomial::one(n as usize), 0);
            (k, series_terms(&base, &norm_restriction_vn(ctx, k), &one))
        })
        .collect();
    let a_max = targets
        .iter()
        .flat_map(|(_, t)| t.iter().flat_map(|(m, _)| m.vhat_exps().iter().copied()))
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let vn_abs = 2 * ((1i64 << n) - 1);
    let b_max = kmax + (1 << n) + (ctx.u_prec as i64) * (1 - lambda(n)).abs() / vn_abs + 1;
    let bx = TruncationBox { a_max, b_max, prec: ctx.u_prec as u32, s_max: 1 };
    let amb = Ambient::build(g, bx, &[0]);
    for (k, terms) in targets {
        let name = format!("x N(vn^{} uh) is a d1-boundary", k);
        let Some((first, _)) = terms.first() else {
            rep.fail(name, "zero target");
            continue;
        };
        let tgt = g.bidegree(first);
        let src = Bidegree { i: tgt.i - 1, j: tgt.j - 2 };
        let sources = amb.cell(&src).unwrap_or(&[]);
        let images: Vec<Vec<(CellMono, Z2)>> = sources.iter().map(|m| d1.image(m)).collect();
        let mut monos: BTreeSet<CellMono> = terms.iter().map(|(m, _)| *m).collect();
        monos.extend(images.iter().flatten().map(|(m, _)| *m));
        let monos: Vec<CellMono> = monos.into_iter().collect();
        let cols: Vec<_> = images.into_iter().map(|t| vector_on(&monos, t)).collect();
        let lattice = Lattice::span(monos.len(), cols);
        let preimage = CellMono::new(0, vn_power(n, k + (1 << n) - 1), 1);
        let ok = lattice.contains(&vector_on(&monos, terms));
        let witness = format!("preimage {} in a source cell of rank {}", g.name(&preimage), sources.len());
        rep.push(name, ok, Some(witness));
    }
    rep
}

/// û-precision for the boundary certificates; the source cells grow fast
/// with precision and the preimage sits in degree 1.
pub const CERTIFICATE_PREC: usize = 16;

/// Every relation family, all pairs 0 ≤ 2p, 2l < 2^{n+1}.
pub fn relation_suite(n: u32, u_prec: usize) -> Result<Report, StructureError> {
    let ctx = CpContext::new(n, u_prec)?;
    let mut rep = Report::new("relations");
    let core = ctx.u_minus.mul(&ctx.u_minus);
    let other = ctx.u_plus.mul(&ctx.u_plus).sub(&ctx.w_u.scale_scalar(&Z2::from_i64(4)));
    compare(&mut rep, String::from("(uh - uh*)^2 = (uh + uh*)^2 - 4 uh uh*"), &core, &other);
    if let Ok(xi) = ctx.xi() {
        let in_u = xi.in_u(&ctx.w_u);
        compare(&mut rep, String::from("N(uh) restricts to xi(uh uh*)"), &norm_restriction_vn(&ctx, 0), &in_u);
    }
    for p in 0..(1u32 << n) {
        for l in 0..(1u32 << n) {
            rep.extend(relation_check(&ctx, p, l));
        }
    }
    rep.extend(module_relation_check(&ctx));
    if u_prec > CERTIFICATE_PREC {
        rep.extend(boundary_certificates(&CpContext::new(n, CERTIFICATE_PREC)?));
    } else {
        rep.extend(boundary_certificates(&ctx));
    }
    Ok(rep)
}

// ---------------------------------------------------------------- presentation

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    NormOfU,
    Module,
    XAnnihilates,
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortExactSequence {
    pub left: String,
    pub left_generators: Vec<String>,
    pub middle: String,
    pub right: String,
    /// Basis of the right-hand term after completing at I.
    pub completed_basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub n: u32,
    pub coefficients: String,
    pub generators: Vec<Generator>,
    /// Generators expressible through the others.
    pub redundant: Vec<String>,
    pub relations: Vec<Relation>,
    pub ses: ShortExactSequence,
    pub periodic: String,
    /// ξ to the computed precision.
    pub xi: String,
}

impl AlgebraPresentation {
    pub fn algebra_generators(&self) -> Vec<&str> {
        self.generators
            .iter()
            .map(|g| g.name.as_str())
            .filter(|g| !self.redundant.iter().any(|r| r == g))
            .collect()
    }
}

pub fn norm_name(n: u32, j: i64) -> String {
    match j {
        0 => String::from("N(uh)"),
        1 => format!("N(v{} uh)", n),
        _ => format!("N(v{}^{} uh)", n, j),
    }
}

fn vn_name(n: u32, e: i64) -> String {
    match e {
        0 => String::from("1"),
        1 => format!("v{}", n),
        _ => format!("v{}^{}", n, e),
    }
}

fn relation_list(n: u32) -> Vec<Relation> {
    let mut out = Vec::new();
    let rel = |kind, text: String| Relation { kind, text };
    out.push(rel(RelationKind::NormOfU, String::from("N(uh) = xi(p1)")));
    for p in 1i64..(1 << n) {
        let i = (2 * p).trailing_zeros() as i64;
        for j in 0..i.min(n as i64) {
            let c = format!("vh{} {}", j, vn_name(n, 2 * p));
            out.push(rel(RelationKind::Module, format!("vh{} * {} = ({}) * {}", j, norm_name(n, 2 * p), c, norm_name(n, 0))));
            out.push(rel(RelationKind::Module, format!("vh{} * {} = ({}) * {}", j, norm_name(n, 2 * p + 1), c, norm_name(n, 1))));
        }
    }
    for k in 0..(1i64 << (n + 1)) {
        out.push(rel(RelationKind::XAnnihilates, format!("x * {} = 0", norm_name(n, k))));
    }
    let top = 1i64 << (n + 1);
    for p in 0..(1u32 << n) {
        for l in 0..(1u32 << n) {
            let (q, r) = qr_decomposition(n, p, l);
            let (p, l, r) = (2 * p as i64, 2 * l as i64, 2 * r as i64);
            let s = if q == 0 { String::new() } else { format!("{} * ", vn_name(n, top)) };
            out.push(rel(
                RelationKind::Product,
                format!("{} * {} = {}{} * {}", norm_name(n, p), norm_name(n, l), s, norm_name(n, r), norm_name(n, 0)),
            ));
            out.push(rel(
                RelationKind::Product,
                format!("{} * {} = {}{} * {}", norm_name(n, p + 1), norm_name(n, l), s, norm_name(n, r + 1), norm_name(n, 0)),
            ));
            out.push(rel(
                RelationKind::Product,
                format!(
                    "{} * {} = {}({} * {} - 4 {} p1)",
                    norm_name(n, p + 1),
                    norm_name(n, l + 1),
                    s,
                    norm_name(n, r + 2),
                    norm_name(n, 0),
                    vn_name(n, r + 2)
                ),
            ));
        }
    }
    out
}

/// The presentation of ER(n)^*(CP^∞), after running the cheap checks it
/// depends on: degrees, regularity, the leading term of ξ and the
/// restricted relations.
pub fn emit_presentation(n: u32) -> Result<AlgebraPresentation, StructureError> {
    let d = 1usize << (n - 1);
    let w_prec = d + 3;
    let ctx = CpContext::new(n, 2 * w_prec)?;
    let xi = ctx.xi()?.into_series().truncate(w_prec);
    let mut pre = degree_uniqueness_check(n);
    pre.extend(regular_sequence_report(n, &xi));
    pre.extend(completion_report(n, &xi, 4));
    pre.push(
        "relations hold on restriction",
        {
            let mut r = module_relation_check(&ctx);
            for p in 0..(1u32 << n) {
                for l in 0..(1u32 << n) {
                    r.extend(relation_check(&ctx, p, l));
                }
            }
            r.passed()
        },
        None,
    );
    if let Some(c) = pre.first_failure() {
        return Err(StructureError::PrerequisiteFailed(c.name.clone()));
    }

    let one_minus = 1 - lambda(n);
    let vn_deg = -2 * ((1i64 << n) - 1);
    let mut generators = alloc::vec![Generator { name: String::from("1"), degree: 0 }];
    generators.push(Generator { name: String::from("p1"), degree: 2 * one_minus });
    for j in 0..(1i64 << (n + 1)) {
        generators.push(Generator { name: norm_name(n, j), degree: j * vn_deg + one_minus });
    }
    // p1 is a power series in N(uh) exactly when ξ has a unit linear term.
    let linear_unit = is_unit(xi.coeff(1)) && reversion(&xi).is_ok();
    let redundant = if linear_unit { alloc::vec![String::from("p1")] } else { Vec::new() };
    let right = if linear_unit { format!("ER({})^*", n) } else { format!("ER({})^*[[p1]]/(xi(p1))", n) };
    let ses = ShortExactSequence {
        left: format!("im(N^res) = S[[p1]]{{{}, {}}}", norm_name(n, 0), norm_name(n, 1)),
        left_generators: alloc::vec![norm_name(n, 0), norm_name(n, 1)],
        middle: format!("ER({})^*(CP^inf)", n),
        right,
        completed_basis: (0..d)
            .map(|l| match l {
                0 => String::from("1"),
                1 => String::from("p1"),
                _ => format!("p1^{}", l),
            })
            .collect(),
    };
    let period = 1i64 << (n + 2);
    Ok(AlgebraPresentation {
        n,
        coefficients: format!("ER({})^*", n),
        generators,
        redundant,
        relations: relation_list(n),
        ses,
        periodic: format!("ER({})^({}*)(CP^inf) = ER({})^({}*)(pt)[[p1]]", n, period, n, period),
        xi: format!("{}", xi),
    })
}
