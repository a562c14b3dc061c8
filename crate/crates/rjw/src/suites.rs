//! The verification suites behind `rjw verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rjw_core::bss::{cp, pt, zero_line, TruncationBox};
use rjw_core::coeffring::{Elem, Monomial};
use rjw_core::cpbasis::{self, CpContext};
use rjw_core::fgl::{self, ZSeries};
use rjw_core::report::Report;
use rjw_core::series::Var;
use rjw_core::structure;

use crate::config::{default_e2_box, default_pt_box, RunConfig, Suite, DEFAULT_TENSOR_BOX};

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Fgl(#[from] fgl::FglError),
    #[error(transparent)]
    Cp(#[from] cpbasis::CpError),
    #[error(transparent)]
    Bss(#[from] rjw_core::bss::BssError),
    #[error(transparent)]
    Structure(#[from] structure::StructureError),
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Report, SuiteError> {
    match suite {
        Suite::Fgl => fgl_suite(cfg.n, cfg.u_prec),
        Suite::Xi => xi_suite(cfg.n, cfg.u_prec),
        Suite::Bss => bss_suite(cfg),
        Suite::Landweber => landweber_suite(cfg.n, cfg.w_prec),
        Suite::Relations => relations_suite(cfg.n, cfg.u_prec),
        Suite::Completion => completion_suite(cfg.n, cfg.w_prec, cfg.i_depth, cfg.seed),
    }
}

/// Run the selected suites on up to `cfg.threads` workers; reports come
/// back in suite order.
pub fn run_all(cfg: &RunConfig) -> Vec<(Suite, Result<Report, SuiteError>)> {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let workers = cfg.threads.max(1).min(suites.len().max(1));
    let mut out: Vec<Option<Result<Report, SuiteError>>> = suites.iter().map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..workers).map(|w| (w..suites.len()).step_by(workers).collect()).collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|idx| {
                let suites = &suites;
                scope.spawn(move || idx.into_iter().map(|i| (i, run(suites[i], cfg))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("suite worker panicked") {
                out[i] = Some(r);
            }
        }
    });
    suites.into_iter().zip(out.into_iter().map(|r| r.expect("every suite ran"))).collect()
}

pub fn fgl_suite(n: u32, u_prec: usize) -> Result<Report, SuiteError> {
    let f = fgl::build_fgl(n, u_prec)?;
    Ok(fgl::verify_construction(&f))
}

pub fn xi_suite(n: u32, u_prec: usize) -> Result<Report, SuiteError> {
    let ctx = CpContext::new(n, u_prec)?;
    let mut rep = cpbasis::congruence_suite(&ctx)?;
    rep.suite = "xi".into();
    let xi = ctx.xi()?;
    match cpbasis::xi_identity_holds(&ctx, &xi) {
        None => rep.pass("xi(uh uh*) = uh + uh*"),
        Some(d) => rep.fail("xi(uh uh*) = uh + uh*", format!("first difference at uh^{}", d)),
    }
    match cpbasis::in_vhat_subring(&xi) {
        Ok(()) => rep.pass("xi has coefficients in Z_(2)[vh_1..vh_n]"),
        Err((l, c)) => rep.fail("xi has coefficients in Z_(2)[vh_1..vh_n]", format!("w^{}: {}", l, c)),
    }
    if n == 1 {
        match cpbasis::xi_is_minus_w(&xi) {
            None => rep.pass("xi = -w"),
            Some((l, c)) => rep.fail("xi = -w", format!("coefficient of w^{} is {}", l, c)),
        }
    }
    Ok(rep)
}

pub fn bss_suite(cfg: &RunConfig) -> Result<Report, SuiteError> {
    let n = cfg.n;
    let mut rep = Report::new("bss");
    let pt_box = TruncationBox::parse(n, cfg.bx.as_deref().unwrap_or(&default_pt_box(n)))?;
    rep.extend(pt::pt_pages(n, &pt_box)?.report);
    let e2_box = TruncationBox::parse(n, cfg.bx.as_deref().unwrap_or(&default_e2_box(n)))?;
    rep.extend(cp::cp_e2(n, &e2_box)?.report);
    let t_box = TruncationBox::parse(n, cfg.bx.as_deref().unwrap_or(DEFAULT_TENSOR_BOX))?;
    let pages = cp::cp_pages(n, &t_box)?;
    rep.extend(pages.report.clone());
    rep.extend(zero_line::einf_zero_line(n, &t_box, &pages)?.report);
    Ok(rep)
}

pub fn landweber_suite(n: u32, w_prec: usize) -> Result<Report, SuiteError> {
    let xi = structure::xi_series(n, w_prec)?;
    let mut rep = structure::regular_sequence_report(n, &xi);
    // fault injection: ξ = 1 gives the zero module, ξ = 2w breaks v̂_0
    let ring = xi.ring;
    let one = ZSeries::constant(Var::W, w_prec, Elem::one(ring));
    let zero_module = (0..=n).all(|k| structure::regularity(n, k, &one) == structure::Regularity::ZeroModule);
    rep.push("control xi = 1 is the zero module", zero_module, None);
    let two_w = ZSeries::monomial(Var::W, w_prec, ring, 1, Elem::from_i64(ring, 2));
    let broken = structure::regularity(n, 0, &two_w);
    rep.push("control xi = 2w breaks injectivity of vh0", !broken.passed(), Some(broken.describe()));
    Ok(rep)
}

pub fn relations_suite(n: u32, u_prec: usize) -> Result<Report, SuiteError> {
    let mut rep = structure::degree_uniqueness_check(n);
    rep.suite = "relations".into();
    rep.extend(structure::relation_suite(n, u_prec)?);
    Ok(rep)
}

/// A pseudo-random w-series over Z_(2)[v̂_1, .., v_n^{±2}].
pub fn random_series(rng: &mut ChaCha8Rng, n: u32, prec: usize, ring: rjw_core::coeffring::RingDescriptor) -> ZSeries {
    let mut f = ZSeries::zero(Var::W, prec, ring);
    for l in 0..prec {
        if rng.gen_bool(0.4) {
            continue;
        }
        let mut e = vec![0i32; n as usize];
        for x in e.iter_mut().take(n as usize - 1) {
            *x = rng.gen_range(0..3);
        }
        e[n as usize - 1] = 2 * rng.gen_range(-2..3);
        let c = rng.gen_range(-5i64..6);
        f.coeffs[l] = Elem::monomial(ring, Monomial::new(&e), cpbasis::two_local(c));
    }
    f
}

pub fn completion_suite(n: u32, w_prec: usize, depth: i64, seed: u64) -> Result<Report, SuiteError> {
    let xi = structure::xi_series(n, w_prec)?;
    let mut rep = structure::completion_report(n, &xi, depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 1usize << (n - 1);
    let mut ok = true;
    let mut witness = format!("8 random series, seed {}", seed);
    for t in 0..8 {
        let f = random_series(&mut rng, n, w_prec, xi.ring);
        let div = structure::weierstrass_reduce(&f, &xi, n, depth)?;
        let again = structure::weierstrass_reduce(&div.remainder, &xi, n, depth)?;
        let good = div.recomposes(&f, &xi, depth)
            && div.remainder_degree().is_none_or(|r| r < d)
            && again.quotient.is_zero()
            && again.remainder.agrees_with(&div.remainder);
        if !good && ok {
            ok = false;
            witness = format!("random series {} with seed {}", t, seed);
        }
    }
    rep.push("division of random series recomposes and is idempotent", ok, Some(witness));
    if n == 1 {
        let w = ZSeries::variable(Var::W, w_prec, xi.ring);
        let div = structure::weierstrass_reduce(&w, &xi, n, depth)?;
        rep.push("p1 = 0 mod (xi)", div.remainder.is_zero(), Some(format!("remainder {}", div.remainder)));
    }
    Ok(rep)
}
