//! Argument parsing and dispatch for the `rjw` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rjw_core::bss::{cp, pt, Page, Space, TruncationBox};
use rjw_core::coeffring::{reduce_mod_ik, IdealIk};
use rjw_core::fgl::{self, ZSeries};
use rjw_core::report::Report;

use crate::config::{self, default_pt_box, ConfigError, Format, PageSel, RunConfig, Suite, DEFAULT_TENSOR_BOX};
use crate::emit;
use crate::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rjw", version, about = "Exact computations for ER(n)^*(CP^inf)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// height
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// û-precision
    #[arg(long = "u-prec", visible_alias = "prec", default_value_t = 32)]
    pub u_prec: usize,
    /// w-precision
    #[arg(long = "w-prec", default_value_t = 16)]
    pub w_prec: usize,
    /// I-adic depth for the completion
    #[arg(long = "i-depth", default_value_t = 8)]
    pub i_depth: i64,
    /// text, json, csv or svg
    #[arg(long, default_value = "text")]
    pub out: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// write here instead of stdout
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PageArgs {
    /// pt or cp
    #[arg(long, default_value = "pt")]
    pub space: String,
    /// "A,B,N": v̂ exponent bound, v_n exponent bound, series precision
    #[arg(long = "box")]
    pub bx: Option<String>,
    /// page number or "all"
    #[arg(long, default_value = "all")]
    pub page: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Series of the height-n formal group law
    Fgl {
        #[command(flatten)]
        common: Common,
        /// two, minus-one, log, exp, ustar or law
        #[arg(long, default_value = "two")]
        series: String,
        /// use the hatted coordinates
        #[arg(long)]
        hatted: bool,
    },
    /// The series ξ with û + û* = ξ(ûû*)
    Xi {
        #[command(flatten)]
        common: Common,
        /// reduce coefficients modulo I_k
        #[arg(long = "mod-ik")]
        mod_ik: Option<u32>,
    },
    /// Spectral sequence pages
    Bss {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pages: PageArgs,
    },
    /// Verification suites
    Verify {
        #[command(flatten)]
        common: Common,
        /// fgl, xi, bss, landweber, relations, completion or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "box")]
        bx: Option<String>,
        /// same as --out json
        #[arg(long)]
        json: bool,
    },
    /// SVG chart of spectral sequence pages
    Chart {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pages: PageArgs,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Usage(#[from] ConfigError),
    #[error("{0}")]
    Failed(String),
}

fn config_from(common: &Common) -> Result<RunConfig, ConfigError> {
    Ok(RunConfig {
        n: common.n,
        u_prec: common.u_prec,
        w_prec: common.w_prec,
        i_depth: common.i_depth,
        out: common.out.parse()?,
        seed: common.seed,
        ..RunConfig::default()
    })
}

fn emit_output(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.file {
        Some(p) => emit::write_atomic(p, text).map_err(|e| CliError::Failed(format!("{}: {}", p.display(), e))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn series_json(s: &ZSeries) -> Value {
    let coeffs: Vec<String> = s.coeffs.iter().map(|c| c.to_string()).collect();
    json!({"var": s.var.name(), "prec": s.prec, "coefficients": coeffs})
}

/// Nonzero coefficients a_ij of F(x, y) = Σ a_ij x^i y^j.
fn law_terms(f: &rjw_core::fgl::ZBivariate) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for t in 0..f.prec {
        for i in 0..=t {
            let c = f.get(i, t - i);
            if !c.is_zero() {
                out.push((i, t - i, c.to_string()));
            }
        }
    }
    out
}

fn run_fgl(common: &Common, series: &str, hatted: bool) -> Result<i32, CliError> {
    let cfg = config_from(common)?;
    cfg.validate()?;
    let base = fgl::build_fgl(cfg.n, cfg.u_prec).map_err(|e| CliError::Failed(e.to_string()))?;
    let f = if hatted { fgl::hat_transform(&base) } else { base };
    let (text, js) = match series {
        "two" => (f.two_series.to_string(), series_json(&f.two_series)),
        "minus-one" => (f.minus_one_series.to_string(), series_json(&f.minus_one_series)),
        "ustar" => {
            let u = fgl::u_star_series(&f).map_err(|e| CliError::Failed(e.to_string()))?;
            (u.to_string(), series_json(&u))
        }
        "log" => (f.log.to_string(), json!(f.log.to_string())),
        "exp" => (f.exp.to_string(), json!(f.exp.to_string())),
        "law" => {
            let terms = law_terms(&f.f);
            (terms.iter().map(|(i, j, c)| format!("a_{},{} = {}", i, j, c)).collect::<Vec<_>>().join("\n"), json!(terms))
        }
        other => return Err(ConfigError::Unknown { what: "series", value: other.into() }.into()),
    };
    let body = match cfg.out {
        Format::Json => pretty(&json!({"n": cfg.n, "prec": cfg.u_prec, "hatted": hatted, "series": series, "value": js})),
        _ => format!("{}\n", text),
    };
    emit_output(common, &body)?;
    Ok(EXIT_OK)
}

fn run_xi(common: &Common, mod_ik: Option<u32>) -> Result<i32, CliError> {
    let cfg = config_from(common)?;
    cfg.validate()?;
    let ctx = rjw_core::cpbasis::CpContext::new(cfg.n, 2 * cfg.w_prec).map_err(|e| CliError::Failed(e.to_string()))?;
    let xi = ctx.xi().map_err(|e| CliError::Failed(e.to_string()))?.into_series().truncate(cfg.w_prec);
    let xi = match mod_ik {
        Some(k) => xi.map_coeffs(|c| reduce_mod_ik(c, IdealIk { k })),
        None => xi,
    };
    let body = match cfg.out {
        Format::Json => pretty(&json!({"n": cfg.n, "wPrec": cfg.w_prec, "modIk": mod_ik, "xi": series_json(&xi)})),
        _ => format!("{}\n", xi),
    };
    emit_output(common, &body)?;
    Ok(EXIT_OK)
}

/// Pages for `space` on the configured or default box.
pub fn compute_pages(n: u32, space: Space, bx: Option<&str>, sel: PageSel) -> Result<Vec<Page>, String> {
    let pages = match space {
        Space::Pt => {
            let b = TruncationBox::parse(n, bx.unwrap_or(&default_pt_box(n))).map_err(|e| e.to_string())?;
            pt::pt_pages(n, &b).map_err(|e| e.to_string())?.pages
        }
        Space::CpInf => {
            let b = TruncationBox::parse(n, bx.unwrap_or(DEFAULT_TENSOR_BOX)).map_err(|e| e.to_string())?;
            cp::cp_pages(n, &b).map_err(|e| e.to_string())?.tilde
        }
    };
    match sel {
        PageSel::All => Ok(pages),
        PageSel::One(r) => {
            let p: Vec<Page> = pages.into_iter().filter(|p| p.r == r).collect();
            if p.is_empty() {
                Err(format!("page {} is not computed for {}", r, space.as_str()))
            } else {
                Ok(p)
            }
        }
    }
}

fn pages_text(pages: &[Page]) -> String {
    let mut s = String::new();
    for p in pages {
        for c in &p.cells {
            if c.invariants.is_zero() {
                continue;
            }
            s.push_str(&format!(
                "E_{} ({}, {}) {} {}: {}\n",
                p.r,
                c.bidegree.i,
                c.bidegree.j,
                if c.safe { "safe" } else { "unsafe" },
                emit::group_label(&c.invariants.factors()),
                c.generators.join(", ")
            ));
        }
    }
    s
}

fn run_pages(common: &Common, args: &PageArgs, force_svg: bool) -> Result<i32, CliError> {
    let mut cfg = config_from(common)?;
    if force_svg {
        cfg.out = Format::Svg;
    }
    cfg.space = config::parse_space(&args.space)?;
    cfg.page = args.page.parse()?;
    cfg.bx = args.bx.clone();
    cfg.validate()?;
    let pages = compute_pages(cfg.n, cfg.space, cfg.bx.as_deref(), cfg.page).map_err(CliError::Failed)?;
    let body = match cfg.out {
        Format::Json => {
            let v: Vec<Value> = pages.iter().map(emit::page_json).collect();
            if v.len() == 1 {
                pretty(&v[0])
            } else {
                pretty(&Value::Array(v))
            }
        }
        Format::Csv => emit::pages_csv(&pages),
        Format::Svg => emit::pages_svg(&format!("{} n={} page {}", cfg.space.as_str(), cfg.n, cfg.page), &pages),
        Format::Text => pages_text(&pages),
    };
    emit_output(common, &body)?;
    Ok(EXIT_OK)
}

fn run_verify(common: &Common, suite: &str, bx: &Option<String>, json_flag: bool) -> Result<i32, CliError> {
    let mut cfg = config_from(common)?;
    if json_flag {
        cfg.out = Format::Json;
    }
    cfg.suites = Suite::parse_selection(suite)?;
    cfg.bx = bx.clone();
    cfg.validate()?;
    let results = suites::run_all(&cfg);
    let mut ok = true;
    let mut reports: Vec<Report> = Vec::new();
    for (s, r) in results {
        match r {
            Ok(rep) => {
                ok &= rep.passed();
                reports.push(rep);
            }
            Err(e) => {
                ok = false;
                let mut rep = Report::new(s.as_str());
                rep.fail("suite ran", e.to_string());
                reports.push(rep);
            }
        }
    }
    let body = match cfg.out {
        Format::Json => {
            let v: Vec<Value> = reports.iter().map(emit::report_json).collect();
            if v.len() == 1 {
                pretty(&v[0])
            } else {
                pretty(&Value::Array(v))
            }
        }
        _ => reports.iter().map(emit::report_text).collect(),
    };
    emit_output(common, &body)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

/// Parse `argv` (program name first) and run; returns the exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let res = match &cli.command {
        Command::Fgl { common, series, hatted } => run_fgl(common, series, *hatted),
        Command::Xi { common, mod_ik } => run_xi(common, *mod_ik),
        Command::Bss { common, pages } => run_pages(common, pages, false),
        Command::Chart { common, pages } => run_pages(common, pages, true),
        Command::Verify { common, suite, bx, json } => run_verify(common, suite, bx, *json),
    };
    match res {
        Ok(code) => code,
        Err(CliError::Usage(e)) => {
            eprintln!("error: {}", e);
            EXIT_USAGE
        }
        Err(CliError::Failed(e)) => {
            eprintln!("error: {}", e);
            EXIT_FAIL
        }
    }
}
