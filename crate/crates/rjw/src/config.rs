use std::fmt;
use std::str::FromStr;

use rjw_core::bss::{BssError, Space, TruncationBox};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("û-precision {u} is below twice the w-precision {w}")]
    PrecisionOrder { u: usize, w: usize },
    #[error("height must be at least 1")]
    Height,
    #[error("filtration range 0..={s} exceeds 0..={max}")]
    Filtration { s: u32, max: u32 },
    #[error("unknown {what}: {value}")]
    Unknown { what: &'static str, value: String },
    #[error(transparent)]
    Box(#[from] BssError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Fgl,
    Xi,
    Bss,
    Landweber,
    Relations,
    Completion,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Fgl, Suite::Xi, Suite::Bss, Suite::Landweber, Suite::Relations, Suite::Completion];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Fgl => "fgl",
            Suite::Xi => "xi",
            Suite::Bss => "bss",
            Suite::Landweber => "landweber",
            Suite::Relations => "relations",
            Suite::Completion => "completion",
        }
    }

    /// "all" or a single suite name.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>, ConfigError> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|x| x.as_str() == s)
            .map(|x| vec![*x])
            .ok_or_else(|| ConfigError::Unknown { what: "suite", value: s.into() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(ConfigError::Unknown { what: "output format", value: s.into() }),
        }
    }
}

pub fn parse_space(s: &str) -> Result<Space, ConfigError> {
    match s {
        "pt" => Ok(Space::Pt),
        "cp" | "cpinf" => Ok(Space::CpInf),
        _ => Err(ConfigError::Unknown { what: "space", value: s.into() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PageSel {
    All,
    One(u32),
}

impl FromStr for PageSel {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(PageSel::All);
        }
        s.parse().map(PageSel::One).map_err(|_| ConfigError::Unknown { what: "page", value: s.into() })
    }
}

impl fmt::Display for PageSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageSel::All => f.write_str("all"),
            PageSel::One(r) => write!(f, "{}", r),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: u32,
    pub u_prec: usize,
    pub w_prec: usize,
    pub i_depth: i64,
    /// "A,B,N"; each suite has its own default when absent
    pub bx: Option<String>,
    pub page: PageSel,
    pub space: Space,
    pub suites: Vec<Suite>,
    pub out: Format,
    pub seed: u64,
    pub mod_ik: Option<u32>,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            u_prec: 32,
            w_prec: 16,
            i_depth: 8,
            bx: None,
            page: PageSel::All,
            space: Space::Pt,
            suites: Suite::ALL.to_vec(),
            out: Format::Text,
            seed: 0,
            mod_ik: None,
            threads: threads_from_env(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::Height);
        }
        if self.u_prec < 2 * self.w_prec {
            return Err(ConfigError::PrecisionOrder { u: self.u_prec, w: self.w_prec });
        }
        if let Some(spec) = &self.bx {
            let b = TruncationBox::parse(self.n, spec)?;
            let max = (1u32 << (self.n + 1)) - 1;
            if b.s_max > max {
                return Err(ConfigError::Filtration { s: b.s_max, max });
            }
        }
        Ok(())
    }
}

/// Worker count from RJW_THREADS, at least 1.
pub fn threads_from_env() -> usize {
    std::env::var("RJW_THREADS").ok().and_then(|v| v.parse().ok()).filter(|&t| t > 0).unwrap_or(1)
}

/// Default boxes per computation.
pub fn default_pt_box(n: u32) -> String {
    format!("2,{},1", 1 << (n + 3))
}

pub fn default_e2_box(n: u32) -> String {
    format!("2,{},12", 1 << (n + 2))
}

pub const DEFAULT_TENSOR_BOX: &str = "1,8,8";
