#![no_std]
//! Exact computations for real Johnson-Wilson theories: 2-local scalars,
//! coefficient rings, truncated series, the height-n formal group law, the
//! complex projective basis change and bounded spectral sequence pages.

extern crate alloc;

pub mod bss;
pub mod coeffring;
pub mod cpbasis;
pub mod fgl;
pub mod linalg;
pub mod numeric;
pub mod report;
pub mod series;
pub mod structure;
