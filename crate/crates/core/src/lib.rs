//! Sampling and reconstruction of non-bandlimited signals by frequency warping.
//!
//! Fourier convention: `X^(w) = int X(t) e^{-iwt} dt`. The H_w inner product
//! `int X^ conj(Y^) w dw` carries no `1/2pi`, while the time-domain pairing is
//! `<X, Y> = (1/2pi) int X^ conj(Y^) dw`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bench;
pub mod config;
pub mod error;
pub mod quad;
pub mod signals;
pub mod specfun;
pub mod synth;
pub mod transform;
pub mod warpcore;
pub mod wks;

pub use error::{Error, Result};
pub use num_complex::Complex64;
