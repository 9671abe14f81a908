//! Maximum-likelihood decoding regions of linear codes over small finite
//! fields, and exact finite-length checks of the sharp-threshold machinery
//! around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: `F_q` arithmetic, words of `F_q^n` and the total order used
//!   to break decoding ties.
//! * [`code`]: linear codes given by a generator matrix, with cached codeword
//!   enumeration and minimum distance.
//! * [`channel`]: the `q`-ary `p`-noisy error distribution, erasure masks and
//!   Hoeffding confidence radii.
//! * [`decode`]: the symmetric maximum-likelihood decoder, ball list decoding
//!   and erasure candidate sets.
//! * [`iso`]: `{0,1}`-valued functions on `F_q^n`, their boundary functional
//!   and exact moments under the noisy measure.
//! * [`threshold`]: success-probability curves and the verifiers that tie the
//!   pieces together.
//!
//! Everything that scans all of `F_q^n` is guarded by a single enumeration
//! cap, see [`config::enumeration_cap`].

pub mod algebra;
pub mod channel;
pub mod code;
pub mod config;
pub mod decode;
pub mod error;
pub mod iso;
pub mod rng;
pub mod threshold;
pub mod verdict;

pub use algebra::{Field, FieldKind, FieldOp, Word};
pub use channel::{hoeffding_radius, ErasureMask, NoiseSpec};
pub use code::{Augmentation, LinearCode, ListDecodability, ListMode};
pub use decode::DecodeResult;
pub use error::{Error, Result};
pub use iso::{IndicatorFn, Moments, MonotoneDirection, MonotoneWitness};
pub use threshold::{CurveRow, Estimator, McEstimate, Mode, RegionProfile, ThresholdCurve};
pub use verdict::{Status, Verdict};
