//! Decoding-success curves and the finite-length threshold checks.
//!
//! `g(p)` is the probability that a `p`-noisy error word lies in the decoding
//! region of the zero codeword. By translation symmetry of the decoder it is
//! also the success probability for every other transmitted codeword, so every
//! experiment here sends zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{weight_of, write_digits, Word};
use crate::channel::{check_probability, fill_erasures, fill_noisy, hoeffding_radius};
use crate::code::{LinearCode, ListDecodability, ListMode};
use crate::config::ensure_enumerable;
use crate::decode::{erasure_ambiguous, in_omega_raw};
use crate::error::{Error, Result};
use crate::iso::IndicatorFn;
use crate::rng;
use crate::verdict::{Status, Verdict};

/// How a probability is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// Exact, by enumeration.
    Exact,
    /// Sampling, with a Hoeffding half-width at confidence `delta`.
    MonteCarlo { samples: u64, seed: u64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Mc,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Mc => "mc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub p: f64,
    pub g: f64,
    /// `ln(g / (1 - g))`, absent when `g` is exactly 0 or 1.
    pub logit_g: Option<f64>,
    pub mode: Mode,
    /// Zero for exact rows.
    pub half_width: f64,
    /// Zero for exact rows.
    pub samples: u64,
}

impl CurveRow {
    fn new(p: f64, g: f64, mode: Mode, half_width: f64, samples: u64) -> Self {
        let logit_g = (g > 0.0 && g < 1.0).then(|| (g / (1.0 - g)).ln());
        CurveRow {
            p,
            g,
            logit_g,
            mode,
            half_width,
            samples,
        }
    }
}

/// Success probability against noise level, one row per grid point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ThresholdCurve {
    pub rows: Vec<CurveRow>,
}

pub const CSV_HEADER: &str = "p,g,logit_g,mode,half_width,samples";

/// Fixed float rendering for every emitted artifact: 17 significant digits in
/// scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl ThresholdCurve {
    /// CSV with header `p,g,logit_g,mode,half_width,samples` and `\n` line
    /// endings; `logit_g` is empty where undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let logit = r.logit_g.map(format_real).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_real(r.p),
                format_real(r.g),
                logit,
                r.mode.as_str(),
                format_real(r.half_width),
                r.samples
            );
        }
        out
    }
}

/// `{0, 0.01, 0.02, ...}` up to `(q-1)/q`.
pub fn default_grid(q: u8) -> Vec<f64> {
    let top = (q as f64 - 1.0) / q as f64;
    (0..=100).map(|j| j as f64 / 100.0).take_while(|&p| p <= top + 1e-12).collect()
}

/// `start, start + step, ...` up to `stop` inclusive (with a small tolerance
/// for the last step). Points are computed as `start + j * step`.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
        return Err(Error::validation(format!("bad grid {start}:{stop}:{step}")));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count).map(|j| start + j as f64 * step).collect();
    for &p in &grid {
        check_probability(p)?;
    }
    Ok(grid)
}

/// `q`-ary entropy `(1-p) log_q(1/(1-p)) + p log_q((q-1)/p)`, extended by
/// continuity to `p = 0` and `p = 1`.
pub fn q_ary_entropy(q: u32, p: f64) -> Result<f64> {
    check_probability(p)?;
    if q < 2 {
        return Err(Error::validation(format!("alphabet size {q} < 2")));
    }
    let lnq = (q as f64).ln();
    let term = |x: f64, arg: f64| if x == 0.0 { 0.0 } else { x * arg.ln() };
    Ok((term(1.0 - p, 1.0 / (1.0 - p)) + term(p, (q as f64 - 1.0) / p)) / lnq)
}

/// `exp(-((1 - p1)/4) * sqrt(d)/q^(3/2) * (p1 - p0))`.
pub fn gbound_envelope(d_min: usize, q: u8, p0: f64, p1: f64) -> f64 {
    (-(1.0 - p1) / 4.0 * sharpness(d_min, q) * (p1 - p0)).exp()
}

fn sharpness(d_min: usize, q: u8) -> f64 {
    (d_min as f64).sqrt() / (q as f64).powf(1.5)
}

/// The decoding region of a code with its histograms, for evaluating `g` at
/// many noise levels from one enumeration of `F_q^n`.
#[derive(Debug, Clone)]
pub struct RegionProfile {
    code: LinearCode,
    region: IndicatorFn,
}

impl RegionProfile {
    pub fn new(code: &LinearCode) -> Result<RegionProfile> {
        Ok(RegionProfile {
            region: IndicatorFn::decoding_region(code)?,
            code: code.clone(),
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn region(&self) -> &IndicatorFn {
        &self.region
    }

    /// `g(p)`.
    pub fn g(&self, p: f64) -> Result<f64> {
        Ok(self.region.exact_moments(p)?.ef)
    }

    /// `g(p)` in exact rational arithmetic at the exact binary value of `p`.
    pub fn g_rational(&self, p: f64) -> Result<BigRational> {
        check_probability(p)?;
        let p = BigRational::from_float(p).expect("finite probability");
        let per = &p / BigRational::from_integer(BigInt::from(self.code.q() - 1));
        let miss = BigRational::one() - &p;
        let n = self.code.n();
        let mut total = BigRational::zero();
        for (w, &a) in self.region.weight_enumerator().iter().enumerate() {
            if a > 0 {
                let term = num_traits::pow(per.clone(), w) * num_traits::pow(miss.clone(), n - w);
                total += term * BigRational::from_integer(BigInt::from(a));
            }
        }
        Ok(total)
    }

    pub fn curve(&self, grid: &[f64]) -> Result<ThresholdCurve> {
        let rows = grid
            .par_iter()
            .map(|&p| Ok(CurveRow::new(p, self.g(p)?, Mode::Exact, 0.0, 0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThresholdCurve { rows })
    }

    /// Exact `g(p1) (1 - g(p0))` against the sharp-threshold envelope.
    pub fn gbound(&self, p0: f64, p1: f64) -> Result<GBound> {
        let d = gbound_premise(&self.code, p0, p1)?;
        let lhs = self.g(p1)? * (1.0 - self.g(p0)?);
        Ok(GBound::new(lhs, gbound_envelope(d, self.code.q(), p0, p1)))
    }
}

/// Exact success curve.
pub fn success_exact(code: &LinearCode, grid: &[f64]) -> Result<ThresholdCurve> {
    RegionProfile::new(code)?.curve(grid)
}

/// A sampled probability with its Hoeffding half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub half_width: f64,
    pub samples: u64,
}

/// Counts hits of `trial` over `samples` draws split into fixed chunks; chunk
/// `t` uses stream `seed ^ t`. Integer counts make the result independent of
/// scheduling.
fn count_hits<F, S>(samples: u64, seed: u64, init: impl Fn() -> S + Sync + Send, trial: F) -> u64
where
    F: Fn(&mut S, &mut rng::Stream) -> bool + Sync + Send,
{
    rng::chunks(samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(task, len)| {
            let mut stream = rng::stream(seed, task);
            let mut state = init();
            (0..len).filter(|_| trial(&mut state, &mut stream)).count() as u64
        })
        .sum()
}

fn estimate(hits: u64, samples: u64, delta: f64) -> Result<McEstimate> {
    Ok(McEstimate {
        value: hits as f64 / samples as f64,
        half_width: hoeffding_radius(samples, delta)?,
        samples,
    })
}

/// Monte Carlo estimate of `g(p)`: fraction of sampled error words decoded to
/// zero.
pub fn success_mc(code: &LinearCode, p: f64, samples: u64, seed: u64, delta: f64) -> Result<McEstimate> {
    check_probability(p)?;
    hoeffding_radius(samples, delta)?;
    let (q, n) = (code.q(), code.n());
    let hits = count_hits(
        samples,
        seed,
        || (vec![0u8; n], Vec::new()),
        |(z, scratch), stream| {
            fill_noisy(q, p, stream, z);
            in_omega_raw(code, z, scratch)
        },
    );
    estimate(hits, samples, delta)
}

/// Monte Carlo curve; every grid point reuses `seed`.
pub fn success_mc_curve(code: &LinearCode, grid: &[f64], samples: u64, seed: u64, delta: f64) -> Result<ThresholdCurve> {
    let rows = grid
        .iter()
        .map(|&p| {
            let est = success_mc(code, p, samples, seed, delta)?;
            Ok(CurveRow::new(p, est.value, Mode::Mc, est.half_width, samples))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve { rows })
}

/// Outcome of the support-size inequality for one received word.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeSupportCheck {
    /// Smallest `|supp(c) \ supp(z)| - (d_min/q - d(z,c) + min_c' d(z,c'))`
    /// over the nonzero codewords with `d(z,0) <= d(z,c)`; `None` if there are
    /// none.
    pub margin: Option<f64>,
    pub verdict: Verdict<Word>,
}

/// For every nonzero codeword `c` at least as far from `z` as zero is, checks
/// `|supp(c) \ supp(z)| >= d_min/q - d(z,c) + min_c' d(z,c')` in integer
/// arithmetic (both sides scaled by `q`).
pub fn verify_largesupport(code: &LinearCode, z: &Word) -> Result<LargeSupportCheck> {
    code.check_word(z)?;
    let d = code
        .min_distance()
        .ok_or_else(|| Error::precondition("the zero code has no minimum distance"))?;
    let q = code.q() as i64;
    let z = z.entries();
    let dz0 = weight_of(z);
    let nearest = code
        .codeword_slices()
        .map(|c| crate::algebra::distance_of(z, c))
        .min()
        .expect("codes contain zero") as i64;
    let mut margin: Option<i64> = None;
    let mut witness = None;
    for c in code.codeword_slices().skip(1) {
        let dzc = crate::algebra::distance_of(z, c);
        if dz0 > dzc {
            continue;
        }
        let fresh = c.iter().zip(z).filter(|(&ci, &zi)| ci != 0 && zi == 0).count() as i64;
        let scaled = q * fresh - (d as i64 - q * dzc as i64 + q * nearest);
        if scaled < 0 && witness.is_none() {
            witness = Some(Word::new(code.field(), c.to_vec())?);
        }
        margin = Some(margin.map_or(scaled, |m| m.min(scaled)));
    }
    Ok(LargeSupportCheck {
        margin: margin.map(|m| m as f64 / q as f64),
        verdict: witness.map_or(Verdict::Holds, Verdict::Violated),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBound {
    pub delta: Option<usize>,
    /// `d_min/q - 3`.
    pub bound: f64,
    pub status: Status,
}

/// Least positive boundary value of the decoding region against
/// `d_min/q - 3`.
pub fn verify_delta_bound(code: &LinearCode) -> Result<DeltaBound> {
    let d = code
        .min_distance()
        .ok_or_else(|| Error::precondition("the zero code has no minimum distance"))?;
    let region = IndicatorFn::decoding_region(code)?;
    delta_bound_for(&region, d, code.q())
}

pub(crate) fn delta_bound_for(region: &IndicatorFn, d: usize, q: u8) -> Result<DeltaBound> {
    let delta = region.delta();
    let bound = d as f64 / q as f64 - 3.0;
    let status = match delta {
        _ if d <= 3 * q as usize => Status::Vacuous,
        None => Status::Vacuous,
        // q * delta >= d - 3q, exact in integers.
        Some(v) if q as usize * v + 3 * q as usize >= d => Status::Holds,
        Some(_) => Status::Violated,
    };
    Ok(DeltaBound { delta, bound, status })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GBound {
    pub lhs: f64,
    pub rhs: f64,
    pub status: Status,
}

impl GBound {
    fn new(lhs: f64, rhs: f64) -> Self {
        let status = if lhs <= rhs { Status::Holds } else { Status::Violated };
        GBound { lhs, rhs, status }
    }

    /// `rhs - lhs`.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn gbound_premise(code: &LinearCode, p0: f64, p1: f64) -> Result<usize> {
    check_probability(p0)?;
    check_probability(p1)?;
    if p0 > p1 {
        return Err(Error::validation(format!("need p0 <= p1, got {p0} > {p1}")));
    }
    let q = code.q() as usize;
    match code.min_distance() {
        Some(d) if d >= 4 * q => Ok(d),
        Some(d) => Err(Error::precondition(format!("minimum distance {d} < 4q = {}", 4 * q))),
        None => Err(Error::precondition("the zero code has no minimum distance")),
    }
}

/// `g(p1) (1 - g(p0))` against the sharp-threshold envelope. Sampled mode
/// inflates both factors by their half-widths, so only statistically clear
/// violations are reported.
pub fn verify_gbound(code: &LinearCode, p0: f64, p1: f64, estimator: Estimator) -> Result<GBound> {
    match estimator {
        Estimator::Exact => RegionProfile::new(code)?.gbound(p0, p1),
        Estimator::MonteCarlo { samples, seed, delta } => {
            let d = gbound_premise(code, p0, p1)?;
            let g0 = success_mc(code, p0, samples, seed, delta)?;
            let g1 = success_mc(code, p1, samples, seed, delta)?;
            let lhs = (g1.value + g1.half_width) * (1.0 - g0.value + g0.half_width);
            Ok(GBound::new(lhs, gbound_envelope(d, code.q(), p0, p1)))
        }
    }
}

/// Exact success probability of the decoder that lists every codeword within
/// `radius` of the received word and outputs one uniformly at random, with
/// the zero codeword sent at noise level `p`.
pub fn list_decoder_success(code: &LinearCode, radius: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    let (q, n) = (code.q(), code.n());
    let total = ensure_enumerable("list-decoder success", q as u64, n)?;
    const BLOCK: u64 = 1 << 12;
    // (weight, list size) -> number of received words.
    let counts: Vec<BTreeMap<(usize, usize), u64>> = (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut local = BTreeMap::new();
            let mut z = vec![0u8; n];
            for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                write_digits(q, idx, &mut z);
                let w = weight_of(&z);
                if w <= radius {
                    *local.entry((w, code.ball_count(&z, radius, usize::MAX))).or_insert(0) += 1;
                }
            }
            local
        })
        .collect();
    let mut merged = BTreeMap::new();
    for local in counts {
        for (key, c) in local {
            *merged.entry(key).or_insert(0u64) += c;
        }
    }
    let probs = crate::channel::word_probabilities(q, n, p);
    Ok(merged
        .into_iter()
        .map(|((w, size), count)| count as f64 * probs[w] / size as f64)
        .sum())
}

/// The list-decoding step: at `p - n^(-1/4)` the maximum-likelihood decoder
/// does at least as well as the random list decoder, which in turn succeeds
/// with probability at least `1/(2L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListStep {
    pub p_mid: f64,
    pub ml_success: f64,
    pub list_success: f64,
    pub floor: f64,
    pub status: Status,
}

/// Full check of the list-decoding-to-symmetric-channel bound at one `(p, L,
/// delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainBound {
    pub radius: usize,
    pub shifted_p: f64,
    /// Exact success, or the lower confidence limit in sampled mode.
    pub success: f64,
    /// `1 - 2L exp(-((1-p)/4) sqrt(d)/q^(3/2) delta)`.
    pub bound: f64,
    pub status: Status,
    pub list_step: ListStep,
}

/// `1 - 2L exp(-((1-p)/4) sqrt(d)/q^(3/2) delta)`.
pub fn main_bound_value(d_min: usize, q: u8, p: f64, list_size: usize, delta: f64) -> f64 {
    1.0 - 2.0 * list_size as f64 * (-(1.0 - p) / 4.0 * sharpness(d_min, q) * delta).exp()
}

/// Checks the premises (list-decodability at radius `floor(p n)` certified
/// exhaustively, `d_min >= 4q`, nonnegative shifted noise) and then compares
/// the success probability at `p - n^(-1/4) - delta` with the bound.
pub fn verify_main_bound(
    code: &LinearCode,
    p: f64,
    list_size: usize,
    delta: f64,
    estimator: Estimator,
) -> Result<MainBound> {
    check_probability(p)?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::validation(format!("delta must be positive, got {delta}")));
    }
    let (q, n) = (code.q(), code.n());
    let d = match code.min_distance() {
        Some(d) if d >= 4 * q as usize => d,
        Some(d) => return Err(Error::precondition(format!("minimum distance {d} < 4q = {}", 4 * q as usize))),
        None => return Err(Error::precondition("the zero code has no minimum distance")),
    };
    let radius = (p * n as f64).floor() as usize;
    if let ListDecodability::Violated { witness, count } =
        code.is_list_decodable(radius, list_size, ListMode::Exhaustive)?
    {
        return Err(Error::precondition(format!(
            "not list-decodable with list size {list_size} at radius {radius}: {count} codewords near {witness}"
        )));
    }
    let p_mid = p - (n as f64).powf(-0.25);
    let shifted_p = p_mid - delta;
    if shifted_p < 0.0 {
        return Err(Error::precondition(format!(
            "shifted noise level p - n^(-1/4) - delta = {shifted_p} is negative"
        )));
    }
    let profile = RegionProfile::new(code)?;
    let success = match estimator {
        Estimator::Exact => profile.g(shifted_p)?,
        Estimator::MonteCarlo { samples, seed, delta: conf } => {
            let est = success_mc(code, shifted_p, samples, seed, conf)?;
            est.value - est.half_width
        }
    };
    let bound = main_bound_value(d, q, p, list_size, delta);
    let status = if bound <= 0.0 {
        Status::Vacuous
    } else if success >= bound {
        Status::Holds
    } else {
        Status::Violated
    };
    let ml_success = profile.g(p_mid)?;
    let list_success = list_decoder_success(code, radius, p_mid)?;
    let floor = 1.0 / (2.0 * list_size as f64);
    let list_status = if ml_success >= list_success && list_success >= floor {
        Status::Holds
    } else {
        Status::Violated
    };
    Ok(MainBound {
        radius,
        shifted_p,
        success,
        bound,
        status,
        list_step: ListStep {
            p_mid,
            ml_success,
            list_success,
            floor,
            status: list_status,
        },
    })
}

/// Probability that erasure decoding of `c` is ambiguous, i.e. some other
/// codeword agrees with `c` on every unerased coordinate.
///
/// The exact path uses linearity: the pattern is ambiguous iff the erased set
/// contains the support of a nonzero codeword. The sampled path builds the
/// candidate set of `c` directly.
pub fn erasure_ambiguity(code: &LinearCode, c: &Word, p: f64, estimator: Estimator) -> Result<McEstimate> {
    check_probability(p)?;
    code.check_word(c)?;
    if !code.contains(c) {
        return Err(Error::validation(format!("{c} is not a codeword")));
    }
    let n = code.n();
    match estimator {
        Estimator::Exact => {
            let total = ensure_enumerable("erasure-pattern enumeration", 2, n)?;
            let supports: Vec<u64> = code
                .codeword_slices()
                .skip(1)
                .map(|cw| cw.iter().enumerate().filter(|(_, &e)| e != 0).fold(0u64, |m, (i, _)| m | 1 << i))
                .collect();
            let mut ambiguous_by_size = vec![0u64; n + 1];
            for mask in 0..total {
                if supports.iter().any(|&s| s & !mask == 0) {
                    ambiguous_by_size[mask.count_ones() as usize] += 1;
                }
            }
            let value = ambiguous_by_size
                .iter()
                .enumerate()
                .map(|(e, &count)| count as f64 * p.powi(e as i32) * (1.0 - p).powi((n - e) as i32))
                .sum();
            Ok(McEstimate {
                value,
                half_width: 0.0,
                samples: 0,
            })
        }
        Estimator::MonteCarlo { samples, seed, delta } => {
            hoeffding_radius(samples, delta)?;
            let hits = count_hits(
                samples,
                seed,
                || vec![false; n],
                |mask, stream| {
                    fill_erasures(p, stream, mask);
                    erasure_ambiguous(code, c.entries(), mask)
                },
            );
            estimate(hits, samples, delta)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixBRow {
    pub p: f64,
    /// `1 - g(p)` for the augmented code.
    pub error_prob: f64,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct AppendixB {
    pub augmented: LinearCode,
    pub rows: Vec<AppendixBRow>,
}

/// Augments `base` with `e_1` and checks that the maximum-likelihood error
/// probability of the result is at least `p` at every grid point. The
/// comparison is done in exact rational arithmetic.
pub fn appendix_b_failure(base: &LinearCode, grid: &[f64]) -> Result<AppendixB> {
    let augmented = base.augment_e1()?.code;
    let profile = RegionProfile::new(&augmented)?;
    let rows = grid
        .iter()
        .map(|&p| {
            let exact_error = BigRational::one() - profile.g_rational(p)?;
            let holds = exact_error >= BigRational::from_float(p).expect("finite");
            Ok(AppendixBRow {
                p,
                error_prob: 1.0 - profile.g(p)?,
                status: if holds { Status::Holds } else { Status::Violated },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AppendixB { augmented, rows })
}
