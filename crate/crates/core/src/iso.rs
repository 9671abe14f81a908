//! `{0,1}`-valued functions on `F_q^n` under the `p`-noisy measure.
//!
//! A function is stored as its full truth table, indexed like
//! [`Word::from_index`]. Because the noisy measure of a word depends only on
//! its weight, all expectations reduce to the histograms
//!
//! * `A_w = #{z : f(z) = 1, wt(z) = w}` and
//! * `J_{w,v} = #{z : f(z) = 1, wt(z) = w, h_f(z) = v}`,
//!
//! built once per function and then evaluated at any `p` as polynomials.
//!
//! The boundary functional `h_f(z)` is zero when `f(z) = 0` and otherwise
//! counts the zero coordinates `i` of `z` for which some nonzero `a` gives
//! `f(z with z_i = a) = 0`.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::algebra::{index_of, weight_of, write_digits, Field, Word};
use crate::channel::{check_probability, word_probabilities};
use crate::code::LinearCode;
use crate::config::ensure_enumerable;
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Which inequality between `f(z with z_i = 0)` and `f(z with z_i = a)`
/// counts as monotone decreasing.
///
/// Decoding regions satisfy [`ZeroingNeverDecreases`]: clearing an error
/// coordinate can only help decode to zero. That is the direction the
/// isoperimetric and Russo-type inequalities are checked under.
///
/// [`ZeroingNeverDecreases`]: MonotoneDirection::ZeroingNeverDecreases
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonotoneDirection {
    /// `f(z with z_i = 0) >= f(z with z_i = a)` for all `z`, `i`, `a != 0`.
    #[default]
    ZeroingNeverDecreases,
    /// `f(z with z_i = 0) <= f(z with z_i = a)`.
    ZeroingNeverIncreases,
}

/// A point where monotonicity fails: comparing `z` with coordinate `i` set to
/// 0 against `z` with coordinate `i` set to `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub z: Word,
    pub i: usize,
    pub a: u8,
}

impl std::fmt::Display for MonotoneWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "z={} coordinate={} a={}", self.z, self.i + 1, self.a)
    }
}

/// Exact expectations under the `p`-noisy measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub ef: f64,
    pub eh: f64,
    pub esqrt_h: f64,
}

/// Smallest margin over a grid and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub value: f64,
    pub p: f64,
}

#[derive(Debug, Clone)]
struct Histograms {
    weights: Vec<u64>,
    // joint[w][v]
    joint: Vec<Vec<u64>>,
}

pub struct IndicatorFn {
    field: Field,
    n: usize,
    table: Vec<bool>,
    histograms: OnceLock<Histograms>,
}

impl std::fmt::Debug for IndicatorFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ones = self.table.iter().filter(|&&b| b).count();
        write!(f, "IndicatorFn(F_{}^{}, |f^-1(1)|={ones})", self.field.q(), self.n)
    }
}

impl Clone for IndicatorFn {
    fn clone(&self) -> Self {
        IndicatorFn {
            field: self.field.clone(),
            n: self.n,
            table: self.table.clone(),
            histograms: self.histograms.clone(),
        }
    }
}

/// Words per histogram task.
const HIST_BLOCK: u64 = 1 << 12;

impl IndicatorFn {
    pub fn from_table(field: &Field, n: usize, table: Vec<bool>) -> Result<IndicatorFn> {
        let total = ensure_enumerable("truth table", field.q() as u64, n)?;
        if table.len() as u64 != total {
            return Err(Error::validation(format!(
                "truth table has {} entries, expected {total}",
                table.len()
            )));
        }
        Ok(IndicatorFn {
            field: field.clone(),
            n,
            table,
            histograms: OnceLock::new(),
        })
    }

    /// Tabulates `f` over all of `F_q^n`.
    pub fn from_fn<F>(field: &Field, n: usize, f: F) -> Result<IndicatorFn>
    where
        F: Fn(&[u8]) -> bool + Sync,
    {
        let q = field.q();
        let total = ensure_enumerable("truth table", q as u64, n)?;
        let table = (0..total)
            .into_par_iter()
            .map_init(|| vec![0u8; n], |z, idx| {
                write_digits(q, idx, z);
                f(z)
            })
            .collect();
        Self::from_table(field, n, table)
    }

    pub fn constant(field: &Field, n: usize, value: bool) -> Result<IndicatorFn> {
        let total = ensure_enumerable("truth table", field.q() as u64, n)?;
        Self::from_table(field, n, vec![value; total as usize])
    }

    /// The indicator of the single point `0`.
    pub fn zero_point(field: &Field, n: usize) -> Result<IndicatorFn> {
        let mut f = Self::constant(field, n, false)?;
        f.table[0] = true;
        Ok(f)
    }

    /// Indicator of the words the maximum-likelihood decoder maps to the zero
    /// codeword.
    ///
    /// Those are exactly the least elements of each coset `z + C` in the
    /// tie-breaking order, so one pass over `F_q^n` finds them all.
    pub fn decoding_region(code: &LinearCode) -> Result<IndicatorFn> {
        let (field, n, q) = (code.field(), code.n(), code.q());
        let total = ensure_enumerable("decoding region", q as u64, n)?;
        let mut table = vec![false; total as usize];
        let mut seen = vec![false; total as usize];
        let (mut z, mut member, mut best) = (vec![0u8; n], vec![0u8; n], vec![0u8; n]);
        for idx in 0..total {
            if seen[idx as usize] {
                continue;
            }
            write_digits(q, idx, &mut z);
            best.copy_from_slice(&z);
            let mut best_idx = idx;
            for c in code.codeword_slices() {
                for ((m, &a), &b) in member.iter_mut().zip(&z).zip(c) {
                    *m = field.add(a, b);
                }
                let m_idx = index_of(q, &member);
                seen[m_idx as usize] = true;
                if crate::algebra::order_cmp(&member, &best).is_lt() {
                    best.copy_from_slice(&member);
                    best_idx = m_idx;
                }
            }
            table[best_idx as usize] = true;
        }
        Self::from_table(field, n, table)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, z: &Word) -> Result<bool> {
        self.check(z)?;
        Ok(self.table[z.index() as usize])
    }

    fn check(&self, z: &Word) -> Result<()> {
        if z.field() != &self.field || z.len() != self.n {
            return Err(Error::validation(format!(
                "word of length {} over F_{} does not match F_{}^{}",
                z.len(),
                z.field().q(),
                self.field.q(),
                self.n
            )));
        }
        Ok(())
    }

    /// `q^i` for each coordinate.
    fn strides(&self) -> Vec<u64> {
        let q = self.field.q() as u64;
        std::iter::successors(Some(1u64), |s| Some(s * q)).take(self.n).collect()
    }

    fn h_raw(&self, idx: u64, z: &[u8], strides: &[u64]) -> usize {
        if !self.table[idx as usize] {
            return 0;
        }
        let q = self.field.q() as u64;
        z.iter()
            .zip(strides)
            .filter(|(&zi, &s)| zi == 0 && (1..q).any(|a| !self.table[(idx + a * s) as usize]))
            .count()
    }

    /// The boundary functional at `z`.
    pub fn h_value(&self, z: &Word) -> Result<usize> {
        self.check(z)?;
        Ok(self.h_raw(z.index(), z.entries(), &self.strides()))
    }

    /// First failure of monotonicity in `direction`, scanning words in index
    /// order.
    pub fn check_monotone(&self, direction: MonotoneDirection) -> Verdict<MonotoneWitness> {
        let q = self.field.q();
        let strides = self.strides();
        let total = self.table.len() as u64;
        let found = (0..total).into_par_iter().find_map_first(|idx| {
            let mut z = vec![0u8; self.n];
            write_digits(q, idx, &mut z);
            // Visit each (z with z_i = 0) once, as the base point.
            z.iter().zip(&strides).enumerate().find_map(|(i, (&zi, &s))| {
                if zi != 0 {
                    return None;
                }
                let at_zero = self.table[idx as usize];
                (1..q).find_map(|a| {
                    let at_a = self.table[(idx + a as u64 * s) as usize];
                    let bad = match direction {
                        MonotoneDirection::ZeroingNeverDecreases => at_a && !at_zero,
                        MonotoneDirection::ZeroingNeverIncreases => at_zero && !at_a,
                    };
                    bad.then_some((i, a))
                })
            })
            .map(|(i, a)| (z, i, a))
        });
        match found {
            None => Verdict::Holds,
            Some((z, i, a)) => Verdict::Violated(MonotoneWitness {
                z: Word::from_vec_unchecked(&self.field, z),
                i,
                a,
            }),
        }
    }

    /// Monotone decreasing in the direction satisfied by decoding regions.
    pub fn is_monotone_decreasing(&self) -> Verdict<MonotoneWitness> {
        self.check_monotone(MonotoneDirection::default())
    }

    fn require_monotone(&self) -> Result<()> {
        match self.is_monotone_decreasing() {
            Verdict::Holds => Ok(()),
            Verdict::Violated(w) => Err(Error::precondition(format!(
                "function is not monotone decreasing: {w}"
            ))),
        }
    }

    fn histograms(&self) -> &Histograms {
        self.histograms.get_or_init(|| {
            let q = self.field.q();
            let n = self.n;
            let strides = self.strides();
            let total = self.table.len() as u64;
            let blank = || Histograms {
                weights: vec![0; n + 1],
                joint: vec![vec![0; n + 1]; n + 1],
            };
            (0..total.div_ceil(HIST_BLOCK))
                .into_par_iter()
                .map(|b| {
                    let mut hist = blank();
                    let mut z = vec![0u8; n];
                    for idx in b * HIST_BLOCK..((b + 1) * HIST_BLOCK).min(total) {
                        if !self.table[idx as usize] {
                            continue;
                        }
                        write_digits(q, idx, &mut z);
                        let w = weight_of(&z);
                        hist.weights[w] += 1;
                        hist.joint[w][self.h_raw(idx, &z, &strides)] += 1;
                    }
                    hist
                })
                .reduce(blank, |mut acc, h| {
                    for (a, b) in acc.weights.iter_mut().zip(&h.weights) {
                        *a += b;
                    }
                    for (ra, rb) in acc.joint.iter_mut().zip(&h.joint) {
                        for (a, b) in ra.iter_mut().zip(rb) {
                            *a += b;
                        }
                    }
                    acc
                })
        })
    }

    /// `A_w`: number of words of weight `w` where `f = 1`.
    pub fn weight_enumerator(&self) -> &[u64] {
        &self.histograms().weights
    }

    /// `J[w][v]`: number of words of weight `w` with `f = 1` and `h_f = v`.
    pub fn joint_histogram(&self) -> &[Vec<u64>] {
        &self.histograms().joint
    }

    /// Least nonzero value of `h_f`, or `None` if `h_f` vanishes everywhere.
    pub fn delta(&self) -> Option<usize> {
        (1..=self.n).find(|&v| self.joint_histogram().iter().any(|row| row[v] > 0))
    }

    /// `E[f]`, `E[h_f]` and `E[sqrt(h_f)]` at noise level `p`.
    pub fn exact_moments(&self, p: f64) -> Result<Moments> {
        check_probability(p)?;
        let probs = word_probabilities(self.field.q(), self.n, p);
        let hist = self.histograms();
        let ef = hist.weights.iter().zip(&probs).map(|(&a, pw)| a as f64 * pw).sum();
        let (mut eh, mut esqrt_h) = (0.0, 0.0);
        for (row, pw) in hist.joint.iter().zip(&probs) {
            for (v, &count) in row.iter().enumerate().skip(1) {
                let mass = count as f64 * pw;
                eh += mass * v as f64;
                esqrt_h += mass * (v as f64).sqrt();
            }
        }
        Ok(Moments { ef, eh, esqrt_h })
    }

    /// Analytic `d/dp E[f]`.
    pub fn expectation_derivative(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        let (n, q1) = (self.n, self.field.q() as f64 - 1.0);
        let per = p / q1;
        let d = self
            .weight_enumerator()
            .iter()
            .enumerate()
            .map(|(w, &a)| {
                let rising = if w == 0 {
                    0.0
                } else {
                    w as f64 / q1 * per.powi(w as i32 - 1) * (1.0 - p).powi((n - w) as i32)
                };
                let falling = if w == n {
                    0.0
                } else {
                    (n - w) as f64 * per.powi(w as i32) * (1.0 - p).powi((n - w - 1) as i32)
                };
                a as f64 * (rising - falling)
            })
            .sum();
        Ok(d)
    }

    fn min_margin(&self, grid: &[f64], margin: impl Fn(f64) -> Result<f64>) -> Result<Margin> {
        self.require_monotone()?;
        let mut best: Option<Margin> = None;
        for &p in grid {
            let value = margin(p)?;
            if best.is_none_or(|b| value < b.value) {
                best = Some(Margin { value, p });
            }
        }
        best.ok_or_else(|| Error::validation("empty noise grid"))
    }

    /// Minimum over the grid of `E[sqrt(h_f)] - (1-p)/2 * E[f](1 - E[f])`.
    pub fn verify_talagrand(&self, grid: &[f64]) -> Result<Margin> {
        self.min_margin(grid, |p| {
            let m = self.exact_moments(p)?;
            Ok(m.esqrt_h - (1.0 - p) / 2.0 * m.ef * (1.0 - m.ef))
        })
    }

    /// Minimum over the grid of
    /// `E[h_f] - (1-p)/2 * sqrt(delta) * E[f](1 - E[f])`, with the bound taken
    /// as 0 when `h_f` vanishes.
    pub fn verify_iso(&self, grid: &[f64]) -> Result<Margin> {
        let root_delta = self.delta().map_or(0.0, |d| (d as f64).sqrt());
        self.min_margin(grid, |p| {
            let m = self.exact_moments(p)?;
            Ok(m.eh - (1.0 - p) / 2.0 * root_delta * m.ef * (1.0 - m.ef))
        })
    }

    /// Minimum over the grid of `-d/dp E[f] - E[h_f] / (q-1)`.
    pub fn verify_russo(&self, grid: &[f64]) -> Result<Margin> {
        let q1 = self.field.q() as f64 - 1.0;
        self.min_margin(grid, |p| {
            let m = self.exact_moments(p)?;
            Ok(-self.expectation_derivative(p)? - m.eh / q1)
        })
    }
}

/// Checks monotonicity at a single base point through an oracle, for lengths
/// too large to tabulate. Compares `z` with coordinate `i` cleared against
/// every nonzero substitution at `i`.
pub fn monotone_witness_at<F>(field: &Field, f: F, z: &Word, direction: MonotoneDirection) -> Option<MonotoneWitness>
where
    F: Fn(&[u8]) -> bool,
{
    let mut probe = z.entries().to_vec();
    for i in 0..z.len() {
        let original = probe[i];
        probe[i] = 0;
        let at_zero = f(&probe);
        for a in 1..field.q() {
            probe[i] = a;
            let at_a = f(&probe);
            let bad = match direction {
                MonotoneDirection::ZeroingNeverDecreases => at_a && !at_zero,
                MonotoneDirection::ZeroingNeverIncreases => at_zero && !at_a,
            };
            if bad {
                return Some(MonotoneWitness { z: z.clone(), i, a });
            }
        }
        probe[i] = original;
    }
    None
}

/// Largest `q^n` accepted by [`enumerate_monotone`].
pub const MONOTONE_ENUM_MAX_POINTS: u64 = 9;

/// Every monotone decreasing indicator on `F_q^n`, in truth-table order.
/// Restricted to `q^n <= 9`.
pub fn enumerate_monotone(field: &Field, n: usize) -> Result<impl Iterator<Item = IndicatorFn>> {
    let points = match crate::config::checked_pow(field.q() as u64, n) {
        Some(p) if p <= MONOTONE_ENUM_MAX_POINTS => p,
        _ => {
            return Err(Error::Resource {
                what: format!("monotone enumeration over F_{}^{n}", field.q()),
                needed: (field.q() as u128).saturating_pow(n as u32),
                cap: MONOTONE_ENUM_MAX_POINTS as u128,
            })
        }
    };
    let field = field.clone();
    Ok((0u64..1 << points).filter_map(move |mask| {
        let table = (0..points).map(|i| mask >> i & 1 == 1).collect();
        let f = IndicatorFn::from_table(&field, n, table).expect("size checked");
        f.is_monotone_decreasing().holds().then_some(f)
    }))
}
