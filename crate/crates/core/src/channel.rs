//! Noise models.
//!
//! A `p`-noisy word of `F_q^n` has independent coordinates, each `0` with
//! probability `1 - p` and each nonzero symbol with probability `p/(q-1)`.
//! Sending codeword `c` through the `q`-ary symmetric channel yields `c + z`
//! for such a `z`.

use rand::Rng;

use crate::algebra::{Field, Word};
use crate::error::{Error, Result};

/// Lengths above this use log-space probabilities.
const LINEAR_SPACE_MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    p: f64,
    field: Field,
    n: usize,
}

impl NoiseSpec {
    pub fn new(field: &Field, n: usize, p: f64) -> Result<NoiseSpec> {
        check_probability(p)?;
        Ok(NoiseSpec {
            p,
            field: field.clone(),
            n,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Draws a `p`-noisy word.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        let mut z = vec![0u8; self.n];
        fill_noisy(self.field.q(), self.p, rng, &mut z);
        Word::from_vec_unchecked(&self.field, z)
    }

    /// Probability of one fixed word of weight `w`:
    /// `(p/(q-1))^w (1-p)^(n-w)`.
    pub fn vector_probability(&self, w: usize) -> Result<f64> {
        if w > self.n {
            return Err(Error::validation(format!("weight {w} exceeds length {}", self.n)));
        }
        Ok(fixed_word_probability(self.field.q(), self.n, self.p, w))
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::validation(format!("probability {p} is outside [0, 1]")))
    }
}

/// Overwrites `out` with a `p`-noisy word.
#[inline]
pub(crate) fn fill_noisy<R: Rng + ?Sized>(q: u8, p: f64, rng: &mut R, out: &mut [u8]) {
    for e in out.iter_mut() {
        *e = if rng.gen::<f64>() < p { rng.gen_range(1..q) } else { 0 };
    }
}

fn fixed_word_probability(q: u8, n: usize, p: f64, w: usize) -> f64 {
    let per_symbol = p / (q as f64 - 1.0);
    if n <= LINEAR_SPACE_MAX_N {
        per_symbol.powi(w as i32) * (1.0 - p).powi((n - w) as i32)
    } else {
        // A factor with exponent zero contributes 1 even when its base is 0.
        let term = |count: usize, base: f64| if count == 0 { 0.0 } else { count as f64 * base.ln() };
        (term(w, per_symbol) + term(n - w, 1.0 - p)).exp()
    }
}

/// `[P(w) for w in 0..=n]`, the probability of each fixed word of weight `w`.
pub fn word_probabilities(q: u8, n: usize, p: f64) -> Vec<f64> {
    (0..=n).map(|w| fixed_word_probability(q, n, p, w)).collect()
}

/// `ln C(n, w)` for `w in 0..=n`.
pub(crate) fn ln_binomials(n: usize) -> Vec<f64> {
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    (0..=n).map(|w| ln_fact[n] - ln_fact[w] - ln_fact[n - w]).collect()
}

/// Probability that a `p`-noisy word has weight exactly `w`, for each `w`.
pub fn weight_distribution(n: usize, p: f64) -> Vec<f64> {
    let ln_binom = ln_binomials(n);
    (0..=n)
        .map(|w| {
            let term = |count: usize, base: f64| if count == 0 { 0.0 } else { count as f64 * base.ln() };
            (ln_binom[w] + term(w, p) + term(n - w, 1.0 - p)).exp()
        })
        .collect()
}

/// Erased coordinates of a received word; `true` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasureMask(pub Vec<bool>);

impl ErasureMask {
    pub fn none(n: usize) -> Self {
        ErasureMask(vec![false; n])
    }

    pub fn all(n: usize) -> Self {
        ErasureMask(vec![true; n])
    }

    /// Erases exactly the support of `w`.
    pub fn from_support(w: &Word) -> Self {
        ErasureMask(w.entries().iter().map(|&e| e != 0).collect())
    }

    /// Mask whose bit `i` is bit `i` of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        ErasureMask((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn erased(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Draws each coordinate erased independently with probability `p`.
    pub fn sample<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        check_probability(p)?;
        let mut mask = ErasureMask::none(n);
        fill_erasures(p, rng, &mut mask.0);
        Ok(mask)
    }
}

#[inline]
pub(crate) fn fill_erasures<R: Rng + ?Sized>(p: f64, rng: &mut R, out: &mut [bool]) {
    for b in out.iter_mut() {
        *b = rng.gen::<f64>() < p;
    }
}

/// Two-sided Hoeffding radius for the mean of `samples` draws in `[0, 1]`:
/// `sqrt(samples * ln(1/delta) / 2) / samples`. The empirical mean misses the
/// true mean by more than this with probability at most `2 * delta`.
pub fn hoeffding_radius(samples: u64, delta: f64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::validation("Hoeffding radius needs at least one sample"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::validation(format!("confidence {delta} is outside (0, 1)")));
    }
    let m = samples as f64;
    Ok((m * (1.0 / delta).ln() / 2.0).sqrt() / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn degenerate_noise_levels() {
        let mut r = rng::stream(1, 0);
        let clean = NoiseSpec::new(&f(5), 12, 0.0).unwrap();
        let full = NoiseSpec::new(&f(2), 12, 1.0).unwrap();
        for _ in 0..100 {
            assert_eq!(clean.sample(&mut r).weight(), 0);
            assert!(full.sample(&mut r).entries().iter().all(|&e| e == 1));
        }
        assert!(NoiseSpec::new(&f(2), 3, 1.5).is_err());
        assert!(NoiseSpec::new(&f(2), 3, f64::NAN).is_err());
    }

    #[test]
    fn symbol_rate_within_hoeffding_band() {
        let spec = NoiseSpec::new(&f(3), 10_000, 0.3).unwrap();
        let z = spec.sample(&mut rng::stream(7, 0));
        let rate = z.weight() as f64 / 10_000.0;
        let band = hoeffding_radius(10_000, 1e-6).unwrap();
        assert!((rate - 0.3).abs() <= band, "rate {rate}");
        // Nonzero symbols are split evenly between 1 and 2.
        let ones = z.entries().iter().filter(|&&e| e == 1).count() as f64;
        let frac = ones / z.weight() as f64;
        assert!((frac - 0.5).abs() <= hoeffding_radius(z.weight() as u64, 1e-6).unwrap());
    }

    #[test]
    fn weight_histogram_matches_binomial() {
        // 10^6 draws of length 6 over F_5 at p = 0.25; every weight class
        // frequency within its Hoeffding band.
        let (n, p, draws) = (6usize, 0.25, 1_000_000u64);
        let spec = NoiseSpec::new(&f(5), n, p).unwrap();
        let mut r = rng::stream(11, 0);
        let mut hist = vec![0u64; n + 1];
        for _ in 0..draws {
            hist[spec.sample(&mut r).weight()] += 1;
        }
        let expected = weight_distribution(n, p);
        let band = hoeffding_radius(draws, 1e-6).unwrap();
        for w in 0..=n {
            let freq = hist[w] as f64 / draws as f64;
            assert!((freq - expected[w]).abs() <= band, "w={w}");
        }
    }

    #[test]
    fn vector_probability_examples() {
        let spec = NoiseSpec::new(&f(2), 3, 0.2).unwrap();
        assert!((spec.vector_probability(0).unwrap() - 0.512).abs() < 1e-15);
        let one = NoiseSpec::new(&f(2), 1, 0.7).unwrap();
        assert!((one.vector_probability(1).unwrap() - 0.7).abs() < 1e-15);
        assert!(spec.vector_probability(4).is_err());
    }

    fn normalization(q: u8, n: usize, p: f64) -> f64 {
        let ln_binom = ln_binomials(n);
        word_probabilities(q, n, p)
            .iter()
            .enumerate()
            .map(|(w, pw)| ln_binom[w].exp().round() * (q as f64 - 1.0).powi(w as i32) * pw)
            .sum()
    }

    #[test]
    fn probabilities_normalize() {
        assert!((normalization(3, 6, 0.37) - 1.0).abs() < 1e-12);
        for q in [2u8, 3, 4, 5, 7] {
            for n in [1usize, 4, 9, 15] {
                for p in [0.0, 0.01, 0.3, 0.5, 0.99, 1.0] {
                    assert!((normalization(q, n, p) - 1.0).abs() < 1e-12, "q={q} n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn log_space_agrees_with_linear_space() {
        for w in [0usize, 1, 30, 70, 100] {
            let p = 0.05;
            let direct = (p / 2.0f64).powi(w as i32) * (1.0 - p).powi((100 - w) as i32);
            let got = fixed_word_probability(3, 100, p, w);
            assert!((got - direct).abs() <= 1e-12 * direct.max(f64::MIN_POSITIVE), "w={w}");
        }
        assert_eq!(fixed_word_probability(2, 100, 0.0, 0), 1.0);
        assert_eq!(fixed_word_probability(2, 100, 0.0, 1), 0.0);
        assert_eq!(fixed_word_probability(2, 100, 1.0, 100), 1.0);
    }

    #[test]
    fn erasure_masks() {
        let mut r = rng::stream(2, 0);
        assert_eq!(ErasureMask::sample(9, 0.0, &mut r).unwrap(), ErasureMask::none(9));
        assert_eq!(ErasureMask::sample(9, 1.0, &mut r).unwrap(), ErasureMask::all(9));
        let draws = 100_000u64;
        let total: usize = (0..draws)
            .map(|_| ErasureMask::sample(20, 0.4, &mut r).unwrap().erased())
            .sum();
        // Mean of weight/20 is 0.4; band on the normalized mean.
        let mean = total as f64 / draws as f64 / 20.0;
        assert!((mean - 0.4).abs() <= hoeffding_radius(draws, 1e-6).unwrap());
        assert_eq!(ErasureMask::from_bits(4, 0b1010).0, vec![false, true, false, true]);
    }

    #[test]
    fn hoeffding_values() {
        let r = hoeffding_radius(1_000_000, 1e-6).unwrap();
        assert!((r - 2.628_29e-3).abs() < 1e-7, "{r}");
        let half = hoeffding_radius(2, 0.5).unwrap();
        assert!((half - (2f64.ln() / 4.0).sqrt()).abs() < 1e-15);
        let mut last = f64::INFINITY;
        for m in [1u64, 2, 10, 1000, 100_000] {
            let r = hoeffding_radius(m, 0.01).unwrap();
            assert!(r < last);
            last = r;
        }
        assert!(hoeffding_radius(0, 0.1).is_err());
        assert!(hoeffding_radius(5, 1.0).is_err());
        assert!(hoeffding_radius(5, 0.0).is_err());
    }
}
