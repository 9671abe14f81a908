//! Linear codes given by a generator matrix.
//!
//! All `q^k` codewords are enumerated once at construction and kept in a flat
//! buffer; every decoder and verifier in the crate scans them.

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{distance_of, weight_of, write_digits, Field, Word};
use crate::config::{checked_pow, ensure_enumerable, CODEWORD_CAP};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    n: usize,
    generator: Vec<Vec<u8>>,
    // q^k codewords, n symbols each; codeword 0 is the zero word.
    codewords: Vec<u8>,
    d_min: Option<usize>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]_{}", self.n, self.k(), self.field.q())?;
        if let Some(d) = self.d_min {
            write!(f, " d={d}")?;
        }
        Ok(())
    }
}

/// How [`LinearCode::is_list_decodable`] searches for crowded balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListMode {
    /// Every center in `F_q^n`; subject to the enumeration cap.
    Exhaustive,
    /// `budget` uniformly random centers drawn from `seed`.
    Sampled { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListDecodability {
    Holds,
    /// A center whose ball holds `count > L` codewords.
    Violated { witness: Word, count: usize },
    /// Sampling found no violation.
    Inconclusive { checked: u64 },
}

/// Result of [`LinearCode::augment_e1`].
#[derive(Debug, Clone)]
pub struct Augmentation {
    pub code: LinearCode,
    /// `e_1` was already a codeword, so `code` is the input unchanged.
    pub unchanged: bool,
}

/// Row-reduces a copy of `rows` and returns its rank.
pub fn rank(field: &Field, rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = field.inv(m[r][col]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

impl LinearCode {
    /// The row space of `rows`. Rows must be nonempty, of one common positive
    /// length, and linearly independent.
    pub fn from_generator(field: &Field, rows: Vec<Vec<u8>>) -> Result<LinearCode> {
        let n = rows.first().map(Vec::len).ok_or_else(|| Error::validation("generator matrix has no rows"))?;
        if n == 0 {
            return Err(Error::validation("block length must be positive"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::validation(format!(
                "row {} has length {}, expected {n}",
                i + 1,
                rows[i].len()
            )));
        }
        if rows.iter().flatten().any(|&e| !field.is_element(e)) {
            return Err(Error::validation(format!(
                "generator entries must lie in 0..{}",
                field.q()
            )));
        }
        let r = rank(field, &rows);
        if r < rows.len() {
            return Err(Error::validation(format!(
                "generator matrix has rank {r} < {} rows",
                rows.len()
            )));
        }
        Self::build(field, n, rows)
    }

    /// The code `{0}` of length `n` (dimension 0).
    pub fn zero_code(field: &Field, n: usize) -> Result<LinearCode> {
        if n == 0 {
            return Err(Error::validation("block length must be positive"));
        }
        Self::build(field, n, Vec::new())
    }

    fn build(field: &Field, n: usize, generator: Vec<Vec<u8>>) -> Result<LinearCode> {
        let k = generator.len();
        let size = checked_pow(field.q() as u64, k).filter(|&s| s <= CODEWORD_CAP).ok_or_else(|| {
            Error::Resource {
                what: format!("codeword table of a dimension-{k} code over F_{}", field.q()),
                needed: (field.q() as u128).saturating_pow(k as u32),
                cap: CODEWORD_CAP as u128,
            }
        })?;
        let mut codewords = vec![0u8; size as usize * n];
        let mut message = vec![0u8; k];
        for (m, cw) in codewords.chunks_exact_mut(n).enumerate() {
            write_digits(field.q(), m as u64, &mut message);
            for (coef, row) in message.iter().zip(&generator) {
                if *coef != 0 {
                    for (x, g) in cw.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(*coef, *g));
                    }
                }
            }
        }
        let d_min = codewords.chunks_exact(n).skip(1).map(weight_of).min();
        Ok(LinearCode {
            field: field.clone(),
            n,
            generator,
            codewords,
            d_min,
        })
    }

    /// The `[n, 1]` repetition code.
    pub fn repetition(field: &Field, n: usize) -> Result<LinearCode> {
        Self::from_generator(field, vec![vec![1; n]])
    }

    /// The binary `[7, 4]` Hamming code in systematic form.
    pub fn hamming_7_4() -> LinearCode {
        let f2 = Field::new(2).expect("F_2");
        let rows = vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        Self::from_generator(&f2, rows).expect("Hamming generator has full rank")
    }

    /// A uniformly random full-rank `k x n` generator, redrawn until it has
    /// rank `k`. Deterministic in `seed`.
    pub fn random(field: &Field, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
        if k > n {
            return Err(Error::validation(format!("dimension {k} exceeds length {n}")));
        }
        if k == 0 {
            return Self::zero_code(field, n);
        }
        let mut rng = rng::stream(seed, 0);
        loop {
            let rows: Vec<Vec<u8>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect())
                .collect();
            if rank(field, &rows) == k {
                return Self::build(field, n, rows);
            }
        }
    }

    /// The span of this code and the first standard basis vector.
    pub fn augment_e1(&self) -> Result<Augmentation> {
        let e1 = Word::unit(&self.field, self.n, 0)?;
        if self.contains(&e1) {
            return Ok(Augmentation {
                code: self.clone(),
                unchanged: true,
            });
        }
        let mut rows = vec![e1.into_entries()];
        rows.extend(self.generator.iter().cloned());
        Ok(Augmentation {
            code: Self::from_generator(&self.field, rows)?,
            unchanged: false,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u8 {
        self.field.q()
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension.
    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    /// `log_q |C| / n = k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn size(&self) -> usize {
        self.codewords.len() / self.n
    }

    /// Raw codeword entries, zero word first.
    pub fn codeword_slices(&self) -> impl ExactSizeIterator<Item = &[u8]> + Clone + '_ {
        self.codewords.chunks_exact(self.n)
    }

    pub fn codewords(&self) -> impl ExactSizeIterator<Item = Word> + '_ {
        self.codeword_slices()
            .map(|c| Word::from_vec_unchecked(&self.field, c.to_vec()))
    }

    /// Minimum distance, i.e. the least nonzero codeword weight; `None` for the
    /// zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.d_min
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.field() == &self.field
            && w.len() == self.n
            && self.codeword_slices().any(|c| c == w.entries())
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        if w.field() != &self.field || w.len() != self.n {
            return Err(Error::validation(format!(
                "word of length {} over F_{} does not match {self:?}",
                w.len(),
                w.field().q()
            )));
        }
        Ok(())
    }

    /// Number of codewords within distance `radius` of `center`, stopping
    /// early once it exceeds `limit`.
    pub(crate) fn ball_count(&self, center: &[u8], radius: usize, limit: usize) -> usize {
        let mut count = 0;
        for c in self.codeword_slices() {
            if distance_of(center, c) <= radius {
                count += 1;
                if count > limit {
                    break;
                }
            }
        }
        count
    }

    /// Whether every Hamming ball of the given radius holds at most `list_size`
    /// codewords.
    pub fn is_list_decodable(
        &self,
        radius: usize,
        list_size: usize,
        mode: ListMode,
    ) -> Result<ListDecodability> {
        let q = self.q();
        match mode {
            ListMode::Exhaustive => {
                let total = ensure_enumerable("list-decodability scan", q as u64, self.n)?;
                const BLOCK: u64 = 4096;
                let blocks = total.div_ceil(BLOCK);
                let found = (0..blocks).into_par_iter().find_map_first(|b| {
                    let mut z = vec![0u8; self.n];
                    (b * BLOCK..((b + 1) * BLOCK).min(total)).find_map(|idx| {
                        write_digits(q, idx, &mut z);
                        let count = self.ball_count(&z, radius, list_size);
                        (count > list_size).then(|| (z.clone(), count))
                    })
                });
                Ok(match found {
                    Some((z, _)) => ListDecodability::Violated {
                        count: self.ball_count(&z, radius, usize::MAX),
                        witness: Word::from_vec_unchecked(&self.field, z),
                    },
                    None => ListDecodability::Holds,
                })
            }
            ListMode::Sampled { budget, seed } => {
                let mut rng = rng::stream(seed, 0);
                let mut z = vec![0u8; self.n];
                for _ in 0..budget {
                    z.iter_mut().for_each(|e| *e = rng.gen_range(0..q));
                    let count = self.ball_count(&z, radius, list_size);
                    if count > list_size {
                        return Ok(ListDecodability::Violated {
                            count: self.ball_count(&z, radius, usize::MAX),
                            witness: Word::from_vec_unchecked(&self.field, z),
                        });
                    }
                }
                Ok(ListDecodability::Inconclusive { checked: budget })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn words(code: &LinearCode) -> HashSet<Vec<u8>> {
        code.codeword_slices().map(<[u8]>::to_vec).collect()
    }

    /// Closure under addition and scaling, zero membership.
    fn assert_linear(code: &LinearCode) {
        let set = words(code);
        let field = code.field();
        assert!(set.contains(&vec![0; code.n()]));
        assert_eq!(set.len(), code.size());
        for a in code.codewords() {
            for alpha in 0..field.q() {
                assert!(set.contains(a.scale(alpha).unwrap().entries()));
            }
            for b in code.codewords() {
                assert!(set.contains(a.add(&b).unwrap().entries()));
            }
        }
    }

    /// Minimum pairwise distance by brute force.
    fn pairwise_min(code: &LinearCode) -> Option<usize> {
        let all: Vec<&[u8]> = code.codeword_slices().collect();
        let mut best = None;
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                let d = distance_of(a, b);
                best = Some(best.map_or(d, |x: usize| x.min(d)));
            }
        }
        best
    }

    #[test]
    fn repetition_codes() {
        let rep = LinearCode::repetition(&f(2), 3).unwrap();
        assert_eq!(rep.size(), 2);
        assert_eq!(rep.min_distance(), Some(3));
        let rep3 = LinearCode::repetition(&f(3), 4).unwrap();
        assert_eq!(
            words(&rep3),
            [vec![0; 4], vec![1; 4], vec![2; 4]].into_iter().collect()
        );
    }

    #[test]
    fn hamming_code() {
        let h = LinearCode::hamming_7_4();
        assert_eq!(h.size(), 16);
        assert_eq!(h.min_distance(), Some(3));
        assert_eq!(pairwise_min(&h), Some(3));
        assert_linear(&h);
    }

    #[test]
    fn rank_deficient_rejected() {
        let err = LinearCode::from_generator(&f(3), vec![vec![1, 2, 0], vec![2, 1, 0]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(LinearCode::from_generator(&f(2), vec![]).is_err());
        assert!(LinearCode::from_generator(&f(2), vec![vec![1, 1], vec![1]]).is_err());
        assert!(LinearCode::from_generator(&f(2), vec![vec![2, 1]]).is_err());
    }

    #[test]
    fn codeword_cap_enforced() {
        let rows: Vec<Vec<u8>> = (0..21)
            .map(|i| (0..21).map(|j| u8::from(i == j)).collect())
            .collect();
        assert!(matches!(
            LinearCode::from_generator(&f(2), rows),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn prime_power_code_is_linear() {
        let code = LinearCode::random(&f(4), 5, 2, 9).unwrap();
        assert_linear(&code);
        assert_eq!(code.min_distance(), pairwise_min(&code));
    }

    #[test]
    fn random_codes_deterministic_and_full_rank() {
        let a = LinearCode::random(&f(2), 8, 3, 1).unwrap();
        let b = LinearCode::random(&f(2), 8, 3, 1).unwrap();
        assert_eq!(a.generator(), b.generator());
        for seed in 0..100 {
            let code = LinearCode::random(&f(3), 6, 2, seed).unwrap();
            assert_eq!(rank(code.field(), code.generator()), 2);
            assert_eq!(words(&code).len(), 9);
            assert_eq!(code.min_distance(), pairwise_min(&code));
        }
        assert!(LinearCode::random(&f(2), 3, 4, 0).is_err());
    }

    #[test]
    fn list_decodability_examples() {
        let rep = LinearCode::repetition(&f(2), 3).unwrap();
        assert_eq!(rep.is_list_decodable(1, 1, ListMode::Exhaustive).unwrap(), ListDecodability::Holds);
        match rep.is_list_decodable(2, 1, ListMode::Exhaustive).unwrap() {
            ListDecodability::Violated { witness, count } => {
                assert_eq!(count, 2);
                assert!(witness.weight() >= 1 && witness.weight() <= 2);
            }
            other => panic!("expected violation, got {other:?}"),
        }
        let h = LinearCode::hamming_7_4();
        assert_eq!(h.is_list_decodable(1, 1, ListMode::Exhaustive).unwrap(), ListDecodability::Holds);
        // Ball of radius 2 around a weight-1 word reaches 0 and three weight-3 codewords.
        assert!(matches!(
            h.is_list_decodable(2, 1, ListMode::Sampled { budget: 200, seed: 3 }).unwrap(),
            ListDecodability::Violated { .. }
        ));
        assert_eq!(
            h.is_list_decodable(1, 1, ListMode::Sampled { budget: 50, seed: 3 }).unwrap(),
            ListDecodability::Inconclusive { checked: 50 }
        );
    }

    #[test]
    fn unique_decoding_radius_always_list_decodable() {
        for seed in 0..30 {
            let q = [2u32, 3, 5][seed as usize % 3];
            let code = LinearCode::random(&f(q), 6, 2, seed).unwrap();
            let t = (code.min_distance().unwrap() - 1) / 2;
            assert_eq!(
                code.is_list_decodable(t, 1, ListMode::Exhaustive).unwrap(),
                ListDecodability::Holds
            );
        }
    }

    #[test]
    fn exhaustive_scan_respects_cap() {
        let code = LinearCode::repetition(&f(2), 25).unwrap();
        assert!(matches!(
            code.is_list_decodable(1, 1, ListMode::Exhaustive),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn augment_e1_examples() {
        let rep = LinearCode::repetition(&f(2), 3).unwrap();
        let aug = rep.augment_e1().unwrap();
        assert!(!aug.unchanged);
        assert_eq!(
            words(&aug.code),
            [vec![0, 0, 0], vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 1]].into_iter().collect()
        );
        let h = LinearCode::hamming_7_4();
        let aug = h.augment_e1().unwrap().code;
        assert_eq!(aug.k(), 5);
        assert_eq!(aug.min_distance(), Some(1));
        assert!((aug.rate() - h.rate() - 1.0 / 7.0).abs() < 1e-15);
        assert_linear(&aug);
        let again = aug.augment_e1().unwrap();
        assert!(again.unchanged);
        assert_eq!(again.code.k(), 5);
    }

    #[test]
    fn augmentation_at_most_doubles_lists() {
        // |B_t(z) ∩ C| <= 2 |B_{t+1}(z) ∩ C'| for every center and radius.
        for base in [LinearCode::hamming_7_4(), LinearCode::random(&f(2), 7, 3, 5).unwrap()] {
            let aug = base.augment_e1().unwrap().code;
            let mut z = vec![0u8; 7];
            for idx in 0..128 {
                write_digits(2, idx, &mut z);
                for t in 0..7 {
                    let small = aug.ball_count(&z, t, usize::MAX);
                    let big = base.ball_count(&z, t + 1, usize::MAX);
                    assert!(small <= 2 * big, "z={z:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn zero_code() {
        let code = LinearCode::zero_code(&f(3), 4).unwrap();
        assert_eq!(code.size(), 1);
        assert_eq!(code.min_distance(), None);
        assert_eq!(code.k(), 0);
    }
}
