//! Decoders.
//!
//! [`ml_decode`] is the symmetric maximum-likelihood decoder: it returns the
//! codeword whose residual `m - c` is least in the tie-breaking order of
//! [`crate::algebra::order_cmp`]. Since residuals of distinct codewords are
//! distinct, the minimum is unique and the decoder commutes with translation
//! by codewords.

use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{distance_of, order_cmp, weight_of, write_digits, Field, Word};
use crate::channel::ErasureMask;
use crate::code::LinearCode;
use crate::config::ensure_enumerable;
use crate::error::{Error, Result};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub codeword: Word,
    /// Hamming distance from the received word, equal to `residual.weight()`.
    pub distance: usize,
    /// Received word minus `codeword`.
    pub residual: Word,
}

#[inline]
fn residual_into(field: &Field, m: &[u8], c: &[u8], out: &mut [u8]) {
    for ((o, &a), &b) in out.iter_mut().zip(m).zip(c) {
        *o = field.sub(a, b);
    }
}

/// Index of the decoded codeword in `code.codeword_slices()`.
pub(crate) fn ml_index(code: &LinearCode, m: &[u8], scratch: &mut Vec<u8>, best: &mut Vec<u8>) -> usize {
    let field = code.field();
    scratch.resize(m.len(), 0);
    best.clear();
    best.extend_from_slice(m);
    let mut best_idx = 0;
    for (idx, c) in code.codeword_slices().enumerate().skip(1) {
        residual_into(field, m, c, scratch);
        if order_cmp(scratch, best) == Ordering::Less {
            std::mem::swap(scratch, best);
            best_idx = idx;
        }
    }
    best_idx
}

/// Whether the decoder maps `z` to the zero codeword, i.e. `z` precedes
/// `z - c` for every nonzero codeword `c`.
#[inline]
pub(crate) fn in_omega_raw(code: &LinearCode, z: &[u8], scratch: &mut Vec<u8>) -> bool {
    let field = code.field();
    scratch.resize(z.len(), 0);
    let wz = weight_of(z);
    for c in code.codeword_slices().skip(1) {
        // Cheap lower bound first: wt(z - c) >= wt(c) - wt(z).
        if weight_of(c) > 2 * wz {
            continue;
        }
        residual_into(field, z, c, scratch);
        if order_cmp(scratch, z) == Ordering::Less {
            return false;
        }
    }
    true
}

/// Maximum-likelihood decoding with the tie-breaking order.
pub fn ml_decode(code: &LinearCode, m: &Word) -> Result<DecodeResult> {
    code.check_word(m)?;
    let (mut scratch, mut best) = (Vec::new(), Vec::new());
    let idx = ml_index(code, m.entries(), &mut scratch, &mut best);
    let codeword = code.codewords().nth(idx).expect("index from scan");
    Ok(DecodeResult {
        distance: weight_of(&best),
        residual: Word::from_vec_unchecked(code.field(), best),
        codeword,
    })
}

/// Whether `z` lies in the decoding region of the zero codeword.
pub fn in_omega(code: &LinearCode, z: &Word) -> Result<bool> {
    code.check_word(z)?;
    Ok(in_omega_raw(code, z.entries(), &mut Vec::new()))
}

/// Exhaustively checks that `z` decodes to 0 exactly when `z + c` decodes to
/// `c`, for every word `z` and codeword `c`. The witness is a failing `(z, c)`.
pub fn omega_translate_check(code: &LinearCode) -> Result<Verdict<(Word, Word)>> {
    let (q, n) = (code.q(), code.n());
    let total = ensure_enumerable("translation-symmetry check", q as u64, n)?;
    let field = code.field();
    // decoded[i] = index of the codeword that word i decodes to.
    let decoded: Vec<u32> = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u8; n], Vec::new(), Vec::new()),
            |(z, s, b), idx| {
                write_digits(q, idx, z);
                ml_index(code, z, s, b) as u32
            },
        )
        .collect();
    let witness = (0..total).into_par_iter().find_map_first(|idx| {
        let mut z = vec![0u8; n];
        let mut shifted = vec![0u8; n];
        write_digits(q, idx, &mut z);
        let zero_region = decoded[idx as usize] == 0;
        code.codeword_slices().enumerate().find_map(|(ci, c)| {
            for ((s, &a), &b) in shifted.iter_mut().zip(&z).zip(c) {
                *s = field.add(a, b);
            }
            let lands_on_c = decoded[crate::algebra::index_of(q, &shifted) as usize] == ci as u32;
            (zero_region != lands_on_c).then(|| (z.clone(), c.to_vec()))
        })
    });
    Ok(match witness {
        None => Verdict::Holds,
        Some((z, c)) => Verdict::Violated((
            Word::from_vec_unchecked(field, z),
            Word::from_vec_unchecked(field, c),
        )),
    })
}

/// All codewords within Hamming distance `radius` of `m`.
pub fn list_decode_ball(code: &LinearCode, m: &Word, radius: usize) -> Result<Vec<Word>> {
    code.check_word(m)?;
    Ok(code
        .codewords()
        .filter(|c| distance_of(c.entries(), m.entries()) <= radius)
        .collect())
}

/// A uniformly random codeword from the radius-`radius` ball around `m`;
/// `None` when the ball holds no codeword.
pub fn randomized_list_decode<R: Rng + ?Sized>(
    code: &LinearCode,
    m: &Word,
    radius: usize,
    rng: &mut R,
) -> Result<Option<Word>> {
    let mut list = list_decode_ball(code, m, radius)?;
    if list.is_empty() {
        return Ok(None);
    }
    let pick = rng.gen_range(0..list.len());
    Ok(Some(list.swap_remove(pick)))
}

/// Codewords agreeing with `c` on every unerased coordinate.
pub fn erasure_candidates(code: &LinearCode, c: &Word, mask: &ErasureMask) -> Result<Vec<Word>> {
    code.check_word(c)?;
    if mask.len() != code.n() {
        return Err(Error::validation(format!(
            "mask length {} does not match code length {}",
            mask.len(),
            code.n()
        )));
    }
    if !code.contains(c) {
        return Err(Error::validation(format!("{c} is not a codeword")));
    }
    Ok(code
        .codewords()
        .filter(|cw| agrees_outside(cw.entries(), c.entries(), &mask.0))
        .collect())
}

#[inline]
pub(crate) fn agrees_outside(a: &[u8], b: &[u8], erased: &[bool]) -> bool {
    a.iter().zip(b).zip(erased).all(|((x, y), &e)| e || x == y)
}

/// Number of candidates, stopping at 2.
pub(crate) fn erasure_ambiguous(code: &LinearCode, c: &[u8], erased: &[bool]) -> bool {
    code.codeword_slices()
        .filter(|cw| agrees_outside(cw, c, erased))
        .nth(1)
        .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::hoeffding_radius;
    use crate::rng;
    use std::collections::HashSet;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn w(field: &Field, e: &[u8]) -> Word {
        Word::new(field, e.to_vec()).unwrap()
    }

    #[test]
    fn decode_examples() {
        let f2 = f(2);
        let rep3 = LinearCode::repetition(&f2, 3).unwrap();
        let r = ml_decode(&rep3, &w(&f2, &[1, 1, 0])).unwrap();
        assert_eq!(r.codeword, w(&f2, &[1, 1, 1]));
        assert_eq!(r.distance, 1);
        assert_eq!(r.residual, w(&f2, &[0, 0, 1]));

        let rep2 = LinearCode::repetition(&f2, 2).unwrap();
        let r = ml_decode(&rep2, &w(&f2, &[1, 0])).unwrap();
        assert_eq!(r.codeword, w(&f2, &[1, 1]));
        assert_eq!(r.residual, w(&f2, &[0, 1]));
        assert!(ml_decode(&rep2, &w(&f2, &[1, 0, 0])).is_err());
    }

    #[test]
    fn decoder_is_distance_optimal() {
        let mut r = rng::stream(5, 0);
        for trial in 0..1000u64 {
            let q = [2u32, 3, 4, 5][trial as usize % 4];
            let field = f(q);
            let n = 3 + (trial % 6) as usize;
            let k = 1 + (trial % 3) as usize;
            let code = LinearCode::random(&field, n, k.min(n), trial).unwrap();
            let m: Vec<u8> = (0..n).map(|_| r.gen_range(0..field.q())).collect();
            let m = w(&field, &m);
            let got = ml_decode(&code, &m).unwrap();
            let brute = code.codewords().map(|c| c.distance(&m).unwrap()).min().unwrap();
            assert_eq!(got.distance, brute);
            assert!(code.contains(&got.codeword));
            assert_eq!(got.residual.weight(), got.distance);
            assert_eq!(got.codeword.add(&got.residual).unwrap(), m);
        }
    }

    #[test]
    fn omega_examples() {
        let f2 = f(2);
        let rep3 = LinearCode::repetition(&f2, 3).unwrap();
        for idx in 0..8 {
            let z = Word::from_index(&f2, 3, idx);
            assert_eq!(in_omega(&rep3, &z).unwrap(), z.weight() <= 1, "{z}");
        }
        let h = LinearCode::hamming_7_4();
        for c in h.codewords() {
            assert_eq!(in_omega(&h, &c).unwrap(), c.weight() == 0);
        }
    }

    #[test]
    fn in_omega_matches_decoder() {
        for seed in 0..20 {
            let field = f([2, 3, 4][seed as usize % 3]);
            let code = LinearCode::random(&field, 5, 2, seed).unwrap();
            let total = (field.q() as u64).pow(5);
            for idx in 0..total {
                let z = Word::from_index(&field, 5, idx);
                let decoded_zero = ml_decode(&code, &z).unwrap().codeword.weight() == 0;
                assert_eq!(in_omega(&code, &z).unwrap(), decoded_zero);
            }
        }
    }

    #[test]
    fn translation_symmetry() {
        let f2 = f(2);
        assert!(omega_translate_check(&LinearCode::repetition(&f2, 3).unwrap()).unwrap().holds());
        assert!(omega_translate_check(&LinearCode::hamming_7_4()).unwrap().holds());
        assert!(omega_translate_check(&LinearCode::zero_code(&f(3), 4).unwrap()).unwrap().holds());
        assert!(omega_translate_check(&LinearCode::random(&f(9), 3, 1, 2).unwrap()).unwrap().holds());
        assert!(matches!(
            omega_translate_check(&LinearCode::repetition(&f2, 25).unwrap()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn ball_lists() {
        let f2 = f(2);
        let rep3 = LinearCode::repetition(&f2, 3).unwrap();
        let m = w(&f2, &[1, 1, 0]);
        let got: HashSet<Word> = list_decode_ball(&rep3, &m, 2).unwrap().into_iter().collect();
        assert_eq!(got, [w(&f2, &[0, 0, 0]), w(&f2, &[1, 1, 1])].into_iter().collect());
        assert!(list_decode_ball(&rep3, &m, 0).unwrap().is_empty());
        let h = LinearCode::hamming_7_4();
        assert_eq!(list_decode_ball(&h, &Word::zero(&f2, 7), 7).unwrap().len(), 16);
    }

    #[test]
    fn randomized_list_decoder() {
        let f2 = f(2);
        let rep3 = LinearCode::repetition(&f2, 3).unwrap();
        let mut r = rng::stream(9, 0);
        let m = w(&f2, &[1, 1, 1]);
        assert_eq!(randomized_list_decode(&rep3, &m, 0, &mut r).unwrap(), Some(m.clone()));
        assert_eq!(randomized_list_decode(&rep3, &m, 1, &mut r).unwrap(), Some(m));
        assert_eq!(randomized_list_decode(&rep3, &w(&f2, &[1, 1, 0]), 0, &mut r).unwrap(), None);

        let m = w(&f2, &[1, 1, 0]);
        let trials = 100_000u64;
        let zeros = (0..trials)
            .filter(|_| randomized_list_decode(&rep3, &m, 2, &mut r).unwrap().unwrap().weight() == 0)
            .count();
        let freq = zeros as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= hoeffding_radius(trials, 1e-6).unwrap());
    }

    #[test]
    fn erasure_candidate_sets() {
        let h = LinearCode::hamming_7_4();
        let f2 = f(2);
        let c = h.codewords().nth(5).unwrap();
        assert_eq!(erasure_candidates(&h, &c, &ErasureMask::none(7)).unwrap(), vec![c.clone()]);
        assert_eq!(erasure_candidates(&h, &c, &ErasureMask::all(7)).unwrap().len(), 16);
        let heavy = h.codewords().find(|cw| cw.weight() == 3).unwrap();
        let s = erasure_candidates(&h, &Word::zero(&f2, 7), &ErasureMask::from_support(&heavy)).unwrap();
        assert!(s.contains(&heavy) && s.len() >= 2);
        assert!(erasure_candidates(&h, &w(&f2, &[1, 0, 0, 0, 0, 0, 0]), &ErasureMask::none(7)).is_err());
        assert!(erasure_candidates(&h, &c, &ErasureMask::none(6)).is_err());
    }

    #[test]
    fn erasure_candidates_translate() {
        // S(c, mask) = c + S(0, mask) for every codeword and mask.
        let code = LinearCode::random(&f(3), 5, 2, 4).unwrap();
        let zero = Word::zero(code.field(), 5);
        for bits in 0..32 {
            let mask = ErasureMask::from_bits(5, bits);
            let base: HashSet<Word> = erasure_candidates(&code, &zero, &mask).unwrap().into_iter().collect();
            for c in code.codewords() {
                let got: HashSet<Word> = erasure_candidates(&code, &c, &mask).unwrap().into_iter().collect();
                let shifted: HashSet<Word> = base.iter().map(|s| s.add(&c).unwrap()).collect();
                assert_eq!(got, shifted);
                assert_eq!(erasure_ambiguous(&code, c.entries(), &mask.0), got.len() > 1);
            }
        }
    }
}
