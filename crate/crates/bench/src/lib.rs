//! Fixtures shared by the criterion benches.

use qthreshold::{Field, LinearCode, Word};

/// A `[n, k]_q` random code with a fixed seed.
pub fn code(q: u32, n: usize, k: usize) -> LinearCode {
    LinearCode::random(&Field::new(q).expect("valid alphabet"), n, k, 17).expect("fixture code")
}

/// `count` received words spread over `F_q^n`.
pub fn words(code: &LinearCode, count: u64) -> Vec<Word> {
    let total = (code.q() as u64).pow(code.n() as u32);
    let stride = (total / count).max(1);
    (0..count).map(|i| Word::from_index(code.field(), code.n(), (i * stride) % total)).collect()
}
