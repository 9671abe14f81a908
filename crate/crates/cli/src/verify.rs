//! The `verify` corpus and one function per verifier.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use qthreshold::decode::omega_translate_check;
use qthreshold::iso::enumerate_monotone;
use qthreshold::threshold::{appendix_b_failure, verify_delta_bound, verify_largesupport, RegionProfile};
use qthreshold::{
    rng, Field, IndicatorFn, LinearCode, MonotoneDirection, NoiseSpec, Status, Verdict,
};

use crate::report::{word, Entry, Real, VerdictLabel};
use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Verifier {
    Talagrand,
    Russo,
    Iso,
    DeltaBound,
    Gbound,
    Largesupport,
    Symmetry,
    AppendixB,
}

impl Verifier {
    pub const ALL: [Verifier; 8] = [
        Verifier::Talagrand,
        Verifier::Russo,
        Verifier::Iso,
        Verifier::DeltaBound,
        Verifier::Gbound,
        Verifier::Largesupport,
        Verifier::Symmetry,
        Verifier::AppendixB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verifier::Talagrand => "talagrand",
            Verifier::Russo => "russo",
            Verifier::Iso => "iso",
            Verifier::DeltaBound => "delta-bound",
            Verifier::Gbound => "gbound",
            Verifier::Largesupport => "largesupport",
            Verifier::Symmetry => "symmetry",
            Verifier::AppendixB => "appendix-b",
        }
    }
}

/// Words of `F_q^n` the corpus may enumerate per function.
pub const CORPUS_LIMIT: u64 = 6561;

/// Tolerances for the floating-point inequality margins.
pub const INEQUALITY_TOL: f64 = 1e-12;
pub const RUSSO_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub verifiers: Vec<Verifier>,
    pub qs: Vec<u32>,
    pub nmax: usize,
    pub codes: usize,
    pub instances: u64,
    pub seed: u64,
    pub direction: MonotoneDirection,
}

#[derive(Debug, Clone)]
pub struct NamedCode {
    pub name: String,
    pub code: LinearCode,
}

#[derive(Debug, Clone)]
pub struct NamedFn {
    pub name: String,
    pub f: IndicatorFn,
}

fn fits(q: u32, n: usize) -> bool {
    (q as u64).checked_pow(n as u32).is_some_and(|s| s <= CORPUS_LIMIT)
}

/// Repetition codes, the binary Hamming code and `codes` random codes per
/// alphabet, all small enough to enumerate.
pub fn code_corpus(opts: &VerifyOptions) -> CliResult<Vec<NamedCode>> {
    let mut out = Vec::new();
    for &q in &opts.qs {
        let field = Field::new(q)?;
        let top = (1..=opts.nmax).take_while(|&n| fits(q, n)).last().unwrap_or(0);
        for n in 2..=top {
            out.push(NamedCode {
                name: format!("rep:{q}:{n}"),
                code: LinearCode::repetition(&field, n)?,
            });
        }
        if q == 2 && top >= 7 {
            out.push(NamedCode {
                name: "hamming:7:4".into(),
                code: LinearCode::hamming_7_4(),
            });
        }
        if top >= 2 {
            for i in 0..opts.codes {
                let n = 2 + i % (top - 1);
                let k = 1 + (i / (top - 1)) % (n - 1).min(4);
                let seed = opts.seed ^ ((q as u64) << 32 | i as u64);
                out.push(NamedCode {
                    name: format!("random:{q}:{n}:{k}:{seed}"),
                    code: LinearCode::random(&field, n, k, seed)?,
                });
            }
        }
    }
    Ok(out)
}

/// Every monotone indicator on the small spaces, followed by the decoding
/// regions of the code corpus.
pub fn function_corpus(opts: &VerifyOptions, codes: &[NamedCode]) -> CliResult<Vec<NamedFn>> {
    let mut out = Vec::new();
    for (q, n) in [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
        if !opts.qs.contains(&q) || n > opts.nmax {
            continue;
        }
        let field = Field::new(q)?;
        for (j, f) in enumerate_monotone(&field, n)?.enumerate() {
            out.push(NamedFn {
                name: format!("monotone:{q}:{n}:{j}"),
                f,
            });
        }
    }
    let regions = codes
        .par_iter()
        .map(|c| {
            Ok(NamedFn {
                name: format!("omega:{}", c.name),
                f: IndicatorFn::decoding_region(&c.code)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    out.extend(regions);
    Ok(out)
}

/// `0.05, 0.10, ..., 0.95`.
pub fn inequality_grid() -> Vec<f64> {
    (1..=19).map(|j| j as f64 * 0.05).collect()
}

/// Pairs `p0 < p1` from `0.05, ..., 0.6`.
pub fn gbound_pairs() -> Vec<(f64, f64)> {
    let pts: Vec<f64> = (1..=12).map(|j| j as f64 * 0.05).collect();
    let mut out = Vec::new();
    for (i, &p0) in pts.iter().enumerate() {
        for &p1 in &pts[i + 1..] {
            out.push((p0, p1));
        }
    }
    out
}

pub fn run_all(opts: &VerifyOptions) -> CliResult<Vec<Entry>> {
    let codes = code_corpus(opts)?;
    let needs_fns = opts
        .verifiers
        .iter()
        .any(|v| matches!(v, Verifier::Talagrand | Verifier::Russo | Verifier::Iso));
    let fns = if needs_fns { function_corpus(opts, &codes)? } else { Vec::new() };
    let mut entries = Vec::new();
    for &v in &opts.verifiers {
        let batch = match v {
            Verifier::Talagrand | Verifier::Russo | Verifier::Iso => inequality(v, &fns)?,
            Verifier::DeltaBound => per_code(&codes, delta_bound)?,
            Verifier::Gbound => gbound(opts, &codes)?,
            Verifier::Largesupport => largesupport(opts, &codes)?,
            Verifier::Symmetry => per_code(&codes, |c| symmetry(c, opts.direction))?,
            Verifier::AppendixB => appendix_b(&codes)?,
        };
        entries.extend(batch);
    }
    Ok(entries)
}

fn per_code<F>(codes: &[NamedCode], check: F) -> CliResult<Vec<Entry>>
where
    F: Fn(&NamedCode) -> CliResult<Entry> + Sync + Send,
{
    codes.par_iter().map(check).collect()
}

fn inequality(v: Verifier, fns: &[NamedFn]) -> CliResult<Vec<Entry>> {
    let grid = inequality_grid();
    fns.par_iter()
        .map(|nf| {
            let result = match v {
                Verifier::Talagrand => nf.f.verify_talagrand(&grid),
                Verifier::Iso => nf.f.verify_iso(&grid),
                _ => nf.f.verify_russo(&grid),
            };
            let tol = if v == Verifier::Russo { RUSSO_TOL } else { INEQUALITY_TOL };
            Ok(match result {
                Ok(m) => {
                    let verdict = if m.value >= -tol { VerdictLabel::Holds } else { VerdictLabel::Violated };
                    let entry = Entry::new(v.name(), &nf.name, Some(m.value), verdict);
                    #[derive(Serialize)]
                    struct At {
                        p: Real,
                    }
                    if verdict == VerdictLabel::Violated {
                        entry.with_witness(&At { p: Real(m.p) })
                    } else {
                        entry.with_details(&At { p: Real(m.p) })
                    }
                }
                Err(e @ qthreshold::Error::Precondition(_)) => Entry::unmet(v.name(), &nf.name, &e),
                Err(e) => return Err(e.into()),
            })
        })
        .collect()
}

fn unmet_or<T>(
    verifier: Verifier,
    name: &str,
    r: qthreshold::Result<T>,
    f: impl FnOnce(T) -> Entry,
) -> CliResult<Entry> {
    match r {
        Ok(v) => Ok(f(v)),
        Err(e @ qthreshold::Error::Precondition(_)) => Ok(Entry::unmet(verifier.name(), name, &e)),
        Err(e) => Err(e.into()),
    }
}

fn delta_bound(c: &NamedCode) -> CliResult<Entry> {
    let v = Verifier::DeltaBound;
    unmet_or(v, &c.name, verify_delta_bound(&c.code), |r| {
        #[derive(Serialize)]
        struct D {
            delta: Option<usize>,
            bound: Real,
        }
        let margin = r.delta.map(|d| d as f64 - r.bound);
        let entry = Entry::new(v.name(), &c.name, margin, r.status.into());
        let d = D {
            delta: r.delta,
            bound: Real(r.bound),
        };
        if r.status.is_violation() {
            entry.with_witness(&d)
        } else {
            entry.with_details(&d)
        }
    })
}

/// Codes of the corpus with `d >= 4q`, plus the shortest such repetition code
/// for each alphabet when it can be enumerated.
fn gbound_codes(opts: &VerifyOptions, codes: &[NamedCode]) -> CliResult<Vec<NamedCode>> {
    let mut out: Vec<NamedCode> = codes
        .iter()
        .filter(|c| c.code.min_distance().is_some_and(|d| d >= 4 * c.code.q() as usize))
        .cloned()
        .collect();
    for &q in &opts.qs {
        let n = 4 * q as usize;
        let name = format!("rep:{q}:{n}");
        let cap = qthreshold::config::enumeration_cap();
        let small = (q as u64).checked_pow(n as u32).is_some_and(|s| s <= cap);
        if small && !out.iter().any(|c| c.name == name) {
            out.push(NamedCode {
                name,
                code: LinearCode::repetition(&Field::new(q)?, n)?,
            });
        }
    }
    Ok(out)
}

fn gbound(opts: &VerifyOptions, codes: &[NamedCode]) -> CliResult<Vec<Entry>> {
    let v = Verifier::Gbound;
    let pairs = gbound_pairs();
    gbound_codes(opts, codes)?
        .par_iter()
        .map(|c| {
            let profile = RegionProfile::new(&c.code)?;
            #[derive(Serialize)]
            struct Pair {
                p0: Real,
                p1: Real,
                lhs: Real,
                rhs: Real,
            }
            let mut worst: Option<(f64, Pair)> = None;
            let mut violated = false;
            for &(p0, p1) in &pairs {
                let r = match profile.gbound(p0, p1) {
                    Ok(r) => r,
                    Err(e @ qthreshold::Error::Precondition(_)) => return Ok(Entry::unmet(v.name(), &c.name, &e)),
                    Err(e) => return Err(e.into()),
                };
                violated |= r.status.is_violation();
                if worst.as_ref().is_none_or(|(m, _)| r.margin() < *m) {
                    let pair = Pair {
                        p0: Real(p0),
                        p1: Real(p1),
                        lhs: Real(r.lhs),
                        rhs: Real(r.rhs),
                    };
                    worst = Some((r.margin(), pair));
                }
            }
            let (margin, pair) = worst.expect("nonempty pair grid");
            let status = if violated { Status::Violated } else { Status::Holds };
            let entry = Entry::new(v.name(), &c.name, Some(margin), status.into());
            Ok(if violated { entry.with_witness(&pair) } else { entry.with_details(&pair) })
        })
        .collect()
}

fn largesupport(opts: &VerifyOptions, codes: &[NamedCode]) -> CliResult<Vec<Entry>> {
    let v = Verifier::Largesupport;
    if codes.is_empty() {
        return Ok(Vec::new());
    }
    let per_code = (opts.instances / codes.len() as u64).max(1);
    codes
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let q = c.code.q() as f64;
            let noise = NoiseSpec::new(c.code.field(), c.code.n(), (q - 1.0) / q)?;
            let mut stream = rng::stream(opts.seed, i as u64);
            let mut margin: Option<f64> = None;
            for _ in 0..per_code {
                let z = noise.sample(&mut stream);
                let check = match verify_largesupport(&c.code, &z) {
                    Ok(check) => check,
                    Err(e @ qthreshold::Error::Precondition(_)) => return Ok(Entry::unmet(v.name(), &c.name, &e)),
                    Err(e) => return Err(e.into()),
                };
                if let Verdict::Violated(cw) = check.verdict {
                    #[derive(Serialize)]
                    struct W {
                        z: Vec<u8>,
                        c: Vec<u8>,
                    }
                    let w = W {
                        z: word(&z),
                        c: word(&cw),
                    };
                    return Ok(Entry::new(v.name(), &c.name, check.margin, VerdictLabel::Violated).with_witness(&w));
                }
                if let Some(m) = check.margin {
                    margin = Some(margin.map_or(m, |cur: f64| cur.min(m)));
                }
            }
            Ok(Entry::new(v.name(), &c.name, margin, VerdictLabel::Holds))
        })
        .collect()
}

fn symmetry(c: &NamedCode, direction: MonotoneDirection) -> CliResult<Entry> {
    let v = Verifier::Symmetry;
    #[derive(Serialize)]
    #[serde(tag = "kind", rename_all = "kebab-case")]
    enum W {
        Translation { z: Vec<u8>, c: Vec<u8> },
        Monotone { z: Vec<u8>, coordinate: usize, a: u8 },
    }
    if let Verdict::Violated((z, cw)) = omega_translate_check(&c.code)? {
        let w = W::Translation {
            z: word(&z),
            c: word(&cw),
        };
        return Ok(Entry::new(v.name(), &c.name, None, VerdictLabel::Violated).with_witness(&w));
    }
    let region = IndicatorFn::decoding_region(&c.code)?;
    Ok(match region.check_monotone(direction) {
        Verdict::Holds => Entry::new(v.name(), &c.name, None, VerdictLabel::Holds),
        Verdict::Violated(m) => {
            let w = W::Monotone {
                z: word(&m.z),
                coordinate: m.i + 1,
                a: m.a,
            };
            Entry::new(v.name(), &c.name, None, VerdictLabel::Violated).with_witness(&w)
        }
    })
}

/// `0.05, 0.10, ..., 0.50`.
pub fn appendix_b_grid() -> Vec<f64> {
    (1..=10).map(|j| j as f64 * 0.05).collect()
}

fn appendix_b(codes: &[NamedCode]) -> CliResult<Vec<Entry>> {
    let grid = appendix_b_grid();
    codes
        .iter()
        .filter(|c| fits(c.code.q() as u32, c.code.n() + 1))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| {
            let report = appendix_b_failure(&c.code, &grid)?;
            Ok(appendix_b_entry(&c.name, &report))
        })
        .collect()
}

pub fn appendix_b_entry(name: &str, report: &qthreshold::threshold::AppendixB) -> Entry {
    #[derive(Serialize)]
    struct Row {
        p: Real,
        error_prob: Real,
    }
    let v = Verifier::AppendixB;
    let margin = report.rows.iter().map(|r| r.error_prob - r.p).fold(f64::INFINITY, f64::min);
    let failed: Vec<Row> = report
        .rows
        .iter()
        .filter(|r| r.status.is_violation())
        .map(|r| Row {
            p: Real(r.p),
            error_prob: Real(r.error_prob),
        })
        .collect();
    let margin = margin.is_finite().then_some(margin);
    if failed.is_empty() {
        Entry::new(v.name(), format!("augment-e1:{name}"), margin, VerdictLabel::Holds)
    } else {
        Entry::new(v.name(), format!("augment-e1:{name}"), margin, VerdictLabel::Violated).with_witness(&failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions {
            verifiers: Verifier::ALL.to_vec(),
            qs: vec![2, 3],
            nmax: 4,
            codes: 3,
            instances: 200,
            seed: 7,
            direction: MonotoneDirection::default(),
        }
    }

    #[test]
    fn corpus_shape() {
        let codes = code_corpus(&opts()).unwrap();
        let names: Vec<&str> = codes.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"rep:2:4") && names.contains(&"rep:3:4"));
        assert_eq!(codes.len(), 3 + 3 + 3 + 3);
        assert!(codes.iter().all(|c| fits(c.code.q() as u32, c.code.n())));
        let fns = function_corpus(&opts(), &codes).unwrap();
        assert_eq!(fns.len(), 3 + 6 + 20 + 5 + 48 + codes.len());
    }

    #[test]
    fn names_match_value_enum() {
        for v in Verifier::ALL {
            assert_eq!(v.to_possible_value().unwrap().get_name(), v.name());
        }
    }

    #[test]
    fn small_run_has_no_violations() {
        let entries = run_all(&opts()).unwrap();
        assert!(entries.iter().all(|e| !e.is_violation()), "{entries:?}");
        for v in Verifier::ALL {
            assert!(entries.iter().any(|e| e.verifier == v.name()), "{}", v.name());
        }
    }

    #[test]
    fn reversed_direction_flags_regions() {
        let mut o = opts();
        o.verifiers = vec![Verifier::Symmetry];
        o.direction = MonotoneDirection::ZeroingNeverIncreases;
        let entries = run_all(&o).unwrap();
        assert!(entries.iter().all(|e| e.is_violation()));
    }

    #[test]
    fn pair_grid() {
        let pairs = gbound_pairs();
        assert_eq!(pairs.len(), 66);
        assert!(pairs.iter().all(|&(a, b)| a < b && b <= 0.6 + 1e-12));
    }
}
