use serde::Serialize;

use qthreshold::threshold::{
    appendix_b_failure, default_grid, erasure_ambiguity, linear_grid, success_mc_curve, verify_gbound,
    verify_main_bound,
};
use qthreshold::{Estimator, ListDecodability, ListMode, MonotoneDirection, RegionProfile, Word};

use crate::args::*;
use crate::codespec::{self, describe};
use crate::report::{self, word, Entry, Real, Report, VerdictLabel};
use crate::verify::{self, Verifier, VerifyOptions};
use crate::{CliError, CliResult};

pub fn dispatch(cli: Cli) -> CliResult<()> {
    let jobs = match &cli.command {
        Command::Threshold(a) => a.run.jobs,
        Command::Verify(a) => a.run.jobs,
        Command::GBound(a) => a.run.jobs,
        Command::MainBound(a) => a.run.jobs,
        Command::Erasure(a) => a.run.jobs,
        Command::AppendixB(a) => a.run.jobs,
        Command::ListDecodable(a) => a.run.jobs,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| match cli.command {
        Command::Threshold(a) => threshold(a),
        Command::Verify(a) => verify_cmd(a),
        Command::GBound(a) => gbound(a),
        Command::MainBound(a) => main_bound(a),
        Command::Erasure(a) => erasure(a),
        Command::AppendixB(a) => appendix_b(a),
        Command::ListDecodable(a) => list_decodable(a),
    })
}

/// `start:stop:step` or a comma-separated list; empty text is an empty grid.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("grid {text:?}: {s:?} is not a number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => linear_grid(num(start)?, num(stop)?, num(step)?)?,
        [_] => text.split(',').map(num).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(CliError::usage(format!("grid {text:?}: expected start:stop:step or a list"))),
    };
    for &p in &grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::usage(format!("grid point {p} outside [0, 1]")));
        }
    }
    Ok(grid)
}

fn estimator(args: &EstimatorArgs, seed: u64) -> CliResult<Estimator> {
    match (args.mode, args.samples) {
        (ModeArg::Exact, None) => Ok(Estimator::Exact),
        (ModeArg::Exact, Some(_)) => Err(CliError::usage("--samples only applies to --mode mc")),
        (ModeArg::Mc, None) => Err(CliError::usage("--mode mc needs --samples")),
        (ModeArg::Mc, Some(samples)) => Ok(Estimator::MonteCarlo {
            samples,
            seed,
            delta: args.delta,
        }),
    }
}

fn threshold(a: ThresholdArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(code.q()),
    };
    let curve = match estimator(&a.estimator, a.run.seed)? {
        Estimator::Exact => RegionProfile::new(&code)?.curve(&grid)?,
        Estimator::MonteCarlo { samples, seed, delta } => success_mc_curve(&code, &grid, samples, seed, delta)?,
    };
    report::emit(&curve.to_csv(), a.run.out.as_deref())
}

fn verify_cmd(a: VerifyArgs) -> CliResult<()> {
    let verifiers = if a.all {
        Verifier::ALL.to_vec()
    } else if a.verifier.is_empty() {
        return Err(CliError::usage("choose verifiers with --verifier or pass --all"));
    } else {
        a.verifier.clone()
    };
    let opts = VerifyOptions {
        verifiers,
        qs: a.q.clone(),
        nmax: a.nmax,
        codes: a.codes,
        instances: a.instances,
        seed: a.run.seed,
        direction: match a.direction {
            DirectionArg::ZeroingNeverDecreases => MonotoneDirection::ZeroingNeverDecreases,
            DirectionArg::ZeroingNeverIncreases => MonotoneDirection::ZeroingNeverIncreases,
        },
    };
    let report = Report::new("verify", a.run.seed, verify::run_all(&opts)?);
    report::finish(&report, a.run.out.as_deref(), a.witness.as_deref())
}

fn gbound(a: GBoundArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let name = describe(&a.code);
    let est = estimator(&a.estimator, a.run.seed)?;
    #[derive(Serialize)]
    struct D {
        p0: Real,
        p1: Real,
        lhs: Real,
        rhs: Real,
    }
    let entry = match verify_gbound(&code, a.p0, a.p1, est) {
        Ok(r) => {
            let d = D {
                p0: Real(a.p0),
                p1: Real(a.p1),
                lhs: Real(r.lhs),
                rhs: Real(r.rhs),
            };
            let e = Entry::new("gbound", name, Some(r.margin()), r.status.into());
            if r.status.is_violation() {
                e.with_witness(&d)
            } else {
                e.with_details(&d)
            }
        }
        Err(e @ qthreshold::Error::Precondition(_)) => {
            eprintln!("qthreshold: {e}");
            Entry::unmet("gbound", name, &e)
        }
        Err(e) => return Err(e.into()),
    };
    let report = Report::new("gbound", a.run.seed, vec![entry]);
    report::finish(&report, a.run.out.as_deref(), a.witness.as_deref())
}

fn main_bound(a: MainBoundArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let name = describe(&a.code);
    let est = estimator(&a.estimator, a.run.seed)?;
    let mut entries = Vec::new();
    match verify_main_bound(&code, a.p, a.list_size, a.shift, est) {
        Ok(r) => {
            #[derive(Serialize)]
            struct D {
                radius: usize,
                shifted_p: Real,
                success: Real,
                bound: Real,
            }
            let d = D {
                radius: r.radius,
                shifted_p: Real(r.shifted_p),
                success: Real(r.success),
                bound: Real(r.bound),
            };
            let e = Entry::new("main-bound", &name, Some(r.success - r.bound), r.status.into());
            entries.push(if r.status.is_violation() { e.with_witness(&d) } else { e.with_details(&d) });
            #[derive(Serialize)]
            struct L {
                p: Real,
                ml_success: Real,
                list_success: Real,
                floor: Real,
            }
            let s = r.list_step;
            let l = L {
                p: Real(s.p_mid),
                ml_success: Real(s.ml_success),
                list_success: Real(s.list_success),
                floor: Real(s.floor),
            };
            let margin = (s.ml_success - s.list_success).min(s.list_success - s.floor);
            let e = Entry::new("list-step", &name, Some(margin), s.status.into());
            entries.push(if s.status.is_violation() { e.with_witness(&l) } else { e.with_details(&l) });
        }
        Err(e @ qthreshold::Error::Precondition(_)) => {
            eprintln!("qthreshold: {e}");
            entries.push(Entry::unmet("main-bound", &name, &e));
        }
        Err(e) => return Err(e.into()),
    }
    let report = Report::new("main-bound", a.run.seed, entries);
    report::finish(&report, a.run.out.as_deref(), a.witness.as_deref())
}

fn erasure(a: ErasureArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let c = match &a.codeword {
        Some(text) => codespec::parse_word(code.field(), text)?,
        None => Word::zero(code.field(), code.n()),
    };
    let est = estimator(&a.estimator, a.run.seed)?;
    #[derive(Serialize)]
    struct Row {
        p: Real,
        probability: Real,
        mode: &'static str,
        half_width: Real,
        samples: u64,
    }
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        code: String,
        codeword: Vec<u8>,
        seed: u64,
        rows: Vec<Row>,
    }
    let rows = parse_grid(&a.grid)?
        .into_iter()
        .map(|p| {
            let r = erasure_ambiguity(&code, &c, p, est)?;
            Ok(Row {
                p: Real(p),
                probability: Real(r.value),
                mode: if est == Estimator::Exact { "exact" } else { "mc" },
                half_width: Real(r.half_width),
                samples: r.samples,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let out = Out {
        command: "erasure",
        code: describe(&a.code),
        codeword: word(&c),
        seed: a.run.seed,
        rows,
    };
    report::emit(&report::to_json(&out), a.run.out.as_deref())
}

fn appendix_b(a: AppendixBArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let name = describe(&a.code);
    let grid = parse_grid(&a.grid)?;
    let result = appendix_b_failure(&code, &grid)?;
    let mut entries = vec![verify::appendix_b_entry(&name, &result)];
    if let Some(d) = code.min_distance() {
        let radius = (d - 1) / 2;
        let holds = matches!(
            code.is_list_decodable(radius, 1, ListMode::Exhaustive)?,
            ListDecodability::Holds
        );
        let verdict = if holds { VerdictLabel::Holds } else { VerdictLabel::Violated };
        #[derive(Serialize)]
        struct D {
            radius: usize,
            list_size: usize,
        }
        entries.push(Entry::new("list-decodable", name, None, verdict).with_details(&D { radius, list_size: 1 }));
    }
    let report = Report::new("appendix-b", a.run.seed, entries);
    report::finish(&report, a.run.out.as_deref(), a.witness.as_deref())
}

fn list_decodable(a: ListDecodableArgs) -> CliResult<()> {
    let code = codespec::load(&a.code)?;
    let mode = match a.list_mode {
        ListModeArg::Exhaustive => ListMode::Exhaustive,
        ListModeArg::Sampled => ListMode::Sampled {
            budget: a.budget,
            seed: a.run.seed,
        },
    };
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        code: String,
        radius: usize,
        list_size: usize,
        verdict: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<u8>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        checked: Option<u64>,
    }
    let mut out = Out {
        command: "list-decodable",
        code: describe(&a.code),
        radius: a.radius,
        list_size: a.list_size,
        verdict: "holds",
        witness: None,
        count: None,
        checked: None,
    };
    match code.is_list_decodable(a.radius, a.list_size, mode)? {
        ListDecodability::Holds => {}
        ListDecodability::Violated { witness, count } => {
            out.verdict = "violated";
            out.witness = Some(word(&witness));
            out.count = Some(count);
        }
        ListDecodability::Inconclusive { checked } => {
            out.verdict = "inconclusive";
            out.checked = Some(checked);
        }
    }
    report::emit(&report::to_json(&out), a.run.out.as_deref())?;
    if out.verdict == "violated" {
        return Err(CliError::Violation(1));
    }
    Ok(())
}
