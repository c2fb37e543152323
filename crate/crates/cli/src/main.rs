use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use celcs::counting::{allowed_final_lc, count_t43, count_t53, rueppel_count, second_descent_possible};
use celcs::cube::{kerror_decomposition_partial_with, kerror_decomposition_with, standard_decomposition};
use celcs::descent::{descent_report, k2_second_descent, k3_condition_flags, k3_third_descent, prop31_next_k};
use celcs::harness::{Harness, Mode};
use celcs::spectrum::first_descent_k;
use celcs::{
    lc_poly_oracle, parse_sequence, BruteForce, CountQuery, CountResult, Cube, CubeDecomposition, DescentKind, Mask,
    Seq, TheoremId,
};

#[derive(Parser)]
#[command(
    name = "celcs",
    version,
    about = "Linear complexity spectra of 2^n-periodic binary sequences"
)]
struct Cli {
    /// Output format; csv is accepted by `histogram` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Brute-force budget in linear complexity evaluations (default: CELCS_BUDGET or 10^9).
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Sequences given inline or as `@file`, one per line.
#[derive(Args)]
struct Inputs {
    #[arg(required = true, value_name = "SEQ")]
    seqs: Vec<String>,

    /// Require every sequence to have period 2^n.
    #[arg(short = 'n')]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Linear complexity (Games-Chan).
    Lc {
        #[command(flatten)]
        inputs: Inputs,
        /// Use the polynomial-division oracle instead.
        #[arg(long)]
        oracle: bool,
    },
    /// k-error linear complexity.
    Klc {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(short = 'k')]
        k: u64,
    },
    /// Critical points of the k-error linear complexity.
    Celcs {
        #[command(flatten)]
        inputs: Inputs,
        /// Also show the closed-form second and third descents.
        #[arg(long)]
        descents: bool,
    },
    /// Lexicographically first minimum-weight error pattern reaching L_k.
    Witness {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(short = 'k')]
        k: u64,
    },
    /// Standard or k-error cube decomposition.
    #[command(group(ArgGroup::new("kind").required(true).args(["standard", "kerror"])))]
    Decompose {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        standard: bool,
        #[arg(long)]
        kerror: bool,
        /// Stop the k-error decomposition after this many cubes.
        #[arg(long, requires = "kerror")]
        partial: Option<usize>,
    },
    /// Linear complexity of a cube given as `base=..; edges=..`, `positions=..; edges=..`, or as a sequence.
    CubeLc {
        cube: String,
        #[arg(short = 'n')]
        n: Option<u32>,
    },
    /// Exponent mask S(2^n - L).
    Mask {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'L', allow_hyphen_values = true)]
        lc: String,
    },
    /// Second descent point from the masks of L^(0) and L^(1).
    K2 {
        #[arg(short = 'n')]
        n: u32,
        #[arg(num_args = 2, required = true, value_name = "LEVEL")]
        levels: Vec<String>,
    },
    /// Third descent point from the masks of L^(0), L^(1) and L^(2).
    K3 {
        #[arg(short = 'n')]
        n: u32,
        #[arg(num_args = 3, required = true, value_name = "LEVEL")]
        levels: Vec<String>,
    },
    /// k^(i+1) = 2^W(S^(i)) - k^(i) for nested masks.
    Prop31 {
        #[arg(short = 'n')]
        n: u32,
        #[arg(value_name = "LEVEL")]
        level: String,
        #[arg(short = 'k')]
        k: u64,
    },
    /// Number of sequences with prescribed descents.
    #[command(group(ArgGroup::new("kind").required(true).args(["t43", "t53", "rueppel"])))]
    Count {
        #[arg(long)]
        t43: bool,
        #[arg(long)]
        t53: bool,
        /// Sequences of period 2^n with complexity L.
        #[arg(long)]
        rueppel: bool,
        #[command(flatten)]
        params: Params,
    },
    /// Structural predicates on descent masks.
    #[command(group(ArgGroup::new("kind").required(true).args(["t41", "t42", "t51", "t52"])))]
    Predicate {
        /// Can L_1 = L be the first descent of a sequence with a 3-error second descent.
        #[arg(long)]
        t41: bool,
        /// Is L admissible as L_3 after first descent {i, j}.
        #[arg(long)]
        t42: bool,
        /// Can L_2 = L follow L = 2^n - 2^i0 in the 4-error case.
        #[arg(long)]
        t51: bool,
        /// Is L admissible as L_4 after L_2 with mask {i, j}.
        #[arg(long)]
        t52: bool,
        #[command(flatten)]
        params: Params,
    },
    /// Check a theorem exhaustively, or by sampling with --samples.
    Verify {
        #[arg(value_name = "THEOREM")]
        theorem: String,
        #[arg(short = 'n')]
        n: u32,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Census of linear complexity over all sequences of period 2^n.
    Histogram {
        #[arg(short = 'n')]
        n: u32,
    },
}

#[derive(Args)]
struct Params {
    #[arg(short = 'n')]
    n: u32,
    #[arg(short = 'i')]
    i: Option<u32>,
    #[arg(short = 'j')]
    j: Option<u32>,
    #[arg(long = "i0")]
    i0: Option<u32>,
    /// Integer complexity or exponent mask such as "0,1,3".
    #[arg(short = 'L', allow_hyphen_values = true)]
    lc: String,
}

impl Params {
    fn pair(&self) -> Result<(u32, u32)> {
        let i = self.i.ok_or_else(|| anyhow!("missing required flag -i"))?;
        let j = self.j.ok_or_else(|| anyhow!("missing required flag -j"))?;
        Ok((i, j))
    }

    fn i0(&self) -> Result<u32> {
        self.i0.ok_or_else(|| anyhow!("missing required flag --i0"))
    }

    fn lc(&self) -> Result<u64> {
        parse_lc(self.n, "-L", &self.lc)
    }
}

fn looks_like_mask(text: &str) -> bool {
    let t = text.trim();
    t.starts_with('{') || t.contains(',')
}

/// `-L` and level arguments: an integer complexity, or a mask written with
/// braces or commas (`{3}`, `3,`, `0,1,3`).
fn parse_lc(n: u32, flag: &str, text: &str) -> Result<u64> {
    if looks_like_mask(text) {
        let m = Mask::parse(n, text).with_context(|| format!("invalid value {text:?} for {flag}"))?;
        return Ok(m.lc());
    }
    text.trim()
        .parse()
        .with_context(|| format!("invalid value {text:?} for {flag}: expected an integer or a mask like \"0,1,3\""))
}

fn parse_mask(n: u32, flag: &str, text: &str) -> Result<Mask> {
    if looks_like_mask(text) {
        return Mask::parse(n, text).with_context(|| format!("invalid value {text:?} for {flag}"));
    }
    let lc = parse_lc(n, flag, text)?;
    Mask::from_lc(n, lc).with_context(|| format!("invalid value {text:?} for {flag}"))
}

fn indices(m: &Mask) -> Vec<u32> {
    m.indices().collect()
}

fn count_json(q: Value, c: &CountResult) -> Value {
    json!({
        "query": q,
        "exponent": c.exponent,
        "value": (c.exponent <= 62).then(|| 1u64 << c.exponent),
        "branch": c.branch,
        "display": c.to_string(),
    })
}

fn decomposition_text(d: &CubeDecomposition) -> String {
    let mut parts: Vec<String> = d
        .cubes
        .iter()
        .map(|c| format!("L={} ({})", c.lc(), c.to_text()))
        .collect();
    if let Some(r) = &d.remainder {
        parts.push(format!("remainder L={} ({})", r.linear_complexity(), r.to_text()));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) -> Result<()> {
        let line = match self.format {
            Format::Json => value().to_string(),
            _ => text(),
        };
        let mut stdout = io::stdout().lock();
        writeln!(stdout, "{line}")?;
        stdout.flush()?;
        Ok(())
    }
}

/// Runs `f` on every input sequence, streaming one line per input.
fn each_seq(inputs: &Inputs, mut f: impl FnMut(&Seq) -> Result<()>) -> Result<()> {
    for arg in &inputs.seqs {
        if let Some(path) = arg.strip_prefix('@') {
            let body = fs::read_to_string(path).with_context(|| format!("cannot read sequence file {path}"))?;
            for (idx, line) in body.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let s = parse_sequence(line, inputs.n)
                    .with_context(|| format!("invalid sequence on line {} of {path}", idx + 1))?;
                f(&s)?;
            }
        } else {
            let s = parse_sequence(arg, inputs.n).with_context(|| format!("invalid sequence argument {arg:?}"))?;
            f(&s)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let engine = cli.budget.map(BruteForce::new).unwrap_or_else(BruteForce::from_env);
    if cli.format == Format::Csv && !matches!(cli.command, Command::Histogram { .. }) {
        bail!("--format csv is only supported by histogram");
    }
    let out = Out { format: cli.format };
    match cli.command {
        Command::Lc { inputs, oracle } => each_seq(&inputs, |s| {
            let lc = if oracle {
                lc_poly_oracle(s)
            } else {
                s.linear_complexity()
            };
            out.emit(|| lc.to_string(), || json!({"sequence": s, "L": lc}))
        })?,
        Command::Klc { inputs, k } => each_seq(&inputs, |s| {
            let lc = engine.kerror_lc(s, k)?;
            out.emit(|| lc.to_string(), || json!({"sequence": s, "k": k, "L": lc}))
        })?,
        Command::Celcs { inputs, descents } => each_seq(&inputs, |s| {
            if descents {
                let r = descent_report(s, &engine)?;
                let show = |o: Option<u64>| o.map_or("-".to_string(), |v| v.to_string());
                out.emit(
                    || {
                        format!(
                            "{} k2 {} (formula {}) k3 {} (formula {}{})",
                            r.spectrum,
                            show(r.k2_observed),
                            show(r.k2_predicted),
                            show(r.k3_observed),
                            show(r.k3_predicted),
                            r.k3_branch.map_or(String::new(), |b| format!(", {b}"))
                        )
                    },
                    || json!({"sequence": s, "descents": r}),
                )
            } else {
                let c = engine.celcs(s)?;
                let first = first_descent_k(s).ok();
                out.emit(
                    || c.to_string(),
                    || json!({"sequence": s, "celcs": c, "first_descent_k": first}),
                )
            }
        })?,
        Command::Witness { inputs, k } => each_seq(&inputs, |s| {
            let w = engine.error_witness(s, k)?;
            let lc = s.add(&w)?.linear_complexity();
            let pos = w.positions();
            out.emit(
                || format!("{pos:?} L={lc}"),
                || json!({"sequence": s, "k": k, "witness": w, "positions": pos, "L": lc}),
            )
        })?,
        Command::Decompose {
            inputs,
            standard,
            partial,
            ..
        } => each_seq(&inputs, |s| {
            let d = if standard {
                standard_decomposition(s)
            } else if let Some(m) = partial {
                kerror_decomposition_partial_with(s, m, &engine)?
            } else {
                kerror_decomposition_with(s, &engine)?
            };
            out.emit(
                || decomposition_text(&d),
                || json!({"sequence": s, "cubes": d.cubes, "remainder": d.remainder, "L": d.lcs()}),
            )
        })?,
        Command::CubeLc { cube, n } => {
            let c = if cube.contains('=') {
                let n = n.ok_or_else(|| anyhow!("missing required flag -n for a cube description"))?;
                Cube::parse(n, &cube).with_context(|| format!("invalid cube {cube:?}"))?
            } else {
                let s = parse_sequence(&cube, n).with_context(|| format!("invalid cube {cube:?}"))?;
                Cube::from_seq(&s).with_context(|| format!("invalid cube {cube:?}"))?
            };
            out.emit(|| c.lc().to_string(), || json!({"cube": c, "L": c.lc()}))?;
        }
        Command::Mask { n, lc } => {
            let m = parse_mask(n, "-L", &lc)?;
            out.emit(
                || m.to_string(),
                || json!({"n": n, "L": m.lc(), "mask": indices(&m), "weight": m.weight()}),
            )?;
        }
        Command::K2 { n, levels } => {
            let s0 = parse_mask(n, "LEVEL", &levels[0])?;
            let s1 = parse_mask(n, "LEVEL", &levels[1])?;
            let k = k2_second_descent(&s0, &s1)?;
            out.emit(
                || k.to_string(),
                || json!({"n": n, "masks": [indices(&s0), indices(&s1)], "k2": k}),
            )?;
        }
        Command::K3 { n, levels } => {
            let masks = levels
                .iter()
                .map(|l| parse_mask(n, "LEVEL", l))
                .collect::<Result<Vec<_>>>()?;
            let flags = k3_condition_flags(&masks[0], &masks[1], &masks[2])?;
            let k = k3_third_descent(&masks[0], &masks[1], &masks[2])?;
            let branch = flags.branch();
            out.emit(
                || format!("{k} {branch}"),
                || {
                    json!({
                        "n": n,
                        "masks": masks.iter().map(indices).collect::<Vec<_>>(),
                        "k3": k,
                        "branch": branch,
                        "conditions": flags,
                    })
                },
            )?;
        }
        Command::Prop31 { n, level, k } => {
            let m = parse_mask(n, "LEVEL", &level)?;
            let next = prop31_next_k(&m, k)?;
            out.emit(
                || next.to_string(),
                || json!({"n": n, "mask": indices(&m), "k": k, "next_k": next}),
            )?;
        }
        Command::Count {
            t43, t53, params: p, ..
        } => {
            let lc = p.lc()?;
            let (q, c) = if t43 || t53 {
                let (i, j) = p.pair()?;
                let i0 = if t53 { Some(p.i0()?) } else { None };
                let q = CountQuery { n: p.n, i0, i, j, lc };
                let c = if t43 { count_t43(&q)? } else { count_t53(&q)? };
                (serde_json::to_value(q)?, c)
            } else {
                (json!({"n": p.n, "L": lc}), rueppel_count(p.n, lc)?)
            };
            out.emit(|| c.to_string(), || count_json(q, &c))?;
        }
        Command::Predicate {
            t41,
            t42,
            t51,
            params: p,
            ..
        } => {
            let lc = p.lc()?;
            let (name, value) = if t41 || t51 {
                let m = parse_mask(p.n, "-L", &p.lc)?;
                if t41 {
                    ("t41", second_descent_possible(DescentKind::ThreeError, &m, None)?)
                } else {
                    (
                        "t51",
                        second_descent_possible(DescentKind::FourError, &m, Some(p.i0()?))?,
                    )
                }
            } else {
                let (i, j) = p.pair()?;
                if t42 {
                    ("t42", allowed_final_lc(DescentKind::ThreeError, p.n, None, i, j, lc)?)
                } else {
                    (
                        "t52",
                        allowed_final_lc(DescentKind::FourError, p.n, Some(p.i0()?), i, j, lc)?,
                    )
                }
            };
            out.emit(
                || value.to_string(),
                || json!({"predicate": name, "n": p.n, "i": p.i, "j": p.j, "i0": p.i0, "L": lc, "value": value}),
            )?;
        }
        Command::Verify {
            theorem,
            n,
            samples,
            seed,
        } => {
            let id: TheoremId = theorem
                .parse()
                .with_context(|| format!("invalid THEOREM {theorem:?}"))?;
            let harness = Harness {
                engine,
                ..Harness::default()
            };
            let report = match samples {
                Some(samples) => harness.verify_sampled(id, n, samples, seed)?,
                None => harness.verify_exhaustive(id, n)?,
            };
            out.emit(
                || {
                    let mode = match report.mode {
                        Mode::Exhaustive => "exhaustive",
                        Mode::Sampled => "sampled",
                    };
                    let mut text = format!(
                        "{} n={} {mode}: {} (checked {}, applicable {}, failures {}, {} ms)",
                        report.theorem_id,
                        report.n,
                        if report.passed() { "PASS" } else { "FAIL" },
                        report.checked,
                        report.applicable,
                        report.failure_count,
                        report.elapsed_ms
                    );
                    for f in &report.failures {
                        text.push_str("\n  ");
                        text.push_str(f);
                    }
                    text
                },
                || serde_json::to_value(&report).expect("reports serialize"),
            )?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Histogram { n } => {
            let h = harness_histogram(&engine, n)?;
            match cli.format {
                Format::Json => out.emit(String::new, || json!({"n": n, "histogram": h}))?,
                Format::Csv => {
                    let mut stdout = io::stdout().lock();
                    writeln!(stdout, "L,count")?;
                    for (l, c) in &h {
                        writeln!(stdout, "{l},{c}")?;
                    }
                }
                Format::Text => {
                    let mut stdout = io::stdout().lock();
                    for (l, c) in &h {
                        writeln!(stdout, "{l} {c}")?;
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn harness_histogram(engine: &BruteForce, n: u32) -> Result<std::collections::BTreeMap<u64, u64>> {
    let harness = Harness {
        engine: *engine,
        ..Harness::default()
    };
    Ok(harness.lc_histogram(n)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
