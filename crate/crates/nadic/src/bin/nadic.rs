//! Command-line front end: every library module behind reproducible,
//! scriptable subcommands. Exit 0 on success, 2 on precondition violations
//! (the error name on one diagnostic line), 64 on unknown subcommands.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use nadic::cf::{
    dual_convergence_report, periodic_to_surd, verify_heron_correspondence, HybridCF, Verdict,
};
use nadic::cipher::{decode_base37, decrypt, encode_base37, encrypt, CipherKey, BASE37};
use nadic::prng::{monte_carlo_pi, seed_state, BLOCK_DIGITS};
use nadic::tower::{graham_last_digits, idempotents, knuth_last_digits, TowerSpec};
use nadic::{analytic, DigitString, Error, NadicContext, NadicInt};

#[derive(Parser)]
#[command(name = "nadic", version, about = "Truncated n-adic arithmetic calculator")]
struct Cli {
    /// Ring base n (>= 2)
    #[arg(long, global = true)]
    base: Option<u64>,
    /// Number of base-n digits carried
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed for randomized commands (required there; no wall-clock default)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable output: stable key order, decimal strings
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe the working ring Z/n^kZ
    Ctx,
    /// Ring operations on canonical residues
    Arith {
        #[command(subcommand)]
        op: ArithOp,
    },
    /// Hensel-lifted square root (odd prime bases only)
    Sqrt {
        /// Value whose root is taken
        value: String,
        /// Branch residues mod each prime, as "p=r,p=r"
        #[arg(long)]
        branch: Option<String>,
    },
    /// n-adic exponential of a value in the convergence domain
    Exp { value: String },
    /// n-adic logarithm of a unit = 1 mod every prime of the base
    Log { value: String },
    /// Hybrid continued fractions
    Cf {
        #[command(subcommand)]
        op: CfOp,
    },
    /// Multiply by a unit key (toy cipher: linearly malleable, no security)
    Encrypt {
        #[arg(long)]
        key: String,
        /// Message as a canonical digit string
        message: String,
    },
    /// Multiply by the key's inverse (toy cipher)
    Decrypt {
        #[arg(long)]
        key: String,
        /// Ciphertext as a canonical digit string
        message: String,
    },
    /// Encode alphanumeric text (0-9, A-Z, '_') as a base-37 integer
    Encode37 { text: String },
    /// Decode a base-37 integer back to text; --precision fixes the length
    Decode37 { value: String },
    /// Pseudo-random digit blocks from iterated square roots (toy generator)
    Prng {
        /// Number of 6-digit blocks to emit
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(subcommand)]
        op: Option<PrngOp>,
    },
    /// Nontrivial idempotents of Z/n^kZ
    Idempotents {
        /// Digits carried (the k of n^k)
        #[arg(long)]
        digits: u32,
    },
    /// Last digits of power towers
    Lastdigits {
        #[command(subcommand)]
        op: LastDigitsOp,
    },
}

#[derive(Subcommand)]
enum ArithOp {
    Add { x: String, y: String },
    Sub { x: String, y: String },
    Mul { x: String, y: String },
    Neg { x: String },
    Inv { x: String },
    Pow { x: String, e: String },
}

#[derive(Subcommand)]
enum CfOp {
    /// Evaluate a finite expansion (or --terms digits of a periodic one)
    Eval {
        /// Expansion such as "[3;6,6,6]_5" or "[3; (6)*]_5"
        cf: String,
        /// Number of digits to use; defaults to the whole finite expansion
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Solve a periodic expansion to an exact quadratic surd
    Surd { cf: String },
    /// Check the Heron correspondence for the family x = a^2 + 2an/b
    HeronCheck {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Dual real / n-adic convergence report for a periodic expansion
    Report {
        cf: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// n-adic digits checked on the limit side
        #[arg(long, default_value_t = 6)]
        digits: u32,
    },
}

#[derive(Subcommand)]
enum PrngOp {
    /// Monte-Carlo pi estimate from the generator, checked against a band
    PiTest {
        #[arg(long, default_value_t = 100)]
        groups: usize,
        #[arg(long, default_value_t = 40)]
        per_group: usize,
        #[arg(long, default_value_t = 15_625)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum LastDigitsOp {
    /// Last digits of base ↑^arrows height (Knuth up-arrows)
    Tower(TowerArgs),
    /// Last digits of Graham's number
    Graham {
        #[arg(long)]
        digits: u32,
    },
}

#[derive(Args)]
struct TowerArgs {
    #[arg(long)]
    arrows: u32,
    #[arg(long)]
    height: u64,
    /// Digits of the answer
    #[arg(long)]
    digits: u32,
    /// Base the digits are written in
    #[arg(long, default_value_t = 10)]
    mod_base: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::UnknownArgument => 64,
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn context(cli: &Cli) -> Result<NadicContext, Error> {
    let base = cli
        .base
        .ok_or_else(|| Error::InvalidArgument("--base is required".into()))?;
    let precision = cli
        .precision
        .ok_or_else(|| Error::InvalidArgument("--precision is required".into()))?;
    NadicContext::new(base, precision)
}

fn seed(cli: &Cli) -> Result<u64, Error> {
    cli.seed
        .ok_or_else(|| Error::InvalidArgument("--seed is required; there is no wall-clock default".into()))
}

fn parse_int(ctx: &NadicContext, s: &str) -> Result<NadicInt, Error> {
    let z: BigInt = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
    Ok(NadicInt::from_integer(ctx, &z))
}

fn parse_branch(s: &str) -> Result<BTreeMap<u64, u64>, Error> {
    let mut out = BTreeMap::new();
    for part in s.split(',') {
        let (p, r) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("branch entry {part:?} is not p=r")))?;
        let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
        let r: u64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad residue {r:?}")))?;
        out.insert(p, r);
    }
    Ok(out)
}

/// Emit either the JSON object or the plain lines, per --json.
fn emit(cli: &Cli, obj: Map<String, Value>, lines: Vec<String>) {
    if cli.json {
        println!("{}", Value::Object(obj));
    } else {
        for line in lines {
            println!("{line}");
        }
    }
}

fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Verified => "verified",
        Verdict::Failed => "failed",
        Verdict::Unverified => "unverified",
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.cmd {
        Cmd::Ctx => {
            let ctx = context(cli)?;
            let factors: Vec<Value> = ctx
                .factorization()
                .iter()
                .map(|&(p, a)| json!({"prime": p.to_string(), "exponent": a.to_string()}))
                .collect();
            let mut obj = Map::new();
            obj.insert("base".into(), json!(ctx.base().to_string()));
            obj.insert("precision".into(), json!(ctx.precision().to_string()));
            obj.insert("factorization".into(), Value::Array(factors));
            obj.insert("modulus".into(), json!(ctx.modulus().to_string()));
            let factor_text = ctx
                .factorization()
                .iter()
                .map(|&(p, a)| format!("{p}^{a}"))
                .collect::<Vec<_>>()
                .join(" * ");
            emit(
                cli,
                obj,
                vec![
                    format!("ring: {ctx}"),
                    format!("factorization: {factor_text}"),
                    format!("modulus: {}", ctx.modulus()),
                ],
            );
        }
        Cmd::Arith { op } => {
            let ctx = context(cli)?;
            let result = match op {
                ArithOp::Add { x, y } => parse_int(&ctx, x)?.add(&parse_int(&ctx, y)?)?,
                ArithOp::Sub { x, y } => parse_int(&ctx, x)?.sub(&parse_int(&ctx, y)?)?,
                ArithOp::Mul { x, y } => parse_int(&ctx, x)?.mul(&parse_int(&ctx, y)?)?,
                ArithOp::Neg { x } => parse_int(&ctx, x)?.neg(),
                ArithOp::Inv { x } => parse_int(&ctx, x)?.invert()?,
                ArithOp::Pow { x, e } => {
                    let e = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                    parse_int(&ctx, x)?.pow(&e)
                }
            };
            let mut obj = Map::new();
            obj.insert("value".into(), json!(result.residue().to_string()));
            obj.insert("digits".into(), json!(result.digits().to_string()));
            emit(cli, obj, vec![result.residue().to_string()]);
        }
        Cmd::Sqrt { value, branch } => {
            let ctx = context(cli)?;
            let a = parse_int(&ctx, value)?;
            let branch = branch.as_deref().map(parse_branch).transpose()?;
            let res = analytic::nadic_sqrt(&a, branch.as_ref())?;
            let mut obj = Map::new();
            obj.insert("root".into(), json!(res.root.residue().to_string()));
            obj.insert("digits".into(), json!(res.root.digits().to_string()));
            obj.insert("iterations".into(), json!(res.iterations.to_string()));
            emit(
                cli,
                obj,
                vec![
                    res.root.residue().to_string(),
                    format!("iterations: {}", res.iterations),
                ],
            );
        }
        Cmd::Exp { value } => {
            let ctx = context(cli)?;
            let r = analytic::nadic_exp(&parse_int(&ctx, value)?)?;
            let mut obj = Map::new();
            obj.insert("value".into(), json!(r.residue().to_string()));
            obj.insert("digits".into(), json!(r.digits().to_string()));
            emit(cli, obj, vec![r.residue().to_string()]);
        }
        Cmd::Log { value } => {
            let ctx = context(cli)?;
            let r = analytic::nadic_log(&parse_int(&ctx, value)?)?;
            let mut obj = Map::new();
            obj.insert("value".into(), json!(r.residue().to_string()));
            obj.insert("digits".into(), json!(r.digits().to_string()));
            emit(cli, obj, vec![r.residue().to_string()]);
        }
        Cmd::Cf { op } => run_cf(cli, op)?,
        Cmd::Encrypt { key, message } | Cmd::Decrypt { key, message } => {
            let ctx = context(cli)?;
            let key = CipherKey::new(parse_int(&ctx, key)?)?;
            let m = NadicInt::from_digits(&ctx, &DigitString::parse(ctx.base(), message)?)?;
            let out = match &cli.cmd {
                Cmd::Encrypt { .. } => encrypt(&key, &m)?,
                _ => decrypt(&key, &m)?,
            };
            let mut obj = Map::new();
            obj.insert("value".into(), json!(out.residue().to_string()));
            obj.insert("digits".into(), json!(out.digits().to_string()));
            emit(cli, obj, vec![out.digits().to_string()]);
        }
        Cmd::Encode37 { text } => {
            let x = encode_base37(text)?;
            let mut obj = Map::new();
            obj.insert("value".into(), json!(x.residue().to_string()));
            obj.insert("length".into(), json!(x.context().precision().to_string()));
            emit(cli, obj, vec![x.residue().to_string()]);
        }
        Cmd::Decode37 { value } => {
            let length = cli
                .precision
                .ok_or_else(|| Error::InvalidArgument("--precision fixes the text length".into()))?;
            let ctx = NadicContext::new(BASE37, length)?;
            let text = decode_base37(&parse_int(&ctx, value)?)?;
            let mut obj = Map::new();
            obj.insert("text".into(), json!(text));
            emit(cli, obj, vec![text]);
        }
        Cmd::Prng { count, op } => {
            let base = cli.base.unwrap_or(5);
            let precision = cli.precision.unwrap_or(32);
            let ctx = NadicContext::new(base, precision)?;
            let mut state = seed_state(&ctx, seed(cli)?)?;
            match op {
                None => {
                    let blocks: Vec<String> =
                        (0..*count).map(|_| state.next_block().to_string()).collect();
                    let mut obj = Map::new();
                    obj.insert("base".into(), json!(base.to_string()));
                    obj.insert("block_digits".into(), json!(BLOCK_DIGITS.to_string()));
                    obj.insert("blocks".into(), json!(blocks));
                    emit(cli, obj, blocks.clone());
                }
                Some(PrngOp::PiTest { groups, per_group, bound }) => {
                    let r = monte_carlo_pi(&mut state, *groups, *per_group, *bound)?;
                    let pass = (2.94..=3.34).contains(&r.mean) && r.variance <= 0.25;
                    let mut obj = Map::new();
                    obj.insert("mean".into(), json!(format!("{:.6}", r.mean)));
                    obj.insert("variance".into(), json!(format!("{:.6}", r.variance)));
                    obj.insert("pass".into(), json!(pass));
                    emit(
                        cli,
                        obj,
                        vec![
                            format!("mean: {:.6}", r.mean),
                            format!("variance: {:.6}", r.variance),
                            format!("result: {}", if pass { "pass" } else { "fail" }),
                        ],
                    );
                }
            }
        }
        Cmd::Idempotents { digits } => {
            let base = cli
                .base
                .ok_or_else(|| Error::InvalidArgument("--base is required".into()))?;
            let ctx = NadicContext::new(base, *digits)?;
            let strings: Vec<String> = idempotents(&ctx)
                .iter()
                .map(|e| e.digits().to_string())
                .collect();
            let mut obj = Map::new();
            obj.insert("base".into(), json!(base.to_string()));
            obj.insert("digits".into(), json!(digits.to_string()));
            obj.insert("idempotents".into(), json!(strings));
            let lines = strings.iter().map(|s| format!("…{s}")).collect();
            emit(cli, obj, lines);
        }
        Cmd::Lastdigits { op } => {
            let (d, label) = match op {
                LastDigitsOp::Tower(t) => {
                    let base = cli
                        .base
                        .ok_or_else(|| Error::InvalidArgument("--base is required".into()))?;
                    let ctx = NadicContext::new(t.mod_base, t.digits)?;
                    let spec = TowerSpec { base, arrows: t.arrows, height: t.height };
                    (
                        knuth_last_digits(&spec, &ctx)?,
                        format!("{base} ↑^{} {}", t.arrows, t.height),
                    )
                }
                LastDigitsOp::Graham { digits } => {
                    (graham_last_digits(*digits)?, "graham".to_string())
                }
            };
            let mut obj = Map::new();
            obj.insert("tower".into(), json!(label));
            obj.insert("digits".into(), json!(d.to_string()));
            emit(cli, obj, vec![format!("…{d}")]);
        }
    }
    Ok(())
}

fn run_cf(cli: &Cli, op: &CfOp) -> Result<(), Error> {
    match op {
        CfOp::Eval { cf, terms } => {
            let parsed = HybridCF::parse(cf)?;
            let count = match terms {
                Some(t) => *t,
                None if !parsed.is_periodic() => parsed.preperiod().len(),
                None => {
                    return Err(Error::InvalidArgument(
                        "--terms is required for a periodic expansion".into(),
                    ))
                }
            };
            let value = parsed
                .convergents(count)?
                .pop()
                .ok_or_else(|| Error::InvalidArgument("at least one digit is required".into()))?;
            let mut obj = Map::new();
            obj.insert("numerator".into(), json!(value.numer().to_string()));
            obj.insert("denominator".into(), json!(value.denom().to_string()));
            emit(cli, obj, vec![format!("{}/{}", value.numer(), value.denom())]);
        }
        CfOp::Surd { cf } => {
            let parsed = HybridCF::parse(cf)?;
            let s = periodic_to_surd(&parsed)?;
            let (qa, qb, qc) = &s.quadratic;
            let residues: Map<String, Value> = s
                .nadic_root_residues
                .iter()
                .map(|(p, r)| (p.to_string(), json!(r.to_string())))
                .collect();
            let mut obj = Map::new();
            obj.insert("real_root".into(), json!(s.real_root.to_string()));
            obj.insert("conjugate_root".into(), json!(s.conjugate_root.to_string()));
            obj.insert(
                "quadratic".into(),
                json!([qa.to_string(), qb.to_string(), qc.to_string()]),
            );
            obj.insert("nadic_root_mod_primes".into(), Value::Object(residues));
            let mut lines = vec![
                format!("real root: {}", s.real_root),
                format!("conjugate: {}", s.conjugate_root),
                format!("quadratic: ({qa})*y^2 + ({qb})*y + ({qc}) = 0"),
            ];
            for (p, r) in &s.nadic_root_residues {
                lines.push(format!("n-adic branch mod {p}: {r}"));
            }
            emit(cli, obj, lines);
        }
        CfOp::HeronCheck { a, b, n, depth } => {
            let w = verify_heron_correspondence(*a, *b, *n, *depth)?;
            emit_heron(cli, &w);
        }
        CfOp::Report { cf, depth, digits } => {
            let parsed = HybridCF::parse(cf)?;
            let r = dual_convergence_report(&parsed, *depth, *digits)?;
            let widths: Vec<String> = r.real_widths.iter().map(|w| w.to_string()).collect();
            let valuations: Vec<Value> = r
                .difference_valuations
                .iter()
                .map(|m| {
                    Value::Object(
                        m.iter().map(|(p, v)| (p.to_string(), json!(v.to_string()))).collect(),
                    )
                })
                .collect();
            let residues: Map<String, Value> = r
                .limit_residues
                .iter()
                .map(|(p, v)| (p.to_string(), json!(v.to_string())))
                .collect();
            let mut obj = Map::new();
            obj.insert("real_widths".into(), json!(widths));
            obj.insert("real_verdict".into(), json!(verdict_str(&r.real_verdict)));
            obj.insert("difference_valuations".into(), Value::Array(valuations));
            obj.insert("valuation_verdict".into(), json!(verdict_str(&r.valuation_verdict)));
            obj.insert("limit_residues".into(), Value::Object(residues));
            obj.insert(
                "stabilization_verdict".into(),
                json!(verdict_str(&r.stabilization_verdict)),
            );
            let mut lines = vec![format!(
                "real side: {} (widths: {})",
                verdict_str(&r.real_verdict),
                widths.join(", ")
            )];
            for (j, m) in r.difference_valuations.iter().enumerate() {
                let vals = m
                    .iter()
                    .map(|(p, v)| format!("v_{p}={v}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                lines.push(format!("difference c_{} - c_{j}: {vals}", j + 1));
            }
            lines.push(format!("valuation law: {}", verdict_str(&r.valuation_verdict)));
            for (p, v) in &r.limit_residues {
                lines.push(format!("limit mod {p}-component: {v}"));
            }
            lines.push(format!(
                "n-adic stabilization: {}",
                verdict_str(&r.stabilization_verdict)
            ));
            emit(cli, obj, lines);
        }
    }
    Ok(())
}

fn emit_heron(cli: &Cli, w: &nadic::cf::HeronWitness) {
    let rows: Vec<Value> = w
        .rows
        .iter()
        .map(|r| {
            json!({
                "index": r.index.to_string(),
                "heron": format!("{}/{}", r.heron.numer(), r.heron.denom()),
                "convergent": format!("{}/{}", r.convergent.numer(), r.convergent.denom()),
                "matches": r.matches,
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("x".into(), json!(w.x.to_string()));
    obj.insert("rows".into(), Value::Array(rows));
    obj.insert("all_match".into(), json!(w.all_match));
    let mut lines = vec![format!("x = {}", w.x)];
    for r in &w.rows {
        lines.push(format!(
            "iterate {}: heron {}/{} vs convergent {}/{} -> {}",
            r.index,
            r.heron.numer(),
            r.heron.denom(),
            r.convergent.numer(),
            r.convergent.denom(),
            if r.matches { "match" } else { "mismatch" }
        ));
    }
    lines.push(format!("all match: {}", w.all_match));
    emit(cli, obj, lines);
}
