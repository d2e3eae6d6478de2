//! Command-line front-end. `run` returns the exit code and the JSON document to emit, so the
//! binary stays a thin wrapper and the tests can drive commands in-process.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use witness_core::claw_solver::solve_claw;
use witness_core::instances::{
    build_section_witness, canonical_nwt_witness, claw_r, gen_claw_lb, gen_nwt_lb, gen_random, nwt_lb_q, tiling_11,
    RandomKind,
};
use witness_core::json::{parse_witness, Instance, InstanceKind};
use witness_core::laminar::{first_crossing, is_laminar, laminarize};
use witness_core::lemma_audit::{self, AuditRanges};
use witness_core::nwt_solver::{final_nodes, solve_nwt};
use witness_core::oracle::{optimal_exhaustive, optimal_laminar, DEFAULT_BUDGET};
use witness_core::{eval, q, Rational, Tree, Variant, WitnessTree};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_ASSERT: u8 = 2;

pub const DECIMAL_DIGITS: u32 = 12;
const DECIMAL_NOTE: &str = "*_decimal fields: 12 digits, round half to even, display only";

#[derive(Parser, Debug)]
#[command(name = "witness", version, about = "Exact witness-tree objectives, constructions and audits")]
pub struct Cli {
    /// Write the JSON result here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance
    Gen {
        /// nwt-lb | claw-lb | random-ca | random-ewt
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: Option<usize>,
        /// O-edge cost for claw-lb, as num/den
        #[arg(long)]
        alpha: Option<String>,
        /// Steiner node count for random families
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the canonical witness of a lower-bound family to this file
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Evaluate a witness tree
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// node | edge | component-node; defaults to the instance kind
        #[arg(long)]
        variant: Option<String>,
        /// Witness JSON file, or `canonical` for generated lower-bound instances
        #[arg(long)]
        witness: String,
    },
    /// Run the bottom-up construction on a CA-Node-Steiner instance
    SolveNwt {
        #[arg(long = "in")]
        input: PathBuf,
        /// Fail on any invariant, join or merge check, not only on the final bound
        #[arg(long)]
        audit: bool,
    },
    /// Run the offset construction on a Steiner-claw-free instance
    SolveClaw {
        #[arg(long = "in")]
        input: PathBuf,
        /// Sample the offset from this seed
        #[arg(long, conflicts_with = "exact_expectation")]
        seed: Option<u64>,
        /// Report the exact expectation and the best offset (default)
        #[arg(long)]
        exact_expectation: bool,
    },
    /// Optimal laminar (or, with --exhaustive, optimal) witness tree
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        exhaustive: bool,
        /// Enumeration budget; overrides WITNESS_BUDGET
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Uncross a witness tree without increasing its objective
    Laminarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        witness: String,
    },
    /// Validate an instance and, optionally, a witness tree on it
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        witness: Option<String>,
    },
    /// Run the exact inequality audits
    AuditLemmas {
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long)]
        range: Option<i64>,
    },
}

/// Result of a command: JSON output plus whether every asserted bound held.
pub struct Outcome {
    pub json: Value,
    pub ok: bool,
    /// Emit as is, without decimal renderings (instance files).
    pub raw: bool,
}

impl Outcome {
    fn pass(json: Value) -> Outcome {
        Outcome { json, ok: true, raw: false }
    }

    pub fn code(&self) -> u8 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_ASSERT
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// `"n/d"` strings as produced by `Rational`'s serializer.
fn as_rational(v: &Value) -> Option<Rational> {
    let s = v.as_str()?;
    let (n, d) = s.split_once('/')?;
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(n.strip_prefix('-').unwrap_or(n)) || !digits(d) {
        return None;
    }
    s.parse().ok()
}

/// Adds a `<key>_decimal` sibling next to every rational field (or array of rationals).
pub fn add_decimals(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let mut extra = Map::new();
            for (k, x) in map.iter_mut() {
                add_decimals(x);
                if let Some(r) = as_rational(x) {
                    extra.insert(format!("{k}_decimal"), Value::String(r.to_decimal(DECIMAL_DIGITS)));
                } else if let Value::Array(items) = x {
                    let rs: Option<Vec<Rational>> = items.iter().map(as_rational).collect();
                    if let (Some(rs), false) = (rs, items.is_empty()) {
                        let ds = rs.iter().map(|r| Value::String(r.to_decimal(DECIMAL_DIGITS))).collect();
                        extra.insert(format!("{k}_decimal"), Value::Array(ds));
                    }
                }
            }
            map.extend(extra);
        }
        Value::Array(items) => items.iter_mut().for_each(add_decimals),
        _ => {}
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

struct Loaded {
    inst: Instance,
    tree: Tree,
    hash: String,
}

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let inst = Instance::parse(&read(path)?)?;
    let tree = inst.to_tree()?;
    let hash = instance_hash(&inst);
    Ok(Loaded { inst, tree, hash })
}

/// SHA-256 of the canonical serialization (field order fixed, nodes and edges as given).
pub fn instance_hash(inst: &Instance) -> String {
    let digest = Sha256::digest(inst.to_json().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn variant_for(inst: &Instance, flag: &Option<String>) -> anyhow::Result<Variant> {
    match flag {
        Some(s) => Ok(s.parse()?),
        None => Ok(match inst.kind {
            InstanceKind::Nwt => Variant::Node,
            InstanceKind::Ewt => Variant::Edge,
        }),
    }
}

fn family(inst: &Instance) -> Option<&str> {
    inst.meta.get("family").and_then(Value::as_str)
}

fn canonical_witness(l: &Loaded) -> anyhow::Result<WitnessTree> {
    match family(&l.inst) {
        Some("nwt-lb") => Ok(canonical_nwt_witness(nwt_lb_q(&l.tree)?)?),
        Some("claw-lb") => {
            let q = l.inst.meta.get("q").and_then(Value::as_u64).ok_or_else(|| anyhow!("claw-lb metadata lacks q"))?;
            Ok(build_section_witness(q as usize, &tiling_11(q as usize))?)
        }
        _ => bail!("no canonical witness: instance metadata does not name a lower-bound family"),
    }
}

fn witness_arg(l: &Loaded, arg: &str) -> anyhow::Result<WitnessTree> {
    if arg == "canonical" {
        canonical_witness(l)
    } else {
        Ok(parse_witness(&read(Path::new(arg))?)?)
    }
}

fn parse_rational(s: &str) -> anyhow::Result<Rational> {
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    s.parse::<i64>().map(Rational::integer).map_err(|_| anyhow!("cannot parse {s:?} as num/den"))
}

/// Budget from the flag, else `WITNESS_BUDGET`, else the library default.
pub fn budget(flag: Option<u128>) -> anyhow::Result<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("WITNESS_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| anyhow!("WITNESS_BUDGET={s:?} is not an integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn gen(family: &str, q_: Option<usize>, alpha: Option<String>, n: Option<usize>, seed: u64) -> anyhow::Result<(Instance, Option<WitnessTree>)> {
    let need_q = || q_.ok_or_else(|| anyhow!("--q is required for {family}"));
    Ok(match family {
        "nwt-lb" => {
            let qv = need_q()?;
            let t = gen_nwt_lb(qv)?;
            let meta = json!({"family": family, "q": qv, "indexing": "blocks B_1..B_q"});
            (Instance::from_tree(InstanceKind::Nwt, &t, meta), Some(canonical_nwt_witness(qv)?))
        }
        "claw-lb" => {
            let qv = need_q()?;
            let a = match alpha {
                Some(s) => parse_rational(&s)?,
                None => q(32, 90),
            };
            let t = gen_claw_lb(qv, &a)?;
            let meta = json!({
                "family": family,
                "q": qv,
                "alpha": a.to_string(),
                "indexing": format!("s_0..s_{} are ids 0..={}, r_i is id {}+i", qv + 1, qv + 1, claw_r(qv, 0)),
            });
            (Instance::from_tree(InstanceKind::Ewt, &t, meta), Some(build_section_witness(qv, &tiling_11(qv))?))
        }
        "random-ca" | "random-ewt" => {
            let nv = n.or(q_).ok_or_else(|| anyhow!("--n is required for {family}"))?;
            let (kind, ik, range) = if family == "random-ca" {
                (RandomKind::Ca, InstanceKind::Nwt, (Rational::one(), Rational::one()))
            } else {
                (RandomKind::Ewt, InstanceKind::Ewt, (Rational::zero(), Rational::integer(2)))
            };
            let t = gen_random(kind, nv, seed, range)?;
            let meta = json!({"family": family, "n": nv, "seed": seed});
            (Instance::from_tree(ik, &t, meta), None)
        }
        _ => bail!("unknown family {family:?}"),
    })
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Gen { family, q, alpha, n, seed, witness_out } => {
            let (inst, w) = gen(family, *q, alpha.clone(), *n, *seed)?;
            if let Some(path) = witness_out {
                let w = w.ok_or_else(|| anyhow!("{family} has no canonical witness"))?;
                fs::write(path, serde_json::to_string(&w)? + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome { json: to_value(&inst), ok: true, raw: true })
        }
        Command::Eval { input, variant, witness } => {
            let l = load(input)?;
            let v = variant_for(&l.inst, variant)?;
            let w = witness_arg(&l, witness)?;
            let value = eval(&l.tree, &w, v)?;
            Ok(Outcome::pass(json!({
                "instance_sha256": l.hash,
                "variant": v,
                "witness": w,
                "objective": value,
                "laminar": is_laminar(&l.tree, &w)?,
            })))
        }
        Command::SolveNwt { input, audit } => {
            let l = load(input)?;
            let report = solve_nwt(&l.tree)?;
            let ok = if *audit { report.passed } else { report.within_bound };
            let mut out = to_value(&report);
            out["instance_sha256"] = json!(l.hash);
            Ok(Outcome { json: out, ok, raw: false })
        }
        Command::SolveClaw { input, seed, exact_expectation: _ } => {
            let l = load(input)?;
            let report = solve_claw(&l.tree, *seed)?;
            let mut out = to_value(&report);
            out["instance_sha256"] = json!(l.hash);
            Ok(Outcome { json: out, ok: report.passed, raw: false })
        }
        Command::Oracle { input, variant, exhaustive, budget: b } => {
            let l = load(input)?;
            let v = variant_for(&l.inst, variant)?;
            let opt = if *exhaustive {
                optimal_exhaustive(&l.tree, v)?
            } else {
                optimal_laminar(&l.tree, v, budget(*b)?)?
            };
            Ok(Outcome::pass(json!({
                "instance_sha256": l.hash,
                "variant": v,
                "exhaustive": exhaustive,
                "value": opt.value,
                "witness": opt.witness,
                "searched": opt.searched.to_string(),
            })))
        }
        Command::Laminarize { input, variant, witness } => {
            let l = load(input)?;
            let v = variant_for(&l.inst, variant)?;
            let w = witness_arg(&l, witness)?;
            let before = eval(&l.tree, &w, v)?;
            let out_w = laminarize(&l.tree, &w, v)?;
            let after = eval(&l.tree, &out_w, v)?;
            let laminar = is_laminar(&l.tree, &out_w)?;
            let ok = laminar && after <= before;
            Ok(Outcome {
                json: json!({
                    "instance_sha256": l.hash,
                    "variant": v,
                    "witness": out_w,
                    "before": before,
                    "after": after,
                    "laminar": laminar,
                }),
                ok,
                raw: false,
            })
        }
        Command::Check { input, variant, witness } => {
            let l = load(input)?;
            let t = &l.tree;
            let mut out = json!({
                "instance_sha256": l.hash,
                "nodes": t.node_count(),
                "edges": t.edge_count(),
                "terminals": t.terminals().len(),
                "total_cost": t.total_cost(),
                "ca": final_nodes(t).is_ok(),
                "claw_free": witness_core::claw_solver::normalize(t).is_ok(),
            });
            let mut ok = true;
            if let Some(arg) = witness {
                let v = variant_for(&l.inst, variant)?;
                let w = witness_arg(&l, arg)?;
                match w.validate(t, v) {
                    Ok(_) => {
                        out["witness_valid"] = json!(true);
                        out["objective"] = to_value(&eval(t, &w, v)?);
                        out["crossing"] = to_value(&first_crossing(t, &w)?);
                    }
                    Err(e) => {
                        ok = false;
                        out["witness_valid"] = json!(false);
                        out["witness_error"] = json!(e.to_string());
                    }
                }
            }
            Ok(Outcome { json: out, ok, raw: false })
        }
        Command::AuditLemmas { lemma, range } => {
            let ranges = AuditRanges::default();
            let reports = match lemma {
                Some(name) => vec![lemma_audit::run(name, *range, &ranges).ok_or_else(|| {
                    anyhow!("unknown lemma {name:?}; known: {}", lemma_audit::LEMMAS.join(", "))
                })?],
                None => {
                    if range.is_some() {
                        bail!("--range needs --lemma");
                    }
                    lemma_audit::run_all(&ranges)
                }
            };
            let ok = reports.iter().all(|r| r.passed);
            Ok(Outcome { json: json!({"passed": ok, "audits": reports}), ok, raw: false })
        }
    }
}

/// Runs a parsed command line; returns the exit code. Output goes to `--out` or standard output.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(mut outcome) => {
            if !outcome.raw {
                add_decimals(&mut outcome.json);
                if let Value::Object(map) = &mut outcome.json {
                    map.insert("decimal_note".into(), json!(DECIMAL_NOTE));
                }
            }
            let text = serde_json::to_string_pretty(&outcome.json).expect("json renders") + "\n";
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
                None => print!("{text}"),
            }
            outcome.code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_sit_next_to_rationals() {
        let mut v = json!({"value": "2/3", "xs": ["1/8", "-1/3"], "range": "3 <= x", "n": 4, "inner": [{"c": "1/2"}]});
        add_decimals(&mut v);
        assert_eq!(v["value_decimal"], "0.666666666667");
        assert_eq!(v["xs_decimal"], json!(["0.125000000000", "-0.333333333333"]));
        assert_eq!(v["inner"][0]["c_decimal"], "0.500000000000");
        assert!(v.get("range_decimal").is_none());
        assert!(v.get("n_decimal").is_none());
    }

    #[test]
    fn half_even_rounding() {
        // 1/(2 * 10^12) sits exactly halfway between two 12-digit values
        let half: Rational = "1/2000000000000".parse().unwrap();
        assert_eq!(half.to_decimal(DECIMAL_DIGITS), "0.000000000000");
        let three_halves: Rational = "3/2000000000000".parse().unwrap();
        assert_eq!(three_halves.to_decimal(DECIMAL_DIGITS), "0.000000000002");
    }

    #[test]
    fn budget_flag_wins() {
        assert_eq!(budget(Some(5)).unwrap(), 5);
    }
}
