//! Dispatch from a parsed command line to the library, with the canonical
//! configuration embedded in every report.

use std::fs;

use arboreal::algebra::{parse_int_polynomial, parse_rational, FactorBudget, IntPolynomial};
use arboreal::census::{convergence_experiment, Variant};
use arboreal::certify::{certify_chain, certify_chain_with, CertifyOptions};
use arboreal::dynamics::{
    classify_set, escape_criterion, orbit_contains_finite_orbit_point, orbit_from, semigroup_orbit,
    FiniteOrbitVerdict, GeneratorSet, OrbitCaps, OrbitStatus, Ring, SequenceCoding,
};
use arboreal::galois_process::{
    fpp_bounds, fpp_full_binary, sample_and_certify, sample_coding, simulate_process,
    NonMaximalModel, Weights, EXACT_FPP_MAX, MAX_DEPTH,
};
use arboreal::prime_density::{density_profile, fpp_comparison, ScanOptions};
use arboreal::VERSION;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{Cli, Command, Format, ModelTag, RingTag, SetArgs, VariantTag};
use crate::error::{CliError, CliResult};

/// Exit status when the answer is dominated by inconclusive outcomes.
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// The canonical form of an invocation: parsed values re-rendered, so
/// equivalent command lines produce the same configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub set: Option<String>,
    pub ring: Option<RingTag>,
    pub coding: Option<String>,
    pub seed: u64,
    pub format: Format,
    pub output: Option<String>,
    pub budgets: Value,
    pub params: Value,
}

/// A finished report and the process exit code it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

fn ring_of(tag: RingTag) -> Ring {
    match tag {
        RingTag::Z => Ring::Integers,
        RingTag::Qt => Ring::IntPolynomials,
    }
}

fn parse_set(constants: &Option<String>, maps: &Option<String>, ring: RingTag) -> CliResult<GeneratorSet> {
    Ok(match (constants, maps) {
        (Some(c), _) => GeneratorSet::parse_critical(c, ring_of(ring))?,
        (None, Some(s)) => GeneratorSet::parse_maps(s, ring_of(ring))?,
        (None, None) => return Err(CliError::Usage("either --c or --set is required".into())),
    })
}

fn set_from(args: &SetArgs) -> CliResult<GeneratorSet> {
    parse_set(&args.constants, &args.set, args.ring)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn envelope(config: &RunConfig, result: Value) -> String {
    let doc = json!({
        "tool": "arboreal",
        "version": VERSION,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_with_header(config: &RunConfig, body: &str) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!("# arboreal {VERSION}\n# config {cfg}\n{body}")
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

struct Draft {
    set: Option<GeneratorSet>,
    ring: Option<RingTag>,
    coding: Option<SequenceCoding>,
    budgets: Value,
    params: Value,
}

impl Draft {
    fn new() -> Self {
        Draft {
            set: None,
            ring: None,
            coding: None,
            budgets: json!({}),
            params: json!({}),
        }
    }

    fn with_set(mut self, set: GeneratorSet, ring: RingTag) -> Self {
        self.set = Some(set);
        self.ring = Some(ring);
        self
    }
}

fn parse_coding(src: &str) -> CliResult<SequenceCoding> {
    Ok(src.parse::<SequenceCoding>()?)
}

/// Computes the report for `cli` without touching the filesystem.
pub fn render(cli: &Cli) -> CliResult<Outcome> {
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let csv_capable = matches!(cli.command, Command::Census { .. } | Command::Primes { .. });
    if format == Format::Csv && !csv_capable {
        return Err(usage(format!("{} reports are json only", cli.command.name())));
    }
    let (draft, result, csv, code) = dispatch(&cli.command, cli.seed)?;
    let config = RunConfig {
        subcommand: cli.command.name(),
        set: draft.set.as_ref().map(GeneratorSet::render),
        ring: draft.ring,
        coding: draft.coding.as_ref().map(ToString::to_string),
        seed: cli.seed,
        format,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
        budgets: draft.budgets,
        params: draft.params,
    };
    let body = match (format, csv) {
        (Format::Csv, Some(csv)) => csv_with_header(&config, &csv),
        (Format::Csv, None) => return Err(usage("this report has no csv form")),
        (Format::Json, _) => envelope(&config, result),
    };
    Ok(Outcome { body, code })
}

/// Renders the report, writes it, and returns the exit code.
pub fn run(cli: &Cli) -> CliResult<i32> {
    let out = render(cli)?;
    match &cli.output {
        Some(path) => fs::write(path, &out.body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{}", out.body),
    }
    Ok(out.code)
}

type Dispatched = (Draft, Value, Option<String>, i32);

fn dispatch(cmd: &Command, seed: u64) -> CliResult<Dispatched> {
    match cmd {
        Command::Classify { set } => {
            let s = set_from(set)?;
            let verdict = classify_set(&s)?;
            Ok((Draft::new().with_set(s, set.ring), to_value(verdict), None, 0))
        }
        Command::Orbit {
            set,
            coding,
            depth,
            start,
            closure,
            caps,
        } => {
            let s = set_from(set)?;
            let c = parse_coding(coding)?;
            let p = parse_int_polynomial(start)?;
            let values = orbit_from(&s, &c, &p, *depth)?;
            let caps = OrbitCaps {
                size_cap: caps.size_cap,
                height_cap: caps.height_cap,
            };
            let mut result = json!({
                "start": p.to_string(),
                "values": values.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "escape_criterion": escape_criterion(&s).ok(),
            });
            let mut code = 0;
            if *closure {
                let (closure, unknown) = closure_json(&s, &p, caps);
                result["closure"] = closure;
                if unknown {
                    code = EXIT_INCONCLUSIVE;
                }
            }
            let mut draft = Draft::new().with_set(s, set.ring);
            draft.coding = Some(c);
            draft.budgets = json!({ "orbit_size_cap": caps.size_cap, "orbit_height_cap": caps.height_cap });
            draft.params = json!({ "depth": depth, "start": p.to_string(), "closure": closure });
            Ok((draft, result, None, code))
        }
        Command::Certify {
            set,
            coding,
            depth,
            factor,
            eisenstein_cap,
        } => {
            let s = set_from(set)?;
            let c = parse_coding(coding)?;
            let opts = CertifyOptions {
                budget: FactorBudget {
                    trial_bound: factor.factor_trial,
                    rho_iterations: factor.factor_rho,
                },
                eisenstein_cap: *eisenstein_cap,
            };
            let chain = certify_chain_with(&s, &c, *depth, &opts)?;
            let code = if chain.summary.inconclusive { EXIT_INCONCLUSIVE } else { 0 };
            let mut draft = Draft::new().with_set(s, set.ring);
            draft.coding = Some(c);
            draft.budgets = json!({
                "factor_trial": factor.factor_trial,
                "factor_rho": factor.factor_rho,
                "eisenstein_cap": eisenstein_cap,
            });
            draft.params = json!({ "depth": depth });
            Ok((draft, to_value(&chain), None, code))
        }
        Command::Census { d, s, b, variant } => {
            let v = match variant {
                VariantTag::Even => Variant::Even,
                VariantTag::Odd => Variant::Odd,
                VariantTag::Monic => Variant::Monic,
            };
            let report = convergence_experiment(*d, *s, b, v)?;
            let mut draft = Draft::new();
            draft.params = json!({ "d": d, "s": s, "b": b, "variant": variant });
            Ok((draft, to_value(&report), Some(report.to_csv()), 0))
        }
        Command::Fpp { depth } => {
            if *depth == 0 {
                return Err(usage("--depth must be at least 1"));
            }
            let levels: Vec<Value> = fpp_bounds(*depth, 128)
                .iter()
                .enumerate()
                .map(|(i, (lo, hi))| {
                    let n = i + 1;
                    json!({
                        "n": n,
                        "exact": (n <= EXACT_FPP_MAX).then(|| fpp_full_binary(n).map(|f| f.to_string()).ok()).flatten(),
                        "lower": lo.to_f64(),
                        "upper": hi.to_f64(),
                    })
                })
                .collect();
            let mut draft = Draft::new();
            draft.params = json!({ "depth": depth });
            Ok((draft, json!({ "levels": levels }), None, 0))
        }
        Command::Simulate {
            depth,
            trials,
            nonmaximal_model,
            mask,
            constants,
            set,
            ring,
            coding,
        } => {
            if *depth == 0 || *depth > MAX_DEPTH {
                return Err(usage(format!("--depth must lie in 1..={MAX_DEPTH}")));
            }
            let mut draft = Draft::new();
            let (bits, source) = match (mask, constants.is_some() || set.is_some()) {
                (Some(m), _) => (parse_mask(m, *depth)?, "mask"),
                (None, true) => {
                    let s = parse_set(constants, set, *ring)?;
                    let c = parse_coding(coding)?;
                    let chain = certify_chain(&s, &c, *depth)?;
                    let bits = (1..=*depth).map(|n| chain.summary.maximal_levels.contains(&n)).collect();
                    draft = draft.with_set(s, *ring);
                    draft.coding = Some(c);
                    (bits, "certificate")
                }
                (None, false) => (vec![true; *depth], "all_maximal"),
            };
            let model = match nonmaximal_model {
                ModelTag::Double => NonMaximalModel::Double,
                ModelTag::Hold => NonMaximalModel::Hold,
            };
            let report = simulate_process(seed, *trials, &bits, model)?;
            draft.params = json!({
                "depth": depth,
                "trials": trials,
                "nonmaximal_model": nonmaximal_model,
                "mask": bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>(),
                "mask_source": source,
            });
            Ok((draft, to_value(&report), None, 0))
        }
        Command::Sample {
            set,
            weights,
            length,
            samples,
            certify_depth,
        } => {
            let s = set_from(set)?;
            let w = if weights.is_empty() {
                Weights::uniform(s.len())?
            } else {
                let ws = weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>, _>>()?;
                Weights::new(&ws)?
            };
            if w.len() != s.len() {
                return Err(usage(format!("{} weights for {} maps", w.len(), s.len())));
            }
            let report = sample_coding(&w, seed, *length, *samples)?;
            let certified = match certify_depth {
                Some(d) => Some(sample_and_certify(&s, &w, seed, *d, *samples)?),
                None => None,
            };
            let mut draft = Draft::new().with_set(s, set.ring);
            draft.params = json!({
                "weights": w.values().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "length": length,
                "samples": samples,
                "certify_depth": certify_depth,
            });
            let result = json!({ "report": report, "certified": certified });
            Ok((draft, result, None, 0))
        }
        Command::Primes {
            set,
            coding,
            a0,
            cutoffs,
            zero_cap,
            visit_cap,
            max_cutoff,
            fpp_depth,
        } => {
            let s = set_from(set)?;
            let c = parse_coding(coding)?;
            let a = parse_rational(a0)?;
            let opts = ScanOptions {
                zero_cap: *zero_cap,
                visit_cap: *visit_cap,
                max_cutoff: *max_cutoff,
            };
            let report = density_profile(&s, &c, &a, cutoffs, &opts)?;
            let code = if report.undecided.is_empty() { 0 } else { EXIT_INCONCLUSIVE };
            let mut result = to_value(&report);
            let mut csv = Some(report.to_csv());
            if let Some(depth) = fpp_depth {
                let last = *cutoffs.last().expect("nonempty after the scan");
                result["fpp_comparison"] = to_value(fpp_comparison(&s, &c, &a, *depth, last, &opts)?);
                csv = None;
            }
            let mut draft = Draft::new().with_set(s, set.ring);
            draft.coding = Some(c);
            draft.budgets = json!({ "zero_cap": zero_cap, "visit_cap": visit_cap, "max_cutoff": max_cutoff });
            draft.params = json!({ "a0": a.to_string(), "cutoffs": cutoffs, "fpp_depth": fpp_depth });
            Ok((draft, result, csv, code))
        }
    }
}

fn closure_json(s: &GeneratorSet, p: &IntPolynomial, caps: OrbitCaps) -> (Value, bool) {
    let strings = |v: &[IntPolynomial]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let (status, unknown) = match semigroup_orbit(s, p, caps) {
        OrbitStatus::Closed(pts) => (json!({ "status": "closed", "points": strings(&pts) }), false),
        OrbitStatus::Escaping(level) => (json!({ "status": "escaping", "level": level }), false),
        OrbitStatus::Unknown(pts) => (json!({ "status": "unknown", "visited": pts.len() }), true),
    };
    let (finite, finite_unknown) = match orbit_contains_finite_orbit_point(s, p, caps) {
        FiniteOrbitVerdict::Yes(w) => (json!({ "status": "yes", "witness": w.to_string() }), false),
        FiniteOrbitVerdict::No => (json!({ "status": "no" }), false),
        FiniteOrbitVerdict::Unknown => (json!({ "status": "unknown" }), true),
    };
    (json!({ "semigroup": status, "finite_orbit_point": finite }), unknown && finite_unknown)
}

fn parse_mask(m: &str, depth: usize) -> CliResult<Vec<bool>> {
    let bits = m
        .chars()
        .enumerate()
        .map(|(i, ch)| match ch {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(usage(format!("mask position {i}: expected 0 or 1, found {ch:?}"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    if bits.len() != depth {
        return Err(usage(format!("mask has {} levels, depth is {depth}", bits.len())));
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn go(args: &[&str]) -> CliResult<Outcome> {
        let mut v = vec!["arboreal"];
        v.extend_from_slice(args);
        render(&Cli::try_parse_from(v).expect("valid command line"))
    }

    fn result(out: &Outcome) -> Value {
        serde_json::from_str::<Value>(&out.body).unwrap()["result"].clone()
    }

    #[test]
    fn classify_exceptional_pair() {
        let out = go(&["classify", "--c", "-2; -6"]).unwrap();
        let r = result(&out);
        assert_eq!(r["verdict"], "Exceptional");
        assert_eq!(r["witness_point"], "-2");
        assert_eq!(out.code, 0);
    }

    #[test]
    fn equivalent_inputs_share_a_config() {
        let a = go(&["classify", "--c", "-2;-6"]).unwrap();
        let b = go(&["classify", "--c", " -2 ; -6 "]).unwrap();
        assert_eq!(a, b);
        let a = go(&["certify", "--c", "1", "--coding", "|1", "--depth", "3"]).unwrap();
        let b = go(&["certify", "--c", "1", "--coding", "| 1", "--depth", "3"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tool_example_over_qt() {
        let out = go(&["certify", "--ring", "qt", "--c", "t", "--coding", "|1", "--depth", "6"]).unwrap();
        let r = result(&out);
        assert_eq!(r["summary"]["maximal_levels"], json!([1, 2, 3, 4, 5, 6]));
        assert_eq!(r["summary"]["tool_guarantee"], true);
        assert_eq!(out.code, 0);
    }

    #[test]
    fn csv_only_where_defined() {
        assert!(go(&["fpp", "--format", "csv"]).is_err());
        let out = go(&["census", "--d", "2", "--s", "2", "--b", "1,2", "--variant", "even"]).unwrap();
        assert!(out.body.starts_with("# arboreal "));
        assert!(out.body.contains("\nd,s,B,fraction_num"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = go(&["classify", "--c", "2^^3"]).unwrap_err();
        assert!(e.to_string().contains("position"), "{e}");
        assert!(go(&["orbit", "--c", "1", "--coding", "1,x|2"]).is_err());
        assert!(go(&["classify"]).is_err());
    }

    #[test]
    fn masks() {
        assert_eq!(parse_mask("101", 3).unwrap(), vec![true, false, true]);
        assert!(parse_mask("10", 3).is_err());
        assert!(parse_mask("1x1", 3).is_err());
        let out = go(&["simulate", "--depth", "3", "--trials", "50", "--mask", "011"]).unwrap();
        assert_eq!(result(&out)["levels"][0]["p_hat"], 1.0);
    }

    #[test]
    fn orbit_closure_of_an_exceptional_set() {
        let out = go(&["orbit", "--c", "0; -1", "--closure", "--depth", "3"]).unwrap();
        let r = result(&out);
        assert_eq!(r["closure"]["semigroup"]["points"], json!(["-1", "0", "1"]));
        assert_eq!(r["closure"]["finite_orbit_point"]["status"], "yes");
    }
}
