//! One function per subcommand, each returning its output text. Apart from
//! `bench`, equal inputs and seed give equal bytes.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use kpebble::consistency::establish_strong_k_consistency;
use kpebble::gadgets::{
    assemble_with, build_choice, build_init, build_rule_gadgets, build_switch, decolor, pair_dot, plain_dot, structure_dot, GamePair,
    Orientation, PlainPair, Side,
};
use kpebble::gen::{kai_sweep, random_kai, rng};
use kpebble::harness::{crossvalidate, plain_winner, summarize, CrossOptions};
use kpebble::kai::{solve_kai, KaiInstance, Rule};
use kpebble::lemmas::{choice_lemmas, init_lemmas, lemma_suite, rule_lemmas, switch_lemmas, LemmaCheck, Sampling};
use kpebble::{solve_game, validate_structure, Error, SolveOptions, Structure};

use crate::{Command, Common, GadgetName, LemmaFilter, Violation};

/// What a subcommand produced.
pub struct Outcome {
    pub text: String,
    pub inputs: Vec<PathBuf>,
    /// Set when a checked property failed; the text is still written.
    pub violation: Option<String>,
}

impl Outcome {
    fn new(text: String, inputs: Vec<PathBuf>) -> Self {
        Outcome { text, inputs, violation: None }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<KaiInstance> {
    let inst: KaiInstance = serde_json::from_value(read_json(path)?).with_context(|| format!("KAI instance in {}", path.display()))?;
    inst.validate()?;
    Ok(inst)
}

/// Anything a pebble game can be played on.
enum PairInput {
    Colored(GamePair),
    Plain(PlainPair),
    Raw(Structure, Structure),
}

impl PairInput {
    fn structures(&self) -> (&Structure, &Structure) {
        match self {
            PairInput::Colored(p) => (&p.spoiler, &p.duplicator),
            PairInput::Plain(p) => (&p.spoiler, &p.duplicator),
            PairInput::Raw(a, b) => (a, b),
        }
    }
}

/// Accepts the output of `reduce`, a game pair, a decolored pair or `{"a": .., "b": ..}`.
fn load_pair(path: &Path) -> Result<PairInput> {
    let v = read_json(path)?;
    let ctx = || format!("pair in {}", path.display());
    let pair = if let Some(c) = v.get("colored") {
        PairInput::Colored(serde_json::from_value(c.clone()).with_context(ctx)?)
    } else if v.get("spoiler_names").is_some() {
        PairInput::Colored(serde_json::from_value(v).with_context(ctx)?)
    } else if v.get("spoiler").is_some() {
        PairInput::Plain(serde_json::from_value(v).with_context(ctx)?)
    } else if let (Some(a), Some(b)) = (v.get("a"), v.get("b")) {
        PairInput::Raw(serde_json::from_value(a.clone()).with_context(ctx)?, serde_json::from_value(b.clone()).with_context(ctx)?)
    } else {
        return Err(Error::Input(format!("{}: expected a game pair, a plain pair or {{\"a\", \"b\"}}", path.display())).into());
    };
    let (a, b) = pair.structures();
    for (side, s) in [("a", a), ("b", b)] {
        let report = validate_structure(s);
        if !report.is_valid() {
            return Err(Error::Input(format!("structure {side}: {}", serde_json::to_string(&report.issues)?)).into());
        }
    }
    Ok(pair)
}

fn opts(common: &Common) -> SolveOptions {
    SolveOptions::default().with_budget(common.budget).with_exec(common.exec())
}

pub fn run(command: &Command, common: &Common) -> Result<Outcome> {
    match command {
        Command::GenKai { k, nodes, rule_triples } => {
            let inst = random_kai(&mut rng(common.seed), *k, *nodes, *rule_triples)?;
            Ok(Outcome::new(to_json(&inst)?, vec![]))
        }
        Command::SolveKai { instance } => {
            let inst = load_instance(instance)?;
            let sol = solve_kai(&inst, common.budget)?;
            Ok(Outcome::new(to_json(&sol)?, vec![instance.clone()]))
        }
        Command::Reduce { instance, decolor } => {
            let inst = load_instance(instance)?;
            let out = assemble_with(&inst, decolor.unwrap_or_default())?;
            let mut v = json!({ "k": inst.k, "pebbles": inst.k + 1, "colored": out.colored, "sizes": out.sizes });
            if decolor.is_some() {
                v["plain"] = serde_json::to_value(&out.plain)?;
            }
            Ok(Outcome::new(to_json(&v)?, vec![instance.clone()]))
        }
        Command::SolvePebble { input, k, decolor: orientation } => solve_pebble(input, *k, *orientation, common),
        Command::Consistency { input, k } => {
            let pair = load_pair(input)?;
            let (a, b) = pair.structures();
            let res = establish_strong_k_consistency(a, b, *k, common.budget, common.exec())?;
            let v = json!({
                "k": k,
                "establishable": res.establishable,
                "rounds": res.rounds,
                "maps": res.family.len(),
                "relations": res.relations(),
            });
            Ok(Outcome::new(to_json(&v)?, vec![input.clone()]))
        }
        Command::VerifyLemmas { k, nodes, m, sample, lemma } => verify_lemmas(*k, *nodes, m, *sample, *lemma, common),
        Command::Crossvalidate { k, nodes, rule_triples, random, decolor } => {
            let instances = match random {
                Some(count) => {
                    let mut r = rng(common.seed);
                    (0..*count).map(|_| random_kai(&mut r, *k, *nodes, *rule_triples)).collect::<kpebble::Result<Vec<_>>>()?
                }
                None => kai_sweep(*k, *nodes, *rule_triples)?,
            };
            let cross = CrossOptions { budget: common.budget, decolor: *decolor, exec: common.exec() };
            let cases = crossvalidate(&instances, &cross)?;
            let summary = summarize(&cases);
            let sweep = json!({ "k": k, "nodes": nodes, "rule_triples": rule_triples, "random": random, "seed": common.seed });
            let v = json!({ "sweep": sweep, "summary": summary, "cases": cases });
            let mut out = Outcome::new(to_json(&v)?, vec![]);
            if summary.disagreements > 0 {
                out.violation = Some(format!("{} of {} cases disagree", summary.disagreements, summary.cases));
            }
            Ok(out)
        }
        Command::ExportDot { input, side, gadget, k, nodes, m, start, rule, decolor: orientation } => {
            let text = match (input, gadget) {
                (Some(path), None) => match load_pair(path)? {
                    PairInput::Colored(p) => match orientation {
                        Some(o) => plain_dot(&decolor(&p, *o)?, *side),
                        None => pair_dot(&p, *side),
                    },
                    PairInput::Plain(p) => plain_dot(&p, *side),
                    PairInput::Raw(a, b) => {
                        let s = if *side == Side::Spoiler { &a } else { &b };
                        structure_dot(s, None, None, true)
                    }
                },
                (None, Some(g)) => {
                    let (Some(k), Some(n)) = (k, nodes) else { bail!(Error::Input("--gadget needs --k and --nodes".into())) };
                    let pair = gadget_pair(*g, *k, *n, *m, start.as_deref(), rule.as_deref())?;
                    match orientation {
                        Some(o) => plain_dot(&decolor(&pair, *o)?, *side),
                        None => pair_dot(&pair, *side),
                    }
                }
                _ => bail!(Error::Input("give either an input file or --gadget".into())),
            };
            Ok(Outcome::new(text, input.iter().cloned().collect()))
        }
        Command::Bench { k, nodes, rule_triples } => bench(*k, *nodes, *rule_triples, common),
    }
}

fn solve_pebble(input: &Path, k: usize, orientation: Option<Orientation>, common: &Common) -> Result<Outcome> {
    let pair = load_pair(input)?;
    let plain = match (&pair, orientation) {
        (PairInput::Colored(p), Some(o)) => Some(decolor(p, o)?),
        (PairInput::Plain(p), _) => Some(p.clone()),
        _ => None,
    };
    let v = match plain {
        Some(p) => {
            let winner = plain_winner(&p, k, opts(common))?;
            json!({ "pebbles": k, "winner": winner, "spoiler_vertices": p.spoiler.universe, "duplicator_vertices": p.duplicator.universe })
        }
        None => {
            let (a, b) = pair.structures();
            let res = solve_game(a, b, k, opts(common))?;
            json!({
                "pebbles": k,
                "winner": res.winner,
                "spoiler_vertices": a.universe,
                "duplicator_vertices": b.universe,
                "stats": res.fixpoint.stats,
            })
        }
    };
    Ok(Outcome::new(to_json(&v)?, vec![input.to_path_buf()]))
}

fn gadget_pair(g: GadgetName, k: u32, n: u32, m: u32, start: Option<&[u32]>, rule: Option<&[u32]>) -> Result<GamePair> {
    let gadget = match g {
        GadgetName::Switch => build_switch(k, n)?,
        GadgetName::Choice => build_choice(k, n, m)?,
        GadgetName::Init => {
            let default: Vec<u32> = (1..=k).collect();
            build_init(start.unwrap_or(&default), k, n)?
        }
        GadgetName::Rs | GadgetName::Rd => {
            let Some(&[u, v, w, c, d]) = rule else { bail!(Error::Input("--rule needs five values u,v,w,c,d".into())) };
            let (rs, rd) = build_rule_gadgets(&Rule { u, v, w, c, d }, k, n)?;
            if g == GadgetName::Rs {
                rs
            } else {
                rd
            }
        }
    };
    Ok(gadget.pair)
}

fn verify_lemmas(k: u32, n: u32, ms: &[u32], sample: Option<usize>, filter: LemmaFilter, common: &Common) -> Result<Outcome> {
    let sampling = match sample {
        Some(per_clause) => Sampling::Random { per_clause, seed: common.seed },
        None => Sampling::Exhaustive,
    };
    let exec = common.exec();
    let checks: Vec<LemmaCheck> = match filter {
        LemmaFilter::All => lemma_suite(k, n, ms, sampling, exec)?,
        LemmaFilter::Rule => rule_lemmas(k, n, sampling, exec)?,
        LemmaFilter::Switch => switch_lemmas(k, n, sampling, exec)?,
        LemmaFilter::Init => init_lemmas(k, n, sampling, exec)?,
        LemmaFilter::Choice => {
            let mut all = Vec::new();
            for &m in ms {
                all.extend(choice_lemmas(k, n, m, sampling, exec)?);
            }
            all
        }
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let v = json!({
        "k": k,
        "nodes": n,
        "sampling": sampling,
        "checks": checks.len(),
        "passed": checks.len() - failed,
        "failed": failed,
        "results": checks,
    });
    let mut out = Outcome::new(to_json(&v)?, vec![]);
    if failed > 0 {
        out.violation = Some(format!("{failed} lemma checks failed"));
    }
    Ok(out)
}

/// Least-squares slope of `ln t` against `ln n`.
fn exponent(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(n, t)| (n.ln(), t.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / len, pts.iter().map(|p| p.1).sum::<f64>() / len);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Timings are reported, so unlike the other subcommands the output is not
/// byte-stable across runs.
fn bench(k: u32, max_nodes: u32, triples: usize, common: &Common) -> Result<Outcome> {
    let mut r = rng(common.seed);
    let mut rows = Vec::new();
    let mut curve = Vec::new();
    for n in (k + 1).max(3)..=max_nodes {
        let inst = random_kai(&mut r, k, n, triples)?;
        let out = assemble_with(&inst, Orientation::Text)?;
        let start = Instant::now();
        let res = solve_game(&out.colored.spoiler, &out.colored.duplicator, k as usize + 1, opts(common))?;
        let secs = start.elapsed().as_secs_f64();
        curve.push((n as f64, secs));
        rows.push(json!({
            "nodes": n,
            "vertices": out.sizes.vertices(),
            "winner": res.winner,
            "configs": res.fixpoint.stats.configs,
            "seconds": secs,
        }));
    }
    let v = json!({ "k": k, "rule_triples": triples, "points": rows, "exponent": exponent(&curve) });
    Ok(Outcome::new(to_json(&v)?, vec![]))
}

/// The error carried by an outcome with a failed property.
pub fn violation_error(out: &Outcome) -> Option<anyhow::Error> {
    out.violation.as_ref().map(|v| Violation(v.clone()).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use kpebble::Winner;

    #[test]
    fn exponent_of_a_power_law() {
        let pts: Vec<(f64, f64)> = (2..6).map(|n| (n as f64, (n as f64).powi(3))).collect();
        assert!((exponent(&pts).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(exponent(&pts[..1]), None);
    }

    #[test]
    fn winner_serializes_lowercase() {
        assert_eq!(serde_json::to_string(&Winner::Spoiler).unwrap(), "\"spoiler\"");
    }
}
