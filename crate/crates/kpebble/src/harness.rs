//! Cross-validation of the reduction: KAI winner against pebble-game winner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gadgets::{assemble_with, Orientation, PlainPair};
use crate::kai::{solve_kai, KaiInstance, KaiWinner};
use crate::solver::{solve_game, SolveOptions, Winner};
use crate::structures::is_partial_hom;

#[derive(Clone, Copy, Debug)]
pub struct CrossOptions {
    /// Per-case bound on stored configurations (and on KAI positions).
    pub budget: u64,
    /// Also solve the decolored pair in this orientation.
    pub decolor: Option<Orientation>,
    pub exec: Exec,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions { budget: 100_000_000, decolor: None, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub instance: KaiInstance,
    pub kai: Option<KaiWinner>,
    pub colored: Option<Winner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plain: Option<Winner>,
    pub spoiler_vertices: usize,
    pub duplicator_vertices: usize,
    /// Why the case was not decided, e.g. an exceeded budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// The pebble-game winner that corresponds to a KAI winner.
pub fn expected_winner(w: KaiWinner) -> Winner {
    match w {
        KaiWinner::Player1 => Winner::Spoiler,
        KaiWinner::Player2 => Winner::Duplicator,
    }
}

impl CaseResult {
    pub fn colored_agrees(&self) -> Option<bool> {
        Some(expected_winner(self.kai?) == self.colored?)
    }

    pub fn plain_agrees(&self) -> Option<bool> {
        Some(self.colored? == self.plain?)
    }

    /// Agreement of every winner that was computed.
    pub fn agrees(&self) -> Option<bool> {
        let c = self.colored_agrees()?;
        Some(c && self.plain_agrees().unwrap_or(true))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub skipped: usize,
}

pub fn summarize(results: &[CaseResult]) -> Summary {
    let mut s = Summary { cases: results.len(), ..Summary::default() };
    for r in results {
        match r.agrees() {
            Some(true) => s.agreements += 1,
            Some(false) => s.disagreements += 1,
            None => s.skipped += 1,
        }
    }
    s
}

fn skip_reason(e: &Error) -> Option<String> {
    matches!(e, Error::Budget { .. }).then(|| e.to_string())
}

/// Winner on a decolored pair. A total homomorphism is a Duplicator win
/// for any number of pebbles, so the constant certificate is tried before
/// the (uncoloured, hence much larger) fixpoint.
pub fn plain_winner(plain: &PlainPair, k: usize, opts: SolveOptions) -> Result<Winner> {
    if is_partial_hom(&plain.spoiler, &plain.duplicator, &plain.constant_certificate())? {
        return Ok(Winner::Duplicator);
    }
    Ok(solve_game(&plain.spoiler, &plain.duplicator, k, opts)?.winner)
}

/// Solves one instance both ways. Budget overruns mark the case skipped;
/// other errors are returned.
pub fn crossvalidate_one(inst: &KaiInstance, opts: &CrossOptions) -> Result<CaseResult> {
    let out = assemble_with(inst, opts.decolor.unwrap_or_default())?;
    let mut res = CaseResult {
        instance: inst.clone(),
        kai: None,
        colored: None,
        plain: None,
        spoiler_vertices: out.sizes.spoiler_vertices,
        duplicator_vertices: out.sizes.duplicator_vertices,
        skipped: None,
    };
    let solve_opts = SolveOptions::default().with_budget(opts.budget).with_exec(opts.exec);
    let k = inst.k as usize + 1;
    let step = (|| -> Result<()> {
        res.kai = Some(solve_kai(inst, opts.budget)?.winner);
        res.colored = Some(solve_game(&out.colored.spoiler, &out.colored.duplicator, k, solve_opts)?.winner);
        if opts.decolor.is_some() {
            res.plain = Some(plain_winner(&out.plain, k, solve_opts)?);
        }
        Ok(())
    })();
    match step {
        Ok(()) => Ok(res),
        Err(e) => match skip_reason(&e) {
            Some(why) => {
                res.skipped = Some(why);
                Ok(res)
            }
            None => Err(e),
        },
    }
}

pub fn crossvalidate(instances: &[KaiInstance], opts: &CrossOptions) -> Result<Vec<CaseResult>> {
    instances.iter().map(|i| crossvalidate_one(i, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kai::Rule;

    fn win() -> KaiInstance {
        KaiInstance::new(2, 3, vec![Rule { u: 1, v: 2, w: 3, c: 1, d: 2 }], vec![1, 2], 3).unwrap()
    }

    fn lose() -> KaiInstance {
        KaiInstance::new(2, 3, vec![], vec![1, 2], 3).unwrap()
    }

    #[test]
    fn both_winners_agree() {
        let res = crossvalidate(&[win(), lose()], &CrossOptions::default()).unwrap();
        assert_eq!(res[0].kai, Some(KaiWinner::Player1));
        assert_eq!(res[0].colored, Some(Winner::Spoiler));
        assert_eq!(res[1].colored, Some(Winner::Duplicator));
        assert_eq!(summarize(&res), Summary { cases: 2, agreements: 2, disagreements: 0, skipped: 0 });
    }

    #[test]
    fn decolored_pair_is_always_a_duplicator_win() {
        let opts = CrossOptions { decolor: Some(Orientation::Text), ..CrossOptions::default() };
        let res = crossvalidate_one(&win(), &opts).unwrap();
        assert_eq!(res.plain, Some(Winner::Duplicator));
        assert_eq!(res.plain_agrees(), Some(false));
        assert_eq!(summarize(&[res]).disagreements, 1);
    }

    #[test]
    fn budget_overruns_are_skipped_with_a_reason() {
        let opts = CrossOptions { budget: 10, ..CrossOptions::default() };
        let res = crossvalidate_one(&win(), &opts).unwrap();
        assert!(res.skipped.as_deref().unwrap().contains("budget"));
        assert_eq!(res.agrees(), None);
        assert_eq!(summarize(&[res]).skipped, 1);
    }
}
