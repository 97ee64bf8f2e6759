//! Executable gadget lemmas: every clause is decided with the reachability
//! solver (Spoiler sides) or the strategy verifier (Duplicator sides).

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::board::Board;
use crate::error::Result;
use crate::exec::Exec;
use crate::family::StrategyFamily;
use crate::gadgets::{build_choice, build_init, build_rule_gadgets, build_switch, choice_output, zeroed, Gadget, Ns};
use crate::kai::{apply_formally, blocking_set, expand_rule_triples, Rule};
use crate::solver::{reach_on, verify_on, SolveOptions};
use crate::strategy::{
    all_positions, choice_strategy, cover_report, init_families, init_union, materialize_union, rule_strategy, switch_input,
    switch_out, switch_out_crit, switch_restart, switch_restart_crit, Names, Product,
};
use crate::structures::PartialHom;

/// How many parameter tuples of each clause are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    /// At most this many tuples per clause, drawn without replacement.
    Random { per_clause: usize, seed: u64 },
}

impl Sampling {
    fn pick<T: Clone>(&self, clause: &str, cases: Vec<T>) -> Vec<T> {
        match *self {
            Sampling::Exhaustive => cases,
            Sampling::Random { per_clause, seed } => {
                if cases.len() <= per_clause {
                    return cases;
                }
                let salt = clause.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
                let mut idx: Vec<usize> = (0..cases.len()).collect::<Vec<_>>().choose_multiple(&mut rng, per_clause).copied().collect();
                idx.sort_unstable();
                idx.into_iter().map(|i| cases[i].clone()).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub clause: String,
    pub params: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

struct Ctx<'a> {
    board: Board<'a>,
    nm: Names<'a>,
    k: u32,
    opts: SolveOptions,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Gadget, exec: Exec) -> Result<Self> {
        Ok(Ctx {
            board: Board::new(&g.pair.spoiler, &g.pair.duplicator)?,
            nm: Names::new(&g.pair),
            k: g.k,
            opts: SolveOptions::default().with_exec(exec),
        })
    }

    fn cap(&self) -> usize {
        self.k as usize + 1
    }

    fn at(&self, block: &str, q: &[u32]) -> PartialHom {
        PartialHom::from_pairs(self.nm.on_block(block, q)).expect("a function")
    }

    fn reach(&self, start: &PartialHom, targets: &[PartialHom]) -> Result<bool> {
        reach_on(&self.board, self.cap(), start, targets, self.opts)
    }

    /// `""` when `fam` is a winning strategy (or a critical one with `critical`).
    fn verify(&self, fam: &StrategyFamily, critical: bool) -> String {
        let rep = verify_on(&self.board, self.cap(), fam, self.opts.exec);
        let ok = if critical { rep.is_critical } else { rep.is_winning };
        if ok {
            String::new()
        } else {
            format!("{} violations, first {:?}", rep.violations.len(), rep.violations.first())
        }
    }
}

fn check(lemma: &str, clause: &str, params: String, detail: String) -> LemmaCheck {
    LemmaCheck { lemma: lemma.into(), clause: clause.into(), passed: detail.is_empty(), params, detail }
}

fn expect(ok: bool, what: &str) -> String {
    if ok {
        String::new()
    } else {
        what.to_string()
    }
}

/// All subsets of `1..=k` (ascending lists), the empty one first.
pub fn subsets(k: u32) -> Vec<Vec<usize>> {
    (0u32..1 << k).map(|mask| (1..=k as usize).filter(|&i| mask >> (i - 1) & 1 == 1).collect()).collect()
}

/// Every rule over nodes `1..=n` for `k` pebbles.
pub fn all_rules(k: u32, n: u32) -> Result<Vec<Rule>> {
    let mut triples = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            for w in 1..=n {
                if u != v && v != w && u != w {
                    triples.push([u, v, w]);
                }
            }
        }
    }
    expand_rule_triples(&triples, k)
}

/// Rule lemmas on `RS(r)` and `RD(r)` for every rule over `[n]`.
pub fn rule_lemmas(k: u32, n: u32, sampling: Sampling, exec: Exec) -> Result<Vec<LemmaCheck>> {
    let rules = all_rules(k, n)?;
    let gadgets: Vec<(Gadget, Gadget)> = rules.iter().map(|r| build_rule_gadgets(r, k, n)).collect::<Result<_>>()?;
    let ns = Ns::root();
    let mut out = Vec::new();
    let positions = all_positions(k, n);
    let ts = subsets(k);
    let pairs: Vec<(usize, Vec<u32>)> = (0..rules.len()).flat_map(|i| positions.iter().map(move |p| (i, p.clone()))).collect();
    let triples: Vec<(usize, Vec<u32>, Vec<usize>)> =
        pairs.iter().flat_map(|(i, p)| ts.iter().map(move |t| (*i, p.clone(), t.clone()))).collect();
    let appl = |i: usize, p: &[u32]| blocking_set(&rules[i], p).is_empty();
    let name = |i: usize| {
        let r = rules[i];
        format!("r=({},{},{},{},{})", r.u, r.v, r.w, r.c, r.d)
    };

    for (side, lemma) in [(0usize, "rule-rs"), (1, "rule-rd")] {
        let cases = pairs.iter().filter(|(i, p)| appl(*i, p)).cloned().collect();
        for (i, p) in sampling.pick(&format!("{lemma}(i)"), cases) {
            let g = if side == 0 { &gadgets[i].0 } else { &gadgets[i].1 };
            let cx = Ctx::new(g, exec)?;
            let target = cx.at("y", &apply_formally(&rules[i], &p));
            let ok = cx.reach(&cx.at("x", &p), &[target])?;
            out.push(check(lemma, "(i)", format!("{} p={p:?}", name(i)), expect(ok, "Spoiler cannot reach r(p) on y")));
        }
    }

    let cases = sampling.pick("rule-rs(ii)", triples.clone());
    for (i, p, t) in cases {
        let cx = Ctx::new(&gadgets[i].0, exec)?;
        let blocked: Vec<usize> = {
            let mut b = t.clone();
            b.extend(blocking_set(&rules[i], &p));
            b.sort_unstable();
            b.dedup();
            b
        };
        let g = rule_strategy(&cx.nm, &ns, &zeroed(&p, &t), &zeroed(&apply_formally(&rules[i], &p), &blocked));
        let fam = g.materialize(cx.cap());
        out.push(check("rule-rs", "(ii)", format!("{} p={p:?} T={t:?}", name(i)), cx.verify(&fam, false)));
    }

    let cases = triples.iter().filter(|(i, p, _)| appl(*i, p)).cloned().collect();
    for (i, p, t) in sampling.pick("rule-rd(ii)", cases) {
        let cx = Ctx::new(&gadgets[i].1, exec)?;
        let g = rule_strategy(&cx.nm, &ns, &zeroed(&p, &t), &zeroed(&apply_formally(&rules[i], &p), &t));
        let fam = g.materialize(cx.cap());
        out.push(check("rule-rd", "(ii)", format!("{} p={p:?} T={t:?}", name(i)), cx.verify(&fam, false)));
    }

    let cases = pairs.iter().filter(|(i, p)| !appl(*i, p)).cloned().collect();
    for (i, p) in sampling.pick("rule-rd(iii)", cases) {
        let cx = Ctx::new(&gadgets[i].1, exec)?;
        let ok = cx.reach(&cx.at("x", &p), &[])?;
        out.push(check("rule-rd", "(iii)", format!("{} p={p:?}", name(i)), expect(ok, "Spoiler does not win")));
    }
    Ok(out)
}

/// Switch lemma (i)–(iv) on `M^{k,n}`.
pub fn switch_lemmas(k: u32, n: u32, sampling: Sampling, exec: Exec) -> Result<Vec<LemmaCheck>> {
    let g = build_switch(k, n)?;
    let cx = Ctx::new(&g, exec)?;
    let ns = Ns::root();
    let positions = all_positions(k, n);
    let ts = subsets(k);
    let with_t: Vec<(Vec<u32>, Vec<usize>)> = positions.iter().flat_map(|p| ts.iter().map(move |t| (p.clone(), t.clone()))).collect();
    let mut out = Vec::new();

    for p in sampling.pick("switch(i)", positions.clone()) {
        let ok = cx.reach(&cx.at("x", &p), &[cx.at("y", &p)])?;
        out.push(check("switch", "(i)", format!("p={p:?}"), expect(ok, "Spoiler cannot reach p on y")));
    }
    for (p, t) in sampling.pick("switch(ii)", with_t.clone()) {
        let fam = switch_out(&cx.nm, &ns, k, &zeroed(&p, &t)).materialize(cx.cap());
        out.push(check("switch", "(ii)", format!("p={p:?} T={t:?}"), cx.verify(&fam, false)));
    }
    let nonempty: Vec<_> = with_t.iter().filter(|(_, t)| !t.is_empty()).cloned().collect();
    for (p, t) in sampling.pick("switch(iii)", nonempty) {
        let fam = switch_restart(&cx.nm, &cx.board, &ns, k, &zeroed(&p, &t)).materialize(cx.cap());
        out.push(check("switch", "(iii)", format!("p={p:?} T={t:?}"), cx.verify(&fam, false)));
    }
    for p in sampling.pick("switch(iv)", positions) {
        let h_in = switch_input(&cx.nm, &ns, k, &p);
        let fam = h_in.materialize(cx.cap());
        let mut detail = cx.verify(&fam, true);
        let declared: Vec<PartialHom> = h_in.crit.iter().cloned().collect();
        if detail.is_empty() && declared.iter().any(|c| !fam.is_critical(c)) {
            detail = "(a) a declared critical map is not a member".into();
        }
        if detail.is_empty() {
            let out_strategy = switch_out(&cx.nm, &ns, k, &p);
            if switch_out_crit(&cx.nm, &ns, k, &p).iter().any(|c| !out_strategy.contains(c)) {
                detail = "(c) an out-crit map is not in H^out_p".into();
            }
        }
        for t in 1..=k {
            if !detail.is_empty() {
                break;
            }
            let restart = switch_restart(&cx.nm, &cx.board, &ns, k, &zeroed(&p, &[t as usize]));
            if switch_restart_crit(&cx.nm, &ns, k, &p, t).iter().any(|c| !restart.contains(c)) {
                detail = format!("(b) a restart-crit map for t={t} is not in H^restart");
            }
        }
        out.push(check("switch", "(iv)", format!("p={p:?}"), detail));
    }
    Ok(out)
}

/// Injective maps `[k] -> [n]`, the admissible start positions.
pub fn injective_positions(k: u32, n: u32) -> Vec<Vec<u32>> {
    all_positions(k, n)
        .into_iter()
        .filter(|p| {
            let mut q = p.clone();
            q.sort_unstable();
            q.dedup();
            q.len() == p.len()
        })
        .collect()
}

/// Init lemma (i)–(iii) on `INIT^s` for every injective start `s`.
pub fn init_lemmas(k: u32, n: u32, sampling: Sampling, exec: Exec) -> Result<Vec<LemmaCheck>> {
    let starts = injective_positions(k, n);
    let mut out = Vec::new();
    let ts = subsets(k);
    let mut cases: Vec<(Vec<u32>, Vec<u32>, Vec<usize>)> = Vec::new();
    for s in &starts {
        for p in all_positions(k, n) {
            cases.extend(ts.iter().map(|t| (s.clone(), p.clone(), t.clone())));
        }
    }
    let cases = sampling.pick("init(iii)", cases);
    for s in sampling.pick("init(s)", starts) {
        let g = build_init(&s, k, n)?;
        let cx = Ctx::new(&g, exec)?;
        let fams = init_families(&g.pair, &cx.board, Ns::root(), &s);
        let na = cx.board.na();

        let ok = cx.reach(&PartialHom::new(), &[cx.at("x", &s)])?;
        out.push(check("init", "(i)", format!("s={s:?}"), expect(ok, "Spoiler cannot reach s on x")));

        let winning: Vec<Product> = init_union(fams.winning(), na)?;
        let uncovered = cover_report(&winning);
        let whole = materialize_union(&cx.board, &winning, cx.cap());
        let mut detail = cx.verify(&whole, false);
        if detail.is_empty() && !uncovered.is_empty() {
            detail = format!("{} critical maps uncovered", uncovered.len());
        }
        out.push(check("init", "(ii)", format!("s={s:?}"), detail));

        for (_, p, t) in cases.iter().filter(|c| c.0 == s) {
            let q = zeroed(p, t);
            let products = init_union(fams.at(&q), na)?;
            let fam = materialize_union(&cx.board, &products, cx.cap());
            let mut detail = cx.verify(&fam, true);
            if detail.is_empty() {
                if let Some(c) = fam.sorted_critical().into_iter().find(|c| !whole.contains(c)) {
                    detail = format!("critical {} is not in I^init", g.pair.describe(&c));
                }
            }
            out.push(check("init", "(iii)", format!("s={s:?} p={p:?} T={t:?}"), detail));
        }
    }
    Ok(out)
}

/// Choice lemma (i)–(ii) on `C^m`.
pub fn choice_lemmas(k: u32, n: u32, m: u32, sampling: Sampling, exec: Exec) -> Result<Vec<LemmaCheck>> {
    let g = build_choice(k, n, m)?;
    let cx = Ctx::new(&g, exec)?;
    let ns = Ns::root();
    let positions = all_positions(k, n);
    let mut out = Vec::new();
    for p in sampling.pick("choice(i)", positions.clone()) {
        let targets: Vec<PartialHom> = (1..=m).map(|l| cx.at(&choice_output(l), &p)).collect();
        let ok = cx.reach(&cx.at("x", &p), &targets)?;
        out.push(check("choice", "(i)", format!("m={m} p={p:?}"), expect(ok, "Spoiler reaches no output")));
    }
    let ts = subsets(k);
    let mut cases: Vec<(u32, Vec<u32>, Vec<usize>)> = Vec::new();
    for l in 1..=m {
        for p in &positions {
            cases.extend(ts.iter().map(|t| (l, p.clone(), t.clone())));
        }
    }
    for (l, p, t) in sampling.pick("choice(ii)", cases) {
        let fam = choice_strategy(&cx.nm, &ns, m, l, &p, &t).materialize(cx.cap());
        out.push(check("choice", "(ii)", format!("m={m} l={l} p={p:?} T={t:?}"), cx.verify(&fam, false)));
    }
    Ok(out)
}

/// The whole suite for one `(k, n)`: rule lemmas need three distinct nodes and
/// init lemmas an injective start, so they are skipped where those do not exist.
pub fn lemma_suite(k: u32, n: u32, ms: &[u32], sampling: Sampling, exec: Exec) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    if n >= 3 {
        out.extend(rule_lemmas(k, n, sampling, exec)?);
    }
    out.extend(switch_lemmas(k, n, sampling, exec)?);
    if n >= k {
        out.extend(init_lemmas(k, n, sampling, exec)?);
    }
    for &m in ms {
        out.extend(choice_lemmas(k, n, m, sampling, exec)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_and_position_counts() {
        assert_eq!(subsets(3).len(), 8);
        assert!(subsets(3)[0].is_empty());
        assert_eq!(injective_positions(2, 3).len(), 6);
        // Rules need distinct u, v, w and distinct c, d.
        assert_eq!(all_rules(2, 3).unwrap().len(), 6 * 2);
    }

    #[test]
    fn sampling_is_seeded_and_ordered() {
        let s = Sampling::Random { per_clause: 3, seed: 5 };
        let a = s.pick("x", (0..20).collect());
        assert_eq!(a, s.pick("x", (0..20).collect()));
        assert_eq!(a.len(), 3);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.pick("x", vec![1, 2]), vec![1, 2]);
        assert_eq!(Sampling::Exhaustive.pick("x", vec![4, 5, 6]), vec![4, 5, 6]);
    }

    #[test]
    fn small_suite_passes() {
        let checks = lemma_suite(2, 2, &[1], Sampling::Exhaustive, Exec::default()).unwrap();
        assert!(!checks.is_empty());
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
        // n = 2 leaves no room for a rule.
        assert!(checks.iter().all(|c| c.lemma != "rule-rs"));
    }
}
