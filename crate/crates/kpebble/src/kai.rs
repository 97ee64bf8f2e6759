//! The KAI pebble game: Player 1 moves pebbles by rules and tries to cover
//! the goal node; Player 2 tries to keep that from ever happening.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// `(u, v, w, c, d)`: move pebble `c` from `u` to a free `w` while pebble `d` sits on `v`.
/// Nodes are `1..=nodes`, pebbles `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 5]", into = "[u32; 5]")]
pub struct Rule {
    pub u: u32,
    pub v: u32,
    pub w: u32,
    pub c: u32,
    pub d: u32,
}

impl From<[u32; 5]> for Rule {
    fn from([u, v, w, c, d]: [u32; 5]) -> Self {
        Rule { u, v, w, c, d }
    }
}

impl From<Rule> for [u32; 5] {
    fn from(r: Rule) -> Self {
        [r.u, r.v, r.w, r.c, r.d]
    }
}

/// `position[i - 1]` is the node under pebble `i`.
pub type Position = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaiInstance {
    pub k: u32,
    pub nodes: u32,
    pub rules: Vec<Rule>,
    pub start: Position,
    pub goal: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDto {
    k: u32,
    nodes: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rules: Option<Vec<Rule>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule_triples: Option<Vec<[u32; 3]>>,
    start: Position,
    goal: u32,
}

impl Serialize for KaiInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceDto {
            k: self.k,
            nodes: self.nodes,
            rules: Some(self.rules.clone()),
            rule_triples: None,
            start: self.start.clone(),
            goal: self.goal,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KaiInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = InstanceDto::deserialize(d)?;
        let rules = match (dto.rules, dto.rule_triples) {
            (Some(r), None) => r,
            (None, Some(t)) => expand_rule_triples(&t, dto.k).map_err(D::Error::custom)?,
            _ => return Err(D::Error::custom("exactly one of \"rules\" and \"rule_triples\" must be present")),
        };
        let inst = KaiInstance { k: dto.k, nodes: dto.nodes, rules, start: dto.start, goal: dto.goal };
        inst.validate().map_err(D::Error::custom)?;
        Ok(inst)
    }
}

fn check_rule(r: &Rule, k: u32, nodes: u32) -> Result<()> {
    let in_nodes = |x: u32| (1..=nodes).contains(&x);
    if !(in_nodes(r.u) && in_nodes(r.v) && in_nodes(r.w)) || r.u == r.v || r.v == r.w || r.u == r.w {
        return input(format!("rule {r:?}: u, v, w must be distinct nodes in 1..={nodes}"));
    }
    if r.c == r.d || !(1..=k).contains(&r.c) || !(1..=k).contains(&r.d) {
        return input(format!("rule {r:?}: c, d must be distinct pebbles in 1..={k}"));
    }
    Ok(())
}

impl KaiInstance {
    pub fn new(k: u32, nodes: u32, rules: Vec<Rule>, start: Position, goal: u32) -> Result<Self> {
        let inst = KaiInstance { k, nodes, rules, start, goal };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_triples(k: u32, nodes: u32, triples: &[[u32; 3]], start: Position, goal: u32) -> Result<Self> {
        KaiInstance::new(k, nodes, expand_rule_triples(triples, k)?, start, goal)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return input("k must be at least 1");
        }
        if self.nodes < self.k {
            return input(format!("{} pebbles do not fit injectively on {} nodes", self.k, self.nodes));
        }
        if !(1..=self.nodes).contains(&self.goal) {
            return input(format!("goal {} outside 1..={}", self.goal, self.nodes));
        }
        if self.start.len() != self.k as usize {
            return input(format!("start places {} pebbles, expected {}", self.start.len(), self.k));
        }
        let distinct: BTreeSet<u32> = self.start.iter().copied().collect();
        if distinct.len() != self.start.len() || self.start.iter().any(|&x| !(1..=self.nodes).contains(&x)) {
            return input(format!("start {:?} is not an injective map into 1..={}", self.start, self.nodes));
        }
        if self.start.contains(&self.goal) {
            return input(format!("start {:?} already pebbles the goal {}", self.start, self.goal));
        }
        for r in &self.rules {
            check_rule(r, self.k, self.nodes)?;
        }
        Ok(())
    }

    pub fn applicable(&self, p: &[u32]) -> Vec<usize> {
        (0..self.rules.len()).filter(|&i| blocking_set(&self.rules[i], p).is_empty()).collect()
    }
}

/// `R' × {(c, d) : c ≠ d}` in triple-major, then `c`, then `d` order.
pub fn expand_rule_triples(triples: &[[u32; 3]], k: u32) -> Result<Vec<Rule>> {
    let mut out = Vec::with_capacity(triples.len() * (k * k.saturating_sub(1)) as usize);
    for &[u, v, w] in triples {
        if u == v || v == w || u == w {
            return input(format!("triple ({u},{v},{w}) needs pairwise distinct nodes"));
        }
        for c in 1..=k {
            for d in (1..=k).filter(|&d| d != c) {
                out.push(Rule { u, v, w, c, d });
            }
        }
    }
    Ok(out)
}

/// `T_r(p)`: the pebbles (1-based, ascending) that block `r` at `p`.
pub fn blocking_set(r: &Rule, p: &[u32]) -> Vec<usize> {
    (1..=p.len())
        .filter(|&i| {
            let at = p[i - 1];
            (i as u32 == r.c && at != r.u) || (i as u32 == r.d && at != r.v) || at == r.w
        })
        .collect()
}

pub fn apply_rule(r: &Rule, p: &[u32]) -> Result<Position> {
    let blocking = blocking_set(r, p);
    if !blocking.is_empty() {
        return Err(Error::NotApplicable { blocking });
    }
    Ok(apply_formally(r, p))
}

/// Sets pebble `c` to `w` whether or not the rule applies.
pub fn apply_formally(r: &Rule, p: &[u32]) -> Position {
    let mut q = p.to_vec();
    q[r.c as usize - 1] = r.w;
    q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KaiWinner {
    Player1,
    Player2,
}

/// `κ` maps each position of `k2` to the index of the rule Player 2 answers with.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KaiStrategy {
    pub k1: BTreeSet<Position>,
    pub k2: BTreeSet<Position>,
    pub kappa: BTreeMap<Position, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineStep {
    pub position: Position,
    pub mover: KaiWinner,
    pub rule: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KaiSolution {
    pub winner: KaiWinner,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<KaiStrategy>,
    /// A play Player 1 wins against Player 2 always answering with the first applicable rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<Vec<LineStep>>,
    pub positions: usize,
}

fn injective_positions(k: usize, nodes: u32) -> Vec<Position> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(k: usize, nodes: u32, cur: &mut Vec<u32>, out: &mut Vec<Position>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 1..=nodes {
            if !cur.contains(&x) {
                cur.push(x);
                go(k, nodes, cur, out);
                cur.pop();
            }
        }
    }
    go(k, nodes, &mut cur, &mut out);
    out
}

/// Exact solution by backward induction over (position, player to move).
pub fn solve_kai(inst: &KaiInstance, budget: u64) -> Result<KaiSolution> {
    inst.validate()?;
    let bound = (inst.nodes as u64).checked_pow(inst.k).unwrap_or(u64::MAX);
    if bound > budget {
        return Err(Error::Budget { what: format!("KAI positions ({}^{})", inst.nodes, inst.k), limit: budget });
    }
    let positions = injective_positions(inst.k as usize, inst.nodes);
    let index: FxHashMap<&Position, usize> = positions.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // succ[i]: (rule, successor) for each applicable rule.
    let succ: Vec<Vec<(usize, usize)>> = positions
        .iter()
        .map(|p| {
            inst.applicable(p)
                .into_iter()
                .map(|r| {
                    let q = apply_rule(&inst.rules[r], p).expect("applicable");
                    debug_assert!(q.iter().collect::<BTreeSet<_>>().len() == q.len());
                    (r, index[&q])
                })
                .collect()
        })
        .collect();
    let goal_pebbled: Vec<bool> = positions.iter().map(|p| p.contains(&inst.goal)).collect();
    const NEVER: u32 = u32::MAX;
    // rank1: Player 1 to move and wins; rank2: Player 2 to move and Player 1 wins.
    let mut rank1 = vec![NEVER; positions.len()];
    let mut rank2: Vec<u32> = (0..positions.len()).map(|i| if goal_pebbled[i] || succ[i].is_empty() { 0 } else { NEVER }).collect();
    let mut round = 0;
    loop {
        round += 1;
        let mut changed = false;
        let (prev1, prev2) = (rank1.clone(), rank2.clone());
        for i in 0..positions.len() {
            if rank1[i] == NEVER && succ[i].iter().any(|&(_, j)| prev2[j] != NEVER) {
                rank1[i] = round;
                changed = true;
            }
            if rank2[i] == NEVER && succ[i].iter().all(|&(_, j)| prev1[j] != NEVER) {
                rank2[i] = round;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let s = index[&inst.start];
    if rank1[s] != NEVER {
        let mut line = Vec::new();
        let mut cur = s;
        loop {
            let &(r, q) = succ[cur].iter().filter(|&&(_, j)| rank2[j] < rank1[cur]).min_by_key(|&&(_, j)| rank2[j]).expect("ranked move");
            line.push(LineStep { position: positions[cur].clone(), mover: KaiWinner::Player1, rule: r });
            if goal_pebbled[q] || succ[q].is_empty() {
                break;
            }
            let &(r2, next) = succ[q].first().expect("nonterminal");
            line.push(LineStep { position: positions[q].clone(), mover: KaiWinner::Player2, rule: r2 });
            cur = next;
        }
        return Ok(KaiSolution { winner: KaiWinner::Player1, strategy: None, line: Some(line), positions: positions.len() });
    }
    let mut strat = KaiStrategy::default();
    let mut queue = VecDeque::from([s]);
    strat.k1.insert(positions[s].clone());
    while let Some(p) = queue.pop_front() {
        for &(_, q) in &succ[p] {
            if !strat.k2.insert(positions[q].clone()) {
                continue;
            }
            let &(r, next) = succ[q].iter().find(|&&(_, j)| rank1[j] == NEVER).expect("Player 2 has a safe answer");
            strat.kappa.insert(positions[q].clone(), r);
            if strat.k1.insert(positions[next].clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(KaiSolution { winner: KaiWinner::Player2, strategy: Some(strat), line: None, positions: positions.len() })
}

/// Checks the three defining conditions of a Player 2 winning strategy, and
/// that no position of `k2` pebbles the goal. Returns the first failure.
pub fn check_kai_strategy(inst: &KaiInstance, s: &KaiStrategy) -> std::result::Result<(), String> {
    if !s.k1.contains(&inst.start) {
        return Err("start position is not in K1".into());
    }
    for p in &s.k1 {
        for (i, r) in inst.rules.iter().enumerate() {
            if blocking_set(r, p).is_empty() && !s.k2.contains(&apply_formally(r, p)) {
                return Err(format!("rule {i} leads from {p:?} outside K2"));
            }
        }
    }
    for q in &s.k2 {
        if q.contains(&inst.goal) {
            return Err(format!("{q:?} in K2 pebbles the goal"));
        }
        let Some(&r) = s.kappa.get(q) else {
            return Err(format!("kappa undefined on {q:?}"));
        };
        let rule = inst.rules.get(r).ok_or_else(|| format!("kappa({q:?}) = {r} is not a rule"))?;
        if !blocking_set(rule, q).is_empty() {
            return Err(format!("kappa({q:?}) = {r} is not applicable"));
        }
        if !s.k1.contains(&apply_formally(rule, q)) {
            return Err(format!("kappa({q:?}) leads outside K1"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(u: u32, v: u32, w: u32, c: u32, d: u32) -> Rule {
        Rule { u, v, w, c, d }
    }

    #[test]
    fn blocking_examples() {
        let rule = r(1, 2, 3, 1, 2);
        assert!(blocking_set(&rule, &[1, 2]).is_empty());
        assert_eq!(blocking_set(&rule, &[3, 2]), vec![1]);
        assert_eq!(blocking_set(&rule, &[1, 3]), vec![2]);
    }

    #[test]
    fn apply_examples() {
        let rule = r(1, 2, 3, 1, 2);
        assert_eq!(apply_rule(&rule, &[1, 2]).unwrap(), vec![3, 2]);
        assert_eq!(apply_rule(&rule, &[3, 2]), Err(Error::NotApplicable { blocking: vec![1] }));
    }

    #[test]
    fn expansion() {
        assert_eq!(expand_rule_triples(&[[1, 2, 3]], 2).unwrap(), vec![r(1, 2, 3, 1, 2), r(1, 2, 3, 2, 1)]);
        assert_eq!(expand_rule_triples(&[[1, 2, 3]], 3).unwrap().len(), 6);
        assert!(expand_rule_triples(&[], 4).unwrap().is_empty());
        assert!(expand_rule_triples(&[[1, 1, 3]], 2).is_err());
    }

    #[test]
    fn solver_examples() {
        let one = KaiInstance::from_triples(2, 3, &[[1, 2, 3]], vec![1, 2], 3).unwrap();
        assert_eq!(solve_kai(&one, 1000).unwrap().winner, KaiWinner::Player1);

        let stuck = KaiInstance::from_triples(2, 3, &[[2, 3, 1]], vec![1, 2], 3).unwrap();
        assert!(stuck.applicable(&stuck.start).is_empty());
        assert_eq!(solve_kai(&stuck, 1000).unwrap().winner, KaiWinner::Player2);

        let cyc = KaiInstance::from_triples(2, 4, &[[1, 2, 3], [3, 2, 1]], vec![1, 2], 4).unwrap();
        let sol = solve_kai(&cyc, 1000).unwrap();
        assert_eq!(sol.winner, KaiWinner::Player2);
        check_kai_strategy(&cyc, sol.strategy.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn start_on_goal_is_rejected() {
        assert!(KaiInstance::from_triples(2, 3, &[], vec![1, 3], 3).is_err());
    }

    #[test]
    fn json_forms() {
        let a: KaiInstance = serde_json::from_str(r#"{"k":2,"nodes":3,"rule_triples":[[1,2,3]],"start":[1,2],"goal":3}"#).unwrap();
        let b: KaiInstance = serde_json::from_str(r#"{"k":2,"nodes":3,"rules":[[1,2,3,1,2],[1,2,3,2,1]],"start":[1,2],"goal":3}"#).unwrap();
        assert_eq!(a, b);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<KaiInstance>(&text).unwrap(), a);
        assert!(serde_json::from_str::<KaiInstance>(r#"{"k":2,"nodes":3,"start":[1,2],"goal":3}"#).is_err());
    }
}
