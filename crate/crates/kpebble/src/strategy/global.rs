//! The Duplicator strategy on the whole reduction built from a Player 2
//! winning strategy of the KAI game.

use rustc_hash::FxHashMap;

use super::gadget::{
    choice_strategy, choice_zero, init_families, rule_strategy, switch_input, switch_out, switch_restart, Names,
};
use super::{cover_report, materialize_union, Generated, Product, UncoveredIn};
use crate::board::Board;
use crate::error::{Error, Result};
use crate::family::StrategyFamily;
use crate::gadgets::{zeroed, GamePair, Layout, Ns};
use crate::kai::{apply_formally, blocking_set, check_kai_strategy, KaiInstance, KaiStrategy};

pub struct GlobalStrategy {
    /// One product per (global strategy, INIT variant).
    pub products: Vec<Product>,
    /// Critical members that no product holds non-critically; empty when the union is winning.
    pub uncovered: Vec<UncoveredIn>,
    pub k: u32,
}

impl GlobalStrategy {
    /// The union as an explicit family of maps with at most `k + 1` pairs.
    pub fn materialize(&self, board: &Board) -> StrategyFamily {
        materialize_union(board, &self.products, self.k as usize + 1)
    }
}

/// Nonempty subsets of `1..=k`, as ascending lists.
fn nonempty_subsets(k: u32) -> Vec<Vec<usize>> {
    (1u32..1 << k).map(|mask| (1..=k as usize).filter(|&i| mask >> (i - 1) & 1 == 1).collect()).collect()
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

struct Builder<'a> {
    inst: &'a KaiInstance,
    nm: Names<'a>,
    board: &'a Board<'a>,
    lay: Layout,
    restarts: FxHashMap<(String, Vec<u32>), Generated>,
}

impl Builder<'_> {
    fn restart(&mut self, ns: &Ns, q: &[u32]) -> Generated {
        let key = (ns.block("a"), q.to_vec());
        if let Some(g) = self.restarts.get(&key) {
            return g.clone();
        }
        let g = switch_restart(&self.nm, self.board, ns, self.lay.k, q);
        self.restarts.insert(key, g.clone());
        g
    }

    fn zero(&self) -> Vec<u32> {
        vec![0; self.lay.k as usize]
    }

    /// `S_p` (`t` empty) or `S^restart_{(p,T)}`, without the INIT part.
    fn spoiler_side(&mut self, p: &[u32], t: &[usize]) -> Vec<Generated> {
        let (k, m) = (self.lay.k, self.lay.m);
        let pt = zeroed(p, t);
        let z = self.zero();
        let mut pieces = vec![choice_zero(&self.nm, &self.lay.choice(), k, m)];
        for (idx, r) in self.inst.rules.iter().enumerate() {
            let l = idx as u32 + 1;
            let blocked = union_sorted(t, &blocking_set(r, p));
            let next = zeroed(&apply_formally(r, p), &blocked);
            pieces.push(rule_strategy(&self.nm, &Layout::rs(l), &pt, &next));
            pieces.push(if blocked.is_empty() {
                switch_input(&self.nm, &Layout::ms(l), k, &next)
            } else {
                self.restart(&Layout::ms(l), &next)
            });
            pieces.push(rule_strategy(&self.nm, &Layout::rd(l), &z, &z));
            pieces.push(switch_out(&self.nm, &Layout::md(l), k, &pt));
        }
        pieces
    }

    /// `D_p` (`t` empty) or `D^restart_{(p,T)}`, without the INIT part.
    fn duplicator_side(&mut self, p: &[u32], t: &[usize], kappa: usize) -> Vec<Generated> {
        let (k, m) = (self.lay.k, self.lay.m);
        let pt = zeroed(p, t);
        let z = self.zero();
        let answer = kappa as u32 + 1;
        let mut pieces = vec![choice_strategy(&self.nm, &self.lay.choice(), m, answer, p, t)];
        for l in 1..=m {
            pieces.push(rule_strategy(&self.nm, &Layout::rs(l), &z, &z));
            pieces.push(switch_out(&self.nm, &Layout::ms(l), k, &pt));
            if l == answer {
                let next = zeroed(&apply_formally(&self.inst.rules[kappa], p), t);
                pieces.push(rule_strategy(&self.nm, &Layout::rd(l), &pt, &next));
                pieces.push(if t.is_empty() {
                    switch_input(&self.nm, &Layout::md(l), k, &next)
                } else {
                    self.restart(&Layout::md(l), &next)
                });
            } else {
                pieces.push(rule_strategy(&self.nm, &Layout::rd(l), &z, &z));
                pieces.push(self.restart(&Layout::md(l), &z));
            }
        }
        pieces
    }
}

/// Builds the union of all global strategies on the assembled pair `pair`
/// (with `board` compiled from it) for a Player 2 winning strategy.
pub fn build_global_strategy(inst: &KaiInstance, pair: &GamePair, board: &Board, strategy: &KaiStrategy) -> Result<GlobalStrategy> {
    check_kai_strategy(inst, strategy).map_err(Error::Precondition)?;
    let nm = Names::new(pair);
    let init = init_families(pair, board, Layout::init(), &inst.start);
    let mut b = Builder { inst, nm, board, lay: Layout::of(inst), restarts: FxHashMap::default() };
    let na = board.na();
    let mut products = Vec::new();
    let mut add = |label: String, variants: Vec<(String, Vec<Generated>)>, rest: &[Generated]| -> Result<()> {
        for (v, mut pieces) in variants {
            pieces.extend(rest.iter().cloned());
            products.push(Product::new(format!("{label} / {v}"), pieces, na)?);
        }
        Ok(())
    };
    let subsets = nonempty_subsets(inst.k);
    let zero = b.zero();

    let rest = b.spoiler_side(&inst.start, &[]);
    add("S^init".into(), init.winning(), &rest)?;
    for p in &strategy.k1 {
        let rest = b.spoiler_side(p, &[]);
        add(format!("S_{p:?}"), init.at(p), &rest)?;
        for t in &subsets {
            let rest = b.spoiler_side(p, t);
            add(format!("S^restart_{p:?},{t:?}"), init.at(&zeroed(p, t)), &rest)?;
        }
    }
    for p in &strategy.k2 {
        let kappa = strategy.kappa[p];
        let rest = b.duplicator_side(p, &[], kappa);
        add(format!("D_{p:?}"), init.at(&zero), &rest)?;
        for t in &subsets {
            let rest = b.duplicator_side(p, t, kappa);
            add(format!("D^restart_{p:?},{t:?}"), init.at(&zero), &rest)?;
        }
    }
    let uncovered = cover_report(&products);
    Ok(GlobalStrategy { products, uncovered, k: inst.k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::gadgets::assemble_reduction;
    use crate::kai::{solve_kai, KaiWinner, Rule};
    use crate::solver::verify_on;

    fn winning_on(inst: &KaiInstance) -> bool {
        let kai = solve_kai(inst, 1 << 20).unwrap();
        assert_eq!(kai.winner, KaiWinner::Player2);
        let out = assemble_reduction(inst).unwrap();
        let board = Board::new(&out.colored.spoiler, &out.colored.duplicator).unwrap();
        let g = build_global_strategy(inst, &out.colored, &board, kai.strategy.as_ref().unwrap()).unwrap();
        assert!(g.uncovered.is_empty(), "{:?}", g.uncovered.first());
        let fam = g.materialize(&board);
        verify_on(&board, inst.k as usize + 1, &fam, Exec::default()).is_winning
    }

    #[test]
    fn no_rules() {
        assert!(winning_on(&KaiInstance::new(2, 3, vec![], vec![1, 2], 3).unwrap()));
    }

    #[test]
    fn blocked_rules() {
        let rules = vec![Rule { u: 1, v: 2, w: 3, c: 1, d: 2 }, Rule { u: 1, v: 2, w: 3, c: 2, d: 1 }];
        assert!(winning_on(&KaiInstance::new(2, 3, rules, vec![2, 3], 1).unwrap()));
    }

    #[test]
    fn rejects_a_wrong_kai_strategy() {
        let inst = KaiInstance::new(2, 3, vec![], vec![1, 2], 3).unwrap();
        let out = assemble_reduction(&inst).unwrap();
        let board = Board::new(&out.colored.spoiler, &out.colored.duplicator).unwrap();
        let empty = KaiStrategy::default();
        assert!(matches!(build_global_strategy(&inst, &out.colored, &board, &empty), Err(Error::Precondition(_))));
    }
}
