//! Duplicator strategies on single gadgets, as generator sets.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use super::{materialize_union, Generated, Product};
use crate::board::Board;
use crate::error::{input, Result};
use crate::family::StrategyFamily;
use crate::gadgets::choice::{a_choice, choice_output};
use crate::gadgets::init::init_switches;
use crate::gadgets::switch::{a_plus, b_zero};
use crate::gadgets::{dv, sv, zeroed, Gadget, GadgetKind, GamePair, Ns, RuleSide};
use crate::kai::{apply_formally, blocking_set};
use crate::structures::{Elem, PartialHom};

/// Name lookup on a built pair.
#[derive(Clone, Copy)]
pub struct Names<'a> {
    pub pair: &'a GamePair,
}

impl<'a> Names<'a> {
    pub fn new(pair: &'a GamePair) -> Self {
        Names { pair }
    }

    pub fn s(&self, block: &str, i: u32) -> Elem {
        let name = sv(block, i);
        self.pair.s_id(&name).unwrap_or_else(|| panic!("no spoiler vertex {name}"))
    }

    pub fn d(&self, block: &str, i: u32, suffix: impl Display) -> Elem {
        let name = dv(block, i, suffix);
        self.pair.d_id(&name).unwrap_or_else(|| panic!("no duplicator vertex {name}"))
    }

    /// `block^i -> block^i_{q(i)}`.
    pub fn on_block(&self, block: &str, q: &[u32]) -> Vec<(Elem, Elem)> {
        (1..=q.len() as u32).map(|i| (self.s(block, i), self.d(block, i, q[i as usize - 1]))).collect()
    }

    pub fn vertices(&self, blocks: &[String], k: u32) -> Vec<Elem> {
        blocks.iter().flat_map(|b| (1..=k).map(move |i| self.s(b, i))).collect()
    }
}

fn hom(pairs: impl IntoIterator<Item = (Elem, Elem)>) -> PartialHom {
    PartialHom::from_pairs(pairs).expect("a function")
}

fn boundary(pairs: &[(Elem, Elem)]) -> BTreeMap<Elem, Elem> {
    pairs.iter().copied().collect()
}

/// All permutations of `1..=k`, in lexicographic order.
pub fn permutations(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for v in 1..=k {
            if !cur.contains(&v) {
                cur.push(v);
                go(k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut out);
    out
}

/// All maps `[k] -> [n]`, in lexicographic order.
pub fn all_positions(k: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|p: Vec<u32>| (1..=n).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

fn switch_blocks(ns: &Ns) -> [String; 4] {
    ["x", "a", "b", "y"].map(|b| ns.block(b))
}

/// `H^out_q` with `q` on the output and `0` on the input. For a position
/// without zeros the permuted maps `h^out_{q,σ}` are generators too.
pub fn switch_out(nm: &Names, ns: &Ns, k: u32, q: &[u32]) -> Generated {
    let [x, a, b, y] = switch_blocks(ns);
    let zero = vec![0; k as usize];
    let bd: Vec<(Elem, Elem)> = [nm.on_block(&x, &zero), nm.on_block(&y, q)].concat();
    let mut gens = vec![hom(bd.iter().copied().chain((1..=k).flat_map(|i| [(nm.s(&a, i), nm.d(&a, i, 0)), (nm.s(&b, i), nm.d(&b, i, b_zero(i)))])))];
    if q.iter().all(|&v| v != 0) {
        for sigma in permutations(k) {
            gens.push(hom(bd.iter().copied().chain((1..=k).flat_map(|i| {
                let s = q[i as usize - 1];
                [(nm.s(&a, i), nm.d(&a, i, a_plus(s, sigma[i as usize - 1]))), (nm.s(&b, i), nm.d(&b, i, s))]
            }))));
        }
    }
    Generated::new(format!("H^out_{q:?}<{}>", ns.block("")), nm.vertices(&[x, a, b, y], k), gens, boundary(&bd))
}

/// `H^restart_q`: every total homomorphism with `q` on the input and `0` on the output.
pub fn switch_restart(nm: &Names, board: &Board, ns: &Ns, k: u32, q: &[u32]) -> Generated {
    let [x, a, b, y] = switch_blocks(ns);
    let zero = vec![0; k as usize];
    let bd: Vec<(Elem, Elem)> = [nm.on_block(&x, q), nm.on_block(&y, &zero)].concat();
    let inner: Vec<Elem> = nm.vertices(&[a.clone(), b.clone()], k);
    let mut gens = Vec::new();
    fn go(board: &Board, inner: &[Elem], h: PartialHom, out: &mut Vec<PartialHom>) {
        let Some((&z, rest)) = inner.split_first() else {
            out.push(h);
            return;
        };
        for &bz in board.candidates(z) {
            if board.extend_ok(h.pairs(), z, bz) {
                go(board, rest, h.with(z, bz).expect("fresh"), out);
            }
        }
    }
    go(board, &inner, hom(bd.iter().copied()), &mut gens);
    Generated::new(format!("H^restart_{q:?}<{}>", ns.block("")), nm.vertices(&[x, a, b, y], k), gens, boundary(&bd))
}

fn a_sigma(nm: &Names, a: &str, p: &[u32], sigma: &[u32], i: u32) -> (Elem, Elem) {
    (nm.s(a, i), nm.d(a, i, a_plus(p[i as usize - 1], sigma[i as usize - 1])))
}

/// `C^out-crit_p = { {a^i -> a^i_{p(i),σ(i)}} : σ }`.
pub fn switch_out_crit(nm: &Names, ns: &Ns, k: u32, p: &[u32]) -> Vec<PartialHom> {
    let a = ns.block("a");
    permutations(k).iter().map(|sigma| hom((1..=k).map(|i| a_sigma(nm, &a, p, sigma, i)))).collect()
}

/// `C^restart-crit_{p,t}`: `a^i -> a^i_{p(i),σ(i)}` for `i ≠ t` plus one `b^j -> b^j_{0,σ(t)}`.
pub fn switch_restart_crit(nm: &Names, ns: &Ns, k: u32, p: &[u32], t: u32) -> Vec<PartialHom> {
    let (a, b) = (ns.block("a"), ns.block("b"));
    let mut out = Vec::new();
    for sigma in permutations(k) {
        let l = sigma[t as usize - 1];
        for j in 1..=k {
            out.push(hom((1..=k).filter(|&i| i != t).map(|i| a_sigma(nm, &a, p, &sigma, i)).chain([(nm.s(&b, j), nm.d(&b, j, b_zero(l)))])));
        }
    }
    out
}

/// `H^in_p` with `p` on the input and `0` on the output; critical members
/// are the out-crit and restart-crit maps.
pub fn switch_input(nm: &Names, ns: &Ns, k: u32, p: &[u32]) -> Generated {
    let [x, a, b, y] = switch_blocks(ns);
    let zero = vec![0; k as usize];
    let bd: Vec<(Elem, Elem)> = [nm.on_block(&x, p), nm.on_block(&y, &zero)].concat();
    let mut gens = Vec::new();
    for sigma in permutations(k) {
        gens.push(hom(bd.iter().copied().chain((1..=k).map(|i| a_sigma(nm, &a, p, &sigma, i)))));
        for l in 1..=k {
            let skip = sigma.iter().position(|&v| v == l).expect("permutation") as u32 + 1;
            gens.push(hom(bd
                .iter()
                .copied()
                .chain((1..=k).filter(|&i| i != skip).map(|i| a_sigma(nm, &a, p, &sigma, i)))
                .chain((1..=k).map(|i| (nm.s(&b, i), nm.d(&b, i, b_zero(l)))))));
        }
    }
    let mut crit = switch_out_crit(nm, ns, k, p);
    for t in 1..=k {
        crit.extend(switch_restart_crit(nm, ns, k, p, t));
    }
    Generated::new(format!("H^in_{p:?}<{}>", ns.block("")), nm.vertices(&[x, a, b, y], k), gens, boundary(&bd)).with_crit(crit)
}

/// The closure of the total map with `qx` on the input and `qy` on the output of a rule gadget.
pub fn rule_strategy(nm: &Names, ns: &Ns, qx: &[u32], qy: &[u32]) -> Generated {
    let (x, y) = (ns.block("x"), ns.block("y"));
    let bd: Vec<(Elem, Elem)> = [nm.on_block(&x, qx), nm.on_block(&y, qy)].concat();
    let k = qx.len() as u32;
    Generated::new(format!("R_{qx:?}->{qy:?}<{}>", ns.block("")), nm.vertices(&[x, y], k), vec![hom(bd.iter().copied())], boundary(&bd))
}

/// `C^l_{(p,T)} = cl(h^l_{(p,T)})` on a choice gadget with `m` outputs.
pub fn choice_strategy(nm: &Names, ns: &Ns, m: u32, l: u32, p: &[u32], t: &[usize]) -> Generated {
    let k = p.len() as u32;
    let q = zeroed(p, t);
    let (x, a) = (ns.block("x"), ns.block("a"));
    let ys: Vec<String> = (1..=m).map(|j| ns.block(&choice_output(j))).collect();
    let zero = vec![0; k as usize];
    let mut bd = nm.on_block(&x, &q);
    for (j, y) in ys.iter().enumerate() {
        bd.extend(nm.on_block(y, if j as u32 + 1 == l { &q } else { &zero }));
    }
    let inner = (1..=k).map(|i| {
        let v = if t.contains(&(i as usize)) { "0".to_string() } else { a_choice(p[i as usize - 1], l) };
        (nm.s(&a, i), nm.d(&a, i, v))
    });
    let gen = hom(bd.iter().copied().chain(inner));
    let mut blocks = vec![x, a];
    blocks.extend(ys);
    Generated::new(format!("C^{l}_{q:?}"), nm.vertices(&blocks, k), vec![gen], boundary(&bd))
}

/// `C_0`: the zero position everywhere.
pub fn choice_zero(nm: &Names, ns: &Ns, k: u32, m: u32) -> Generated {
    let all: Vec<usize> = (1..=k as usize).collect();
    let mut g = choice_strategy(nm, ns, m, 1.min(m), &vec![1; k as usize], &all);
    g.label = "C_0".into();
    g
}

/// Strategies on `INIT^s`, for the start `s` and the namespace it was built under.
pub struct InitFamilies<'a> {
    pub nm: Names<'a>,
    pub board: &'a Board<'a>,
    pub ns: Ns,
    pub s: Vec<u32>,
    pub k: u32,
}

impl<'a> InitFamilies<'a> {
    fn switches(&self) -> (Ns, Ns) {
        init_switches(&self.ns)
    }

    /// `G^1_R` (`which = 1`) or `G^2_R` (`which = 2`) on `top`, `a`, `b`.
    pub fn top(&self, which: u8, r: &[usize]) -> Generated {
        let (top, a, b) = (self.ns.block("top"), self.ns.block("a"), self.ns.block("b"));
        let sr = zeroed(&self.s, r);
        let (qa, qb) = if which == 1 { (&self.s, &sr) } else { (&sr, &self.s) };
        let bd: Vec<(Elem, Elem)> = [self.nm.on_block(&a, qa), self.nm.on_block(&b, qb)].concat();
        let gen = hom(bd.iter().copied().chain([(self.nm.s(&top, 1), self.nm.d(&top, 1, which))]));
        let mut vertices = self.nm.vertices(&[a, b], self.k);
        vertices.push(self.nm.s(&top, 1));
        Generated::new(format!("G^{which}_{r:?}"), vertices, vec![gen], boundary(&bd))
    }

    /// `cl(c -> qc, d -> qd, x -> qx)` on the bottom edges.
    pub fn bottom(&self, label: &str, qc: &[u32], qd: &[u32], qx: &[u32]) -> Generated {
        let (c, d, x) = (self.ns.block("c"), self.ns.block("d"), self.ns.block("x"));
        let bd: Vec<(Elem, Elem)> = [self.nm.on_block(&c, qc), self.nm.on_block(&d, qd), self.nm.on_block(&x, qx)].concat();
        Generated::new(label, self.nm.vertices(&[c, d, x], self.k), vec![hom(bd.iter().copied())], boundary(&bd))
    }

    fn zero(&self) -> Vec<u32> {
        vec![0; self.k as usize]
    }

    /// `I^in-which_{R,q}`: input strategy on switch `which`, restart on the other.
    pub fn input_pieces(&self, which: u8, r: &[usize], q: &[u32]) -> Vec<Generated> {
        let (m1, m2) = self.switches();
        let sr = zeroed(&self.s, r);
        let z = self.zero();
        let (on_m1, on_m2) = if which == 1 {
            (switch_input(&self.nm, &m1, self.k, &self.s), switch_restart(&self.nm, self.board, &m2, self.k, &sr))
        } else {
            (switch_restart(&self.nm, self.board, &m1, self.k, &sr), switch_input(&self.nm, &m2, self.k, &self.s))
        };
        vec![self.top(which, r), on_m1, on_m2, self.bottom(&format!("K_{q:?}"), &z, &z, q)]
    }

    /// `I^init-which`: output strategy on switch `which`, input strategy on the other.
    pub fn output_pieces(&self, which: u8) -> Vec<Generated> {
        let (m1, m2) = self.switches();
        let all: Vec<usize> = (1..=self.k as usize).collect();
        let z = self.zero();
        if which == 1 {
            vec![
                self.top(2, &all),
                switch_out(&self.nm, &m1, self.k, &self.s),
                switch_input(&self.nm, &m2, self.k, &self.s),
                self.bottom("K^out-1", &self.s, &z, &self.s),
            ]
        } else {
            vec![
                self.top(1, &all),
                switch_input(&self.nm, &m1, self.k, &self.s),
                switch_out(&self.nm, &m2, self.k, &self.s),
                self.bottom("K^out-2", &z, &self.s, &self.s),
            ]
        }
    }

    /// The members of the union `I^init_q`, each as a list of pieces.
    pub fn at(&self, q: &[u32]) -> Vec<(String, Vec<Generated>)> {
        let mut out = Vec::new();
        for t in 1..=self.k as usize {
            for which in [1u8, 2] {
                out.push((format!("I^in-{which}_{{{t}}},{q:?}"), self.input_pieces(which, &[t], q)));
            }
        }
        out
    }

    /// The members of `I^init = I^init-1 ∪ I^init-2 ∪ I^init_s`.
    pub fn winning(&self) -> Vec<(String, Vec<Generated>)> {
        let mut out = vec![("I^init-1".to_string(), self.output_pieces(1)), ("I^init-2".to_string(), self.output_pieces(2))];
        out.extend(self.at(&self.s.clone()));
        out
    }
}

pub fn init_families<'a>(pair: &'a GamePair, board: &'a Board<'a>, ns: Ns, s: &[u32]) -> InitFamilies<'a> {
    InitFamilies { nm: Names::new(pair), board, ns, s: s.to_vec(), k: s.len() as u32 }
}

/// One product per union member.
pub fn init_union(variants: Vec<(String, Vec<Generated>)>, na: u32) -> Result<Vec<Product>> {
    variants.into_iter().map(|(label, pieces)| Product::new(label, pieces, na)).collect()
}

/// A strategy family on a standalone gadget, named by its parameters.
/// `t` lists 1-based pebbles, `l` is a 1-based choice output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    /// `H^out_{(p,T)}` on a switch.
    Out { p: Vec<u32>, t: Vec<usize> },
    /// `H^restart_{(p,T)}` on a switch, `T` nonempty.
    Restart { p: Vec<u32>, t: Vec<usize> },
    /// The critical input strategy `H^in_p` on a switch.
    In { p: Vec<u32> },
    /// `R_{(p,T)}` on `RS(r)` or `RD(r)`.
    Rule { p: Vec<u32>, t: Vec<usize> },
    /// `C^l_{(p,T)}` on a choice gadget.
    Choice { l: u32, p: Vec<u32>, t: Vec<usize> },
    /// `I^init` on `INIT^s`.
    Init,
    /// The critical `I^init_{(p,T)}` on `INIT^s`.
    InitAt { p: Vec<u32>, t: Vec<usize> },
}

fn check_position(p: &[u32], t: &[usize], k: u32, n: u32) -> Result<()> {
    if p.len() != k as usize || p.iter().any(|&v| v < 1 || v > n) {
        return input(format!("position {p:?} must map {k} pebbles to nodes 1..={n}"));
    }
    if t.iter().any(|&i| i < 1 || i > k as usize) {
        return input(format!("pebble set {t:?} must lie in 1..={k}"));
    }
    Ok(())
}

/// Materializes the requested family on `g` (maps with at most `k + 1` pairs).
pub fn build_gadget_strategy(g: &Gadget, kind: &StrategyKind) -> Result<StrategyFamily> {
    let (k, n) = (g.k, g.n);
    let nm = Names::new(&g.pair);
    let ns = Ns::root();
    let max = k as usize + 1;
    let board = Board::new(&g.pair.spoiler, &g.pair.duplicator)?;
    let mismatch = || input(format!("{kind:?} does not live on a {:?} gadget", g.kind));
    let generated = match (kind, &g.kind) {
        (StrategyKind::Out { p, t }, GadgetKind::Switch) => {
            check_position(p, t, k, n)?;
            switch_out(&nm, &ns, k, &zeroed(p, t))
        }
        (StrategyKind::Restart { p, t }, GadgetKind::Switch) => {
            check_position(p, t, k, n)?;
            if t.is_empty() {
                return input("restart strategies need a nonempty pebble set");
            }
            switch_restart(&nm, &board, &ns, k, &zeroed(p, t))
        }
        (StrategyKind::In { p }, GadgetKind::Switch) => {
            check_position(p, &[], k, n)?;
            switch_input(&nm, &ns, k, p)
        }
        (StrategyKind::Rule { p, t }, GadgetKind::Rule { rule, side }) => {
            check_position(p, t, k, n)?;
            let blocking = blocking_set(rule, p);
            let blocked = match side {
                RuleSide::Spoiler => {
                    let mut b: Vec<usize> = t.iter().chain(&blocking).copied().collect();
                    b.sort_unstable();
                    b.dedup();
                    b
                }
                RuleSide::Duplicator if blocking.is_empty() => t.clone(),
                RuleSide::Duplicator => return input(format!("the rule is not applicable at {p:?}, blocking {blocking:?}")),
            };
            rule_strategy(&nm, &ns, &zeroed(p, t), &zeroed(&apply_formally(rule, p), &blocked))
        }
        (StrategyKind::Choice { l, p, t }, GadgetKind::Choice { m }) => {
            check_position(p, t, k, n)?;
            if *l < 1 || l > m {
                return input(format!("output {l} outside 1..={m}"));
            }
            choice_strategy(&nm, &ns, *m, *l, p, t)
        }
        (StrategyKind::Init, GadgetKind::Init { start }) => {
            let fams = init_families(&g.pair, &board, ns, start);
            return Ok(materialize_union(&board, &init_union(fams.winning(), board.na())?, max));
        }
        (StrategyKind::InitAt { p, t }, GadgetKind::Init { start }) => {
            check_position(p, t, k, n)?;
            let fams = init_families(&g.pair, &board, ns, start);
            return Ok(materialize_union(&board, &init_union(fams.at(&zeroed(p, t)), board.na())?, max));
        }
        _ => return mismatch(),
    };
    Ok(generated.materialize(max))
}
