//! Strategy algebra: closure, composition and unions of critical strategies,
//! plus generators for the Duplicator strategies on every gadget.
//!
//! Explicit families are `StrategyFamily` values. Gadget strategies are kept
//! as `Generated` families (the closure of a few generator maps) and global
//! strategies as `Product`s of those; membership is then decided piecewise
//! and only the final union is materialized.

mod gadget;
mod global;

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::board::Board;
use crate::error::{Error, Result};
use crate::family::StrategyFamily;
use crate::structures::{Elem, PartialHom};

pub use gadget::{
    all_positions, build_gadget_strategy, choice_strategy, choice_zero, init_families, init_union, permutations, rule_strategy, switch_input,
    switch_out, switch_out_crit, switch_restart, switch_restart_crit, InitFamilies, Names, StrategyKind,
};
pub use global::{build_global_strategy, GlobalStrategy};

/// `cl(H)`: every submap of every member.
pub fn closure(maps: impl IntoIterator<Item = PartialHom>) -> StrategyFamily {
    let mut f = StrategyFamily::new();
    for h in maps {
        for g in h.subsets() {
            f.insert(g);
        }
    }
    f
}

/// `cl(H)` restricted to maps with at most `max` pairs.
pub fn closure_within(maps: impl IntoIterator<Item = PartialHom>, max: usize) -> StrategyFamily {
    let mut f = StrategyFamily::new();
    for h in maps {
        for g in h.subsets_up_to(max) {
            f.insert(g);
        }
    }
    f
}

fn connectable(g: &StrategyFamily, h: &StrategyFamily) -> Result<()> {
    let (Some(bg), Some(bh)) = (g.boundary(), h.boundary()) else {
        return Err(Error::Precondition("both families need a boundary function".into()));
    };
    for (z, vg) in bg {
        if let Some(vh) = bh.get(z) {
            if vg != vh {
                return Err(Error::Precondition(format!("boundaries disagree at spoiler vertex {z}: {vg} vs {vh}")));
            }
        }
    }
    Ok(())
}

fn merged_boundary(g: &StrategyFamily, h: &StrategyFamily) -> BTreeMap<Elem, Elem> {
    let mut b = g.boundary().cloned().unwrap_or_default();
    b.extend(h.boundary().into_iter().flatten().map(|(&a, &v)| (a, v)));
    b
}

/// `G ∘ H = {g ∪ h}`. A union is critical when one of its parts is.
pub fn compose(g: &StrategyFamily, h: &StrategyFamily) -> Result<StrategyFamily> {
    compose_within(g, h, usize::MAX)
}

/// `G ∘ H` keeping only unions with at most `max` pairs. Applied to
/// truncated inputs this equals the truncation of the full composition.
pub fn compose_within(g: &StrategyFamily, h: &StrategyFamily, max: usize) -> Result<StrategyFamily> {
    connectable(g, h)?;
    let mut out = StrategyFamily::new().with_boundary(merged_boundary(g, h));
    let hs = h.sorted_members();
    for a in g.sorted_members() {
        for b in hs.iter().filter(|b| b.len() <= max) {
            let Some(u) = a.union(b) else { continue };
            if u.len() > max {
                continue;
            }
            if g.is_critical(&a) || h.is_critical(b) {
                out.insert_critical(u);
            } else {
                out.insert(u);
            }
        }
    }
    Ok(out)
}

/// A critical member of family `family` that no family holds as a non-critical member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Uncovered {
    pub family: usize,
    pub map: PartialHom,
}

/// The union of `families`, with the critical members that stay uncovered.
/// An empty report means the union is a winning strategy.
pub fn union_critical(families: &[StrategyFamily]) -> (StrategyFamily, Vec<Uncovered>) {
    let mut out = StrategyFamily::new();
    for f in families {
        for h in f.members() {
            out.insert(h.clone());
        }
    }
    let mut report = Vec::new();
    for (i, f) in families.iter().enumerate() {
        for c in f.sorted_critical() {
            if !families.iter().any(|g| g.contains(&c) && !g.is_critical(&c)) {
                report.push(Uncovered { family: i, map: c.clone() });
                out.insert_critical(c);
            }
        }
    }
    (out, report)
}

/// `cl(generators)` on a set of Spoiler vertices, with critical members and a boundary.
#[derive(Clone, Debug)]
pub struct Generated {
    pub label: String,
    /// Sorted Spoiler vertices the family lives on.
    pub vertices: Vec<Elem>,
    pub gens: Vec<PartialHom>,
    pub crit: FxHashSet<PartialHom>,
    pub boundary: BTreeMap<Elem, Elem>,
}

impl Generated {
    pub fn new(label: impl Into<String>, mut vertices: Vec<Elem>, gens: Vec<PartialHom>, boundary: BTreeMap<Elem, Elem>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Generated { label: label.into(), vertices, gens, crit: FxHashSet::default(), boundary }
    }

    pub fn with_crit(mut self, crit: impl IntoIterator<Item = PartialHom>) -> Self {
        self.crit.extend(crit);
        self
    }

    pub fn covers(&self, v: Elem) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Whether the part of `h` on this family's vertices lies below a generator.
    pub fn admits(&self, h: &PartialHom) -> bool {
        let part: Vec<(Elem, Elem)> = h.pairs().iter().copied().filter(|&(a, _)| self.covers(a)).collect();
        self.gens.iter().any(|g| part.iter().all(|&(a, b)| g.get(a) == Some(b)))
    }

    pub fn contains(&self, h: &PartialHom) -> bool {
        h.domain().all(|a| self.covers(a)) && self.admits(h)
    }

    pub fn is_critical(&self, h: &PartialHom) -> bool {
        self.crit.contains(h)
    }

    /// Explicit members with at most `max` pairs.
    pub fn materialize(&self, max: usize) -> StrategyFamily {
        let mut f = closure_within(self.gens.iter().cloned(), max);
        for c in &self.crit {
            if f.contains(c) {
                f.mark_critical(c).expect("member");
            }
        }
        f.set_boundary(Some(self.boundary.clone()));
        f
    }

    /// Every generator agrees with the boundary and stays on the vertex set.
    pub fn check(&self) -> Result<()> {
        for g in &self.gens {
            for &(a, b) in g.pairs() {
                if !self.covers(a) {
                    return Err(Error::Precondition(format!("{}: generator leaves the vertex set at {a}", self.label)));
                }
                if self.boundary.get(&a).is_some_and(|&v| v != b) {
                    return Err(Error::Precondition(format!("{}: generator breaks the boundary at {a}", self.label)));
                }
            }
        }
        Ok(())
    }
}

/// `F_1 ∘ … ∘ F_r` for generated families on gadgets glued along boundaries.
#[derive(Clone, Debug)]
pub struct Product {
    pub label: String,
    pub pieces: Vec<Generated>,
    by_vertex: Vec<Vec<u32>>,
}

impl Product {
    /// Checks that the pieces are pairwise connectable: a vertex shared by
    /// two pieces is a boundary vertex of both, with the same image.
    pub fn new(label: impl Into<String>, pieces: Vec<Generated>, na: u32) -> Result<Product> {
        let label = label.into();
        let mut by_vertex = vec![Vec::new(); na as usize];
        for (i, p) in pieces.iter().enumerate() {
            p.check()?;
            for &v in &p.vertices {
                by_vertex[v as usize].push(i as u32);
            }
        }
        for (v, owners) in by_vertex.iter().enumerate() {
            if owners.len() < 2 {
                continue;
            }
            let v = v as Elem;
            let images: Vec<Option<Elem>> = owners.iter().map(|&i| pieces[i as usize].boundary.get(&v).copied()).collect();
            if images.iter().any(Option::is_none) || images.windows(2).any(|w| w[0] != w[1]) {
                let names: Vec<&str> = owners.iter().map(|&i| pieces[i as usize].label.as_str()).collect();
                return Err(Error::Precondition(format!("{label}: pieces {names:?} are not connectable at spoiler vertex {v}")));
            }
        }
        Ok(Product { label, pieces, by_vertex })
    }

    pub fn contains(&self, h: &PartialHom) -> bool {
        h.domain().all(|v| !self.by_vertex[v as usize].is_empty()) && self.pieces.iter().all(|p| p.admits(h))
    }

    /// Membership of `h`, given that `h` without `v` is a member.
    fn admits_step(&self, h: &PartialHom, v: Elem) -> bool {
        let owners = &self.by_vertex[v as usize];
        !owners.is_empty() && owners.iter().all(|&i| self.pieces[i as usize].admits(h))
    }

    /// Critical when some piece holds it as a critical member.
    pub fn is_critical(&self, h: &PartialHom) -> bool {
        self.contains(h) && self.pieces.iter().any(|p| p.is_critical(h))
    }

    pub fn critical_members(&self) -> Vec<PartialHom> {
        let mut out: Vec<PartialHom> = self.pieces.iter().flat_map(|p| p.crit.iter()).filter(|c| self.contains(c)).cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn boundary(&self) -> BTreeMap<Elem, Elem> {
        self.pieces.iter().flat_map(|p| p.boundary.iter().map(|(&a, &b)| (a, b))).collect()
    }
}

/// A critical member of product `product` that no product holds non-critically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UncoveredIn {
    pub product: String,
    pub map: PartialHom,
}

/// Critical members of every product that no product holds as a non-critical member.
pub fn cover_report(products: &[Product]) -> Vec<UncoveredIn> {
    let mut out = Vec::new();
    for p in products {
        for c in p.critical_members() {
            if !products.iter().any(|q| q.contains(&c) && !q.is_critical(&c)) {
                out.push(UncoveredIn { product: p.label.clone(), map: c });
            }
        }
    }
    out
}

/// Every map with at most `max` pairs that lies in one of `products`.
/// Critical marks are kept for members that are critical in every product containing them.
pub fn materialize_union(board: &Board, products: &[Product], max: usize) -> StrategyFamily {
    let mut fam = StrategyFamily::new();
    let all: Vec<u32> = (0..products.len() as u32).collect();
    let mut stack: Vec<(PartialHom, Vec<u32>)> = vec![(PartialHom::new(), all)];
    if !products.is_empty() {
        fam.insert(PartialHom::new());
    }
    while let Some((h, alive)) = stack.pop() {
        let start = h.pairs().last().map_or(0, |p| p.0 + 1);
        for v in start..board.na() {
            for &b in board.candidates(v) {
                let Some(g) = h.with(v, b) else { continue };
                if g.len() < max {
                    let next: Vec<u32> = alive.iter().copied().filter(|&i| products[i as usize].admits_step(&g, v)).collect();
                    if !next.is_empty() {
                        fam.insert(g.clone());
                        stack.push((g, next));
                    }
                } else if alive.iter().any(|&i| products[i as usize].admits_step(&g, v)) {
                    fam.insert(g);
                }
            }
        }
    }
    let crit: Vec<PartialHom> = products.iter().flat_map(|p| p.critical_members()).collect();
    for c in crit {
        if c.len() <= max && products.iter().all(|p| !p.contains(&c) || p.is_critical(&c)) {
            fam.mark_critical(&c).expect("member");
        }
    }
    fam
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::solver::verify_on;
    use crate::structures::Structure;

    fn ph(p: &[(Elem, Elem)]) -> PartialHom {
        PartialHom::from_pairs(p.iter().copied()).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure([ph(&[(0, 1), (1, 0)])]).len(), 4);
        assert!(closure(Vec::<PartialHom>::new()).is_empty());
        let once = closure([ph(&[(0, 1), (2, 2)]), ph(&[(1, 1)])]);
        let twice = closure(once.members().cloned().collect::<Vec<_>>());
        assert_eq!(once, twice);
    }

    #[test]
    fn compose_total_maps() {
        let g = closure([ph(&[(0, 0), (1, 1)])]).with_boundary([(1, 1)].into());
        let h = closure([ph(&[(1, 1), (2, 0)])]).with_boundary([(1, 1)].into());
        let gh = compose(&g, &h).unwrap();
        let expect = closure([ph(&[(0, 0), (1, 1), (2, 0)])]);
        assert_eq!(gh.sorted_members(), expect.sorted_members());
        let bad = closure([ph(&[(1, 0)])]).with_boundary([(1, 0)].into());
        assert!(matches!(compose(&g, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn union_reports() {
        // Path 0-1-2 into one edge, three pebbles; the total map is a homomorphism.
        let a = Structure::graph(3, [(0, 1), (1, 2)]);
        let b = Structure::graph(2, [(0, 1)]);
        let board = Board::new(&a, &b).unwrap();
        let win = closure_within([ph(&[(0, 0), (1, 1), (2, 0)])], 3);
        let (u, rep) = union_critical(&[win.clone(), win.clone()]);
        assert!(rep.is_empty());
        assert!(verify_on(&board, 3, &u, Exec::Sequential).is_winning);

        let mut crit = closure_within([ph(&[(0, 0), (1, 1)])], 2);
        crit.mark_critical(&ph(&[(0, 0), (1, 1)])).unwrap();
        let (_, alone) = union_critical(std::slice::from_ref(&crit));
        assert_eq!(alone.len(), 1);
        let (u, rep) = union_critical(&[crit, win]);
        assert!(rep.is_empty());
        assert!(verify_on(&board, 3, &u, Exec::Sequential).is_winning);
    }

    #[test]
    fn products_and_materialization() {
        let a = Structure::graph(3, [(0, 1), (1, 2)]);
        let b = Structure::graph(3, [(0, 1), (1, 2)]);
        let board = Board::new(&a, &b).unwrap();
        let left = Generated::new("l", vec![0, 1], vec![ph(&[(0, 0), (1, 1)]), ph(&[(0, 2), (1, 1)])], [(1, 1)].into());
        let right = Generated::new("r", vec![1, 2], vec![ph(&[(1, 1), (2, 2)])], [(1, 1)].into());
        let p = Product::new("p", vec![left.clone(), right.clone()], 3).unwrap();
        assert!(p.contains(&ph(&[(0, 2), (2, 2)])));
        assert!(!p.contains(&ph(&[(0, 1)])));
        let fam = materialize_union(&board, &[p], 3);
        let explicit = compose(&left.materialize(3), &right.materialize(3)).unwrap();
        assert_eq!(fam.sorted_members(), explicit.sorted_members());
        let clash = Generated::new("c", vec![1, 2], vec![ph(&[(1, 0), (2, 1)])], [(1, 0)].into());
        assert!(Product::new("q", vec![left, clash], 3).is_err());
    }
}
