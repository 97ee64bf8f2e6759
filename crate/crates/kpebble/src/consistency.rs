//! Strong k-consistency: the plain check and the establishing propagation.
//!
//! Propagation here is deliberately independent of the pebble solver: it keeps
//! an explicit set of maps, re-examines every survivor each round and only
//! uses `is_partial_hom` for legality.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::family::StrategyFamily;
use crate::structures::{enumerate_partial_homs, is_partial_hom, Elem, PartialHom, Structure};

/// Allowed images of one scope (a sorted set of `A`-elements).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScopeRelation {
    pub scope: Vec<Elem>,
    pub allowed: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct ConsistencyResult {
    pub establishable: bool,
    /// Surviving maps with at most `k - 1` pairs.
    pub family: StrategyFamily,
    pub rounds: u32,
}

impl ConsistencyResult {
    /// The family as one relation per nonempty scope, sorted by scope.
    pub fn relations(&self) -> Vec<ScopeRelation> {
        let mut by_scope: BTreeMap<Vec<Elem>, Vec<Vec<Elem>>> = BTreeMap::new();
        for h in self.family.members().filter(|h| !h.is_empty()) {
            by_scope.entry(h.domain().collect()).or_default().push(h.pairs().iter().map(|p| p.1).collect());
        }
        by_scope
            .into_iter()
            .map(|(scope, mut allowed)| {
                allowed.sort();
                ScopeRelation { scope, allowed }
            })
            .collect()
    }
}

fn legal_maps(a: &Structure, b: &Structure, max: usize, budget: u64) -> Result<Vec<PartialHom>> {
    enumerate_partial_homs(a, b, max, budget)
}

fn is_legal(a: &Structure, b: &Structure, h: &PartialHom) -> bool {
    is_partial_hom(a, b, h).expect("elements in range")
}

/// Every `(i-1)`-partial homomorphism extends to any element, for all `i ≤ k`.
pub fn is_strongly_k_consistent(a: &Structure, b: &Structure, k: usize, budget: u64) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    let maps = legal_maps(a, b, k - 1, budget)?;
    Ok(maps.iter().all(|h| {
        (0..a.universe).all(|z| h.get(z).is_some() || (0..b.universe).any(|y| is_legal(a, b, &h.with(z, y).unwrap())))
    }))
}

/// Greatest downward-closed family of maps with at most `k - 1` pairs in
/// which every member extends to every element; for members with `k - 1`
/// pairs the extension must be legal with all its `(k-1)`-submaps present.
pub fn establish_strong_k_consistency(a: &Structure, b: &Structure, k: usize, budget: u64, exec: Exec) -> Result<ConsistencyResult> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut family: FxHashSet<PartialHom> = legal_maps(a, b, k - 1, budget)?.into_iter().collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut members: Vec<PartialHom> = family.iter().cloned().collect();
        members.sort();
        let fam = &family;
        let extends = |h: &PartialHom, z: Elem| {
            (0..b.universe).any(|y| {
                let g = h.with(z, y).unwrap();
                if g.len() < k {
                    fam.contains(&g)
                } else {
                    is_legal(a, b, &g) && g.pairs().iter().all(|&(x, _)| fam.contains(&g.without(x)))
                }
            })
        };
        let doomed = exec.filter(&members, |h| {
            h.pairs().iter().any(|&(x, _)| !fam.contains(&h.without(x))) || (0..a.universe).any(|z| h.get(z).is_none() && !extends(h, z))
        });
        if doomed.is_empty() {
            break;
        }
        for h in doomed {
            family.remove(&h);
        }
    }
    let establishable = family.contains(&PartialHom::new());
    Ok(ConsistencyResult { establishable, family: StrategyFamily::from_members(family), rounds })
}

/// `(A', B')`: the original structures with one extra relation per scope
/// whose partial homomorphisms of size `< k` are exactly the family.
///
/// Only meaningful for an establishable result: then every scope of size
/// `< k` has at least one allowed image, so none is silently left out.
pub fn reimpose(a: &Structure, b: &Structure, result: &ConsistencyResult) -> (Structure, Structure) {
    let (mut a2, mut b2) = (a.clone(), b.clone());
    for rel in result.relations() {
        let name = format!("scope:{}", rel.scope.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        a2 = a2.with_relation(&name, rel.scope.len());
        b2 = b2.with_relation(&name, rel.scope.len());
        a2.add_tuple(&name, rel.scope.clone());
        for t in rel.allowed {
            b2.add_tuple(&name, t);
        }
    }
    (a2, b2)
}
