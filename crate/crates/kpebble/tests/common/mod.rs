//! Independent reference implementations used as test oracles.
//!
//! Nothing here touches the fixpoint engine or `Board`; legality goes through
//! the plain `is_partial_hom` check only.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use kpebble::{is_partial_hom, PartialHom, Structure, Winner};
use rand::Rng;

/// Every map from a subset of `A` (size ≤ k) into `B`, legal or not.
fn all_maps(na: u32, nb: u32, k: usize) -> Vec<PartialHom> {
    let mut out = vec![PartialHom::new()];
    let mut frontier = vec![PartialHom::new()];
    while let Some(h) = frontier.pop() {
        if h.len() == k {
            continue;
        }
        let start = h.pairs().last().map_or(0, |p| p.0 + 1);
        for z in start..na {
            for b in 0..nb {
                let g = h.with(z, b).unwrap();
                out.push(g.clone());
                frontier.push(g);
            }
        }
    }
    out
}

/// Explicit attractor over configurations: Spoiler may lift any subset of
/// pebbles, then places one on a fresh element; Duplicator answers anywhere.
/// Spoiler wins at an illegal configuration or one containing a target.
pub fn attractor_reach(a: &Structure, b: &Structure, k: usize, targets: &[PartialHom]) -> HashSet<PartialHom> {
    let maps = all_maps(a.universe, b.universe, k);
    let mut win: HashSet<PartialHom> = maps
        .iter()
        .filter(|h| !is_partial_hom(a, b, h).unwrap() || targets.iter().any(|t| t.is_subset_of(h)))
        .cloned()
        .collect();
    loop {
        let mut grew = false;
        for h in &maps {
            if win.contains(h) {
                continue;
            }
            let forced = h.subsets().filter(|s| s.len() < k).any(|s| {
                (0..a.universe).any(|z| s.get(z).is_none() && (0..b.universe).all(|y| win.contains(&s.with(z, y).unwrap())))
            });
            if forced {
                win.insert(h.clone());
                grew = true;
            }
        }
        if !grew {
            return win;
        }
    }
}

pub fn game_tree_winner(a: &Structure, b: &Structure, k: usize) -> Winner {
    if attractor_reach(a, b, k, &[]).contains(&PartialHom::new()) {
        Winner::Spoiler
    } else {
        Winner::Duplicator
    }
}

/// Backtracking search for a total homomorphism.
pub fn has_homomorphism(a: &Structure, b: &Structure) -> bool {
    fn go(a: &Structure, b: &Structure, h: PartialHom) -> bool {
        if h.len() == a.universe as usize {
            return true;
        }
        let z = h.len() as u32;
        (0..b.universe).any(|y| {
            let g = h.with(z, y).unwrap();
            is_partial_hom(a, b, &g).unwrap() && go(a, b, g)
        })
    }
    go(a, b, PartialHom::new())
}

/// Whether the undirected graph on `n` vertices has `k` pairwise adjacent vertices.
pub fn has_clique(n: u32, adj: &HashSet<(u32, u32)>, k: usize) -> bool {
    fn go(n: u32, adj: &HashSet<(u32, u32)>, k: usize, chosen: &mut Vec<u32>, next: u32) -> bool {
        if chosen.len() == k {
            return true;
        }
        (next..n).any(|v| {
            if chosen.iter().all(|&u| adj.contains(&(u, v))) {
                chosen.push(v);
                let ok = go(n, adj, k, chosen, v + 1);
                chosen.pop();
                ok
            } else {
                false
            }
        })
    }
    go(n, adj, k, &mut Vec::new(), 0)
}

/// A random digraph with a single binary relation `E`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: u32, density: f64) -> Structure {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.random_bool(density) {
                arcs.push((u, v));
            }
        }
    }
    Structure::digraph(n, arcs)
}

/// Memo-free count of how many times each winner occurs, for sanity output.
pub fn tally(ws: &[Winner]) -> HashMap<Winner, usize> {
    let mut m = HashMap::new();
    for &w in ws {
        *m.entry(w).or_insert(0) += 1;
    }
    m
}

/// One digraph (loops allowed) per isomorphism class on `n` vertices,
/// keyed by the smallest adjacency bitmask over all relabellings.
pub fn digraph_classes(n: u32) -> Vec<Structure> {
    let n_us = n as usize;
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n_us {
        let mut next = Vec::new();
        for p in &perms {
            for v in (0..n_us).filter(|v| !p.contains(v)) {
                next.push([p.clone(), vec![v]].concat());
            }
        }
        perms = next;
    }
    let bits = n_us * n_us;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << bits {
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = 0u64;
                for u in 0..n_us {
                    for v in 0..n_us {
                        if mask >> (u * n_us + v) & 1 == 1 {
                            m |= 1 << (p[u] * n_us + p[v]);
                        }
                    }
                }
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let arcs = (0..bits).filter(|i| canon >> i & 1 == 1).map(|i| ((i / n_us) as u32, (i % n_us) as u32));
            out.push(Structure::digraph(n, arcs));
        }
    }
    out
}
