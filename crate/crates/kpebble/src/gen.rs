//! Instance generators: exhaustive KAI sweeps and seeded random structures.
//! Every random generator draws from a ChaCha8 stream so a seed fixes the output.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Result};
use crate::kai::KaiInstance;
use crate::structures::Structure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ordered triples of pairwise distinct nodes in `1..=nodes`, lexicographic.
pub fn all_triples(nodes: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for u in 1..=nodes {
        for v in 1..=nodes {
            for w in 1..=nodes {
                if u != v && v != w && u != w {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Every set of at most `max` triples, by size and then lexicographically.
pub fn triple_sets(nodes: u32, max: usize) -> Vec<Vec<[u32; 3]>> {
    let all = all_triples(nodes);
    let mut out = vec![Vec::new()];
    let mut layer: Vec<(usize, Vec<[u32; 3]>)> = vec![(0, Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (from, set) in &layer {
            for (i, t) in all.iter().enumerate().skip(*from) {
                let mut s = set.clone();
                s.push(*t);
                next.push((i + 1, s));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        layer = next;
    }
    out
}

/// Injective maps `[k] -> [nodes]`, lexicographic.
pub fn injective_starts(k: u32, nodes: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, nodes: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
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
    let mut out = Vec::new();
    go(k, nodes, &mut Vec::new(), &mut out);
    out
}

/// All instances with `k` pebbles on `nodes` nodes, at most `max_triples`
/// rule triples, every injective start and every goal off the start.
pub fn kai_sweep(k: u32, nodes: u32, max_triples: usize) -> Result<Vec<KaiInstance>> {
    let mut out = Vec::new();
    for triples in triple_sets(nodes, max_triples) {
        for start in injective_starts(k, nodes) {
            for goal in (1..=nodes).filter(|g| !start.contains(g)) {
                out.push(KaiInstance::from_triples(k, nodes, &triples, start.clone(), goal)?);
            }
        }
    }
    Ok(out)
}

/// A random instance with `triples` distinct rule triples.
pub fn random_kai<R: Rng>(rng: &mut R, k: u32, nodes: u32, triples: usize) -> Result<KaiInstance> {
    if nodes <= k {
        return input(format!("{nodes} nodes leave no goal off a start of {k} pebbles"));
    }
    let all = all_triples(nodes);
    if triples > all.len() {
        return input(format!("only {} distinct triples exist on {nodes} nodes", all.len()));
    }
    let mut chosen: Vec<[u32; 3]> = all.choose_multiple(rng, triples).copied().collect();
    chosen.sort_unstable();
    let mut nodes_list: Vec<u32> = (1..=nodes).collect();
    nodes_list.shuffle(rng);
    let start = nodes_list[..k as usize].to_vec();
    let goal = *nodes_list[k as usize..].choose(rng).expect("a free node");
    KaiInstance::from_triples(k, nodes, &chosen, start, goal)
}

/// A digraph on `n` elements with every arc (loops included) present with probability `density`.
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

/// A simple undirected graph G(n, p), stored symmetrically.
pub fn random_graph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Structure {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Structure::graph(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_size() {
        assert_eq!(triple_sets(3, 2).len(), 1 + 6 + 15);
        assert_eq!(kai_sweep(2, 3, 2).unwrap().len(), 22 * 6);
    }

    #[test]
    fn seeded() {
        let a = random_kai(&mut rng(5), 2, 4, 3).unwrap();
        let b = random_kai(&mut rng(5), 2, 4, 3).unwrap();
        assert_eq!(a, b);
        assert!(!a.start.contains(&a.goal));
    }
}
