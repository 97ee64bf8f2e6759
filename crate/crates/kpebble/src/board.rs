//! A structure pair compiled for fast incremental legality checks.

use rustc_hash::FxHashSet;

use crate::error::Result;
use crate::structures::{ensure_valid, Elem, PartialHom, Structure};

enum Target {
    /// Binary relation over a small universe: one bit per pair.
    Dense { n: usize, bits: Vec<u64> },
    Sparse(FxHashSet<Vec<Elem>>),
    /// `B` does not have this relation at all.
    Missing,
}

impl Target {
    fn contains(&self, t: &[Elem]) -> bool {
        match self {
            Target::Dense { n, bits } => {
                let i = t[0] as usize * n + t[1] as usize;
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            Target::Sparse(set) => set.contains(t),
            Target::Missing => false,
        }
    }
}

const DENSE_LIMIT: usize = 1 << 26;

pub struct Board<'s> {
    pub a: &'s Structure,
    pub b: &'s Structure,
    cand: Vec<Vec<Elem>>,
    colored: bool,
    /// For each element of `A`, the tuples (relation, tuple) it occurs in.
    incident: Vec<Vec<(u32, u32)>>,
    a_tuples: Vec<Vec<Vec<Elem>>>,
    targets: Vec<Target>,
}

impl<'s> Board<'s> {
    pub fn new(a: &'s Structure, b: &'s Structure) -> Result<Self> {
        ensure_valid(a, "spoiler")?;
        ensure_valid(b, "duplicator")?;
        let colored = a.colors.is_some() && b.colors.is_some();
        let cand = (0..a.universe)
            .map(|x| match (a.color(x), &b.colors) {
                (Some(c), Some(cb)) => (0..b.universe).filter(|&y| cb[y as usize] == c).collect(),
                _ => (0..b.universe).collect(),
            })
            .collect();
        let mut incident = vec![Vec::new(); a.universe as usize];
        let mut a_tuples = Vec::new();
        let mut targets = Vec::new();
        for (ri, (name, rel)) in a.relations.iter().enumerate() {
            let tuples: Vec<Vec<Elem>> = rel.tuples.iter().cloned().collect();
            for (ti, t) in tuples.iter().enumerate() {
                let mut seen: Vec<Elem> = t.clone();
                seen.sort_unstable();
                seen.dedup();
                for e in seen {
                    incident[e as usize].push((ri as u32, ti as u32));
                }
            }
            a_tuples.push(tuples);
            let nb = b.universe as usize;
            targets.push(match b.relations.get(name) {
                None => Target::Missing,
                Some(r) if r.arity == 2 && nb * nb <= DENSE_LIMIT => {
                    let mut bits = vec![0u64; (nb * nb).div_ceil(64).max(1)];
                    for t in &r.tuples {
                        let i = t[0] as usize * nb + t[1] as usize;
                        bits[i / 64] |= 1 << (i % 64);
                    }
                    Target::Dense { n: nb, bits }
                }
                Some(r) => Target::Sparse(r.tuples.iter().cloned().collect()),
            });
        }
        Ok(Board { a, b, cand, colored, incident, a_tuples, targets })
    }

    pub fn na(&self) -> u32 {
        self.a.universe
    }

    pub fn nb(&self) -> u32 {
        self.b.universe
    }

    /// Images allowed for `x` by the colouring alone.
    pub fn candidates(&self, x: Elem) -> &[Elem] {
        &self.cand[x as usize]
    }

    pub fn color_ok(&self, x: Elem, y: Elem) -> bool {
        !self.colored || self.a.color(x) == self.b.color(y)
    }

    /// Whether `map ∪ {z ↦ bz}` preserves every tuple that contains `z`,
    /// assuming `map` itself is legal and `z ∉ Dom(map)`.
    pub fn extend_ok(&self, map: &[(Elem, Elem)], z: Elem, bz: Elem) -> bool {
        let lookup = |e: Elem| -> Option<Elem> {
            if e == z {
                return Some(bz);
            }
            map.binary_search_by_key(&e, |p| p.0).ok().map(|i| map[i].1)
        };
        let mut image = [0 as Elem; 8];
        'tuples: for &(r, ti) in &self.incident[z as usize] {
            let t = &self.a_tuples[r as usize][ti as usize];
            if t.len() <= image.len() {
                for (slot, &e) in image.iter_mut().zip(t) {
                    match lookup(e) {
                        Some(y) => *slot = y,
                        None => continue 'tuples,
                    }
                }
                if !self.targets[r as usize].contains(&image[..t.len()]) {
                    return false;
                }
            } else {
                let img: Option<Vec<Elem>> = t.iter().map(|&e| lookup(e)).collect();
                if let Some(img) = img {
                    if !self.targets[r as usize].contains(&img) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Full legality of an arbitrary map (ranges, colours, tuples).
    pub fn is_legal(&self, h: &PartialHom) -> bool {
        let p = h.pairs();
        for (i, &(x, y)) in p.iter().enumerate() {
            if x >= self.na() || y >= self.nb() || !self.color_ok(x, y) || !self.extend_ok(&p[..i], x, y) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::is_partial_hom;

    #[test]
    fn agrees_with_plain_check() {
        let a = Structure::cycle(4);
        let mut b = Structure::digraph(3, [(0, 1), (1, 2), (2, 2)]);
        b.add_tuple("U", vec![1]);
        let mut a2 = a.clone();
        a2.add_tuple("U", vec![0]);
        let board = Board::new(&a2, &b).unwrap();
        for x0 in 0..3 {
            for x1 in 0..3 {
                for x2 in 0..3 {
                    let h = PartialHom::from_pairs([(0, x0), (1, x1), (3, x2)]).unwrap();
                    assert_eq!(board.is_legal(&h), is_partial_hom(&a2, &b, &h).unwrap(), "{h:?}");
                }
            }
        }
    }
}
