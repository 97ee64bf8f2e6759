//! Finite relational structures, colourings and partial homomorphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::board::Board;
use crate::error::{input, Error, Result};

pub type Elem = u32;

/// Name of the edge relation used for graphs and digraphs.
pub const EDGE: &str = "E";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation { arity, tuples: BTreeSet::new() }
    }
}

/// A finite structure over the universe `0..universe`, optionally coloured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub universe: u32,
    pub relations: BTreeMap<String, Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
}

impl Structure {
    pub fn new(universe: u32) -> Self {
        Structure { universe, relations: BTreeMap::new(), colors: None }
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Self {
        self.relations.entry(name.to_string()).or_insert_with(|| Relation::new(arity));
        self
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Self {
        self.colors = Some(colors);
        self
    }

    /// Adds a tuple, creating the relation with the tuple's arity if needed.
    pub fn add_tuple(&mut self, name: &str, tuple: Vec<Elem>) {
        self.relations
            .entry(name.to_string())
            .or_insert_with(|| Relation::new(tuple.len()))
            .tuples
            .insert(tuple);
    }

    /// Directed graph with relation `E`.
    pub fn digraph(universe: u32, arcs: impl IntoIterator<Item = (Elem, Elem)>) -> Self {
        let mut s = Structure::new(universe).with_relation(EDGE, 2);
        for (u, v) in arcs {
            s.add_tuple(EDGE, vec![u, v]);
        }
        s
    }

    /// Undirected graph: every edge becomes two arcs.
    pub fn graph(universe: u32, edges: impl IntoIterator<Item = (Elem, Elem)>) -> Self {
        Structure::digraph(universe, edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]))
    }

    pub fn complete(k: u32) -> Self {
        Structure::graph(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))))
    }

    pub fn cycle(n: u32) -> Self {
        Structure::graph(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn color(&self, a: Elem) -> Option<u32> {
        self.colors.as_ref().map(|c| c[a as usize])
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.values().map(|r| r.tuples.len()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<Elem>> {
        self.relations.get(EDGE).into_iter().flat_map(|r| r.tuples.iter())
    }

    pub fn has_tuple(&self, name: &str, tuple: &[Elem]) -> bool {
        self.relations.get(name).is_some_and(|r| r.tuples.contains(tuple))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    BadArity { relation: String, tuple: Vec<Elem>, arity: usize },
    OutOfRange { relation: String, tuple: Vec<Elem>, element: Elem },
    PartialColoring { universe: u32, colored: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate_structure(s: &Structure) -> ValidationReport {
    let mut issues = Vec::new();
    for (name, rel) in &s.relations {
        for t in &rel.tuples {
            if t.len() != rel.arity {
                issues.push(Issue::BadArity { relation: name.clone(), tuple: t.clone(), arity: rel.arity });
            }
            if let Some(&e) = t.iter().find(|&&e| e >= s.universe) {
                issues.push(Issue::OutOfRange { relation: name.clone(), tuple: t.clone(), element: e });
            }
        }
    }
    if let Some(c) = &s.colors {
        if c.len() != s.universe as usize {
            issues.push(Issue::PartialColoring { universe: s.universe, colored: c.len() });
        }
    }
    ValidationReport { issues }
}

pub(crate) fn ensure_valid(s: &Structure, side: &str) -> Result<()> {
    let report = validate_structure(s);
    match report.issues.first() {
        None => Ok(()),
        Some(issue) => input(format!("{side} structure is malformed: {issue:?}")),
    }
}

/// A finite partial map, kept sorted by source element.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Elem, Elem)>", into = "Vec<(Elem, Elem)>")]
pub struct PartialHom(SmallVec<[(Elem, Elem); 4]>);

impl PartialHom {
    pub fn new() -> Self {
        PartialHom(SmallVec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Result<Self> {
        let mut v: SmallVec<[(Elem, Elem); 4]> = pairs.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(w) = v.windows(2).find(|w| w[0].0 == w[1].0) {
            return input(format!("element {} has two images ({} and {})", w[0].0, w[0].1, w[1].1));
        }
        Ok(PartialHom(v))
    }

    /// Caller guarantees the pairs are sorted by source with distinct sources.
    pub(crate) fn from_sorted(pairs: &[(Elem, Elem)]) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        PartialHom(SmallVec::from_slice(pairs))
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn get(&self, a: Elem) -> Option<Elem> {
        self.0.binary_search_by_key(&a, |p| p.0).ok().map(|i| self.0[i].1)
    }

    /// `self ∪ {a ↦ b}`, or `None` if `a` already has another image.
    pub fn with(&self, a: Elem, b: Elem) -> Option<Self> {
        match self.0.binary_search_by_key(&a, |p| p.0) {
            Ok(i) => (self.0[i].1 == b).then(|| self.clone()),
            Err(i) => {
                let mut v = self.0.clone();
                v.insert(i, (a, b));
                Some(PartialHom(v))
            }
        }
    }

    pub fn without(&self, a: Elem) -> Self {
        PartialHom(self.0.iter().copied().filter(|p| p.0 != a).collect())
    }

    pub fn is_subset_of(&self, other: &PartialHom) -> bool {
        self.0.iter().all(|&(a, b)| other.get(a) == Some(b))
    }

    pub fn union(&self, other: &PartialHom) -> Option<Self> {
        let mut out = self.clone();
        for &(a, b) in other.pairs() {
            out = out.with(a, b)?;
        }
        Some(out)
    }

    pub fn restrict(&self, mut keep: impl FnMut(Elem) -> bool) -> Self {
        PartialHom(self.0.iter().copied().filter(|p| keep(p.0)).collect())
    }

    /// Every submap (all 2^|Dom| of them), including the map itself and the empty map.
    pub fn subsets(&self) -> impl Iterator<Item = PartialHom> + '_ {
        let n = self.0.len();
        assert!(n < 32, "subset enumeration of a map with {n} pairs");
        (0u32..1 << n).map(move |mask| {
            PartialHom((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    /// Submaps with at most `max` pairs.
    pub fn subsets_up_to(&self, max: usize) -> Vec<PartialHom> {
        let mut out = vec![PartialHom::new()];
        let mut frontier = vec![(PartialHom::new(), 0usize)];
        while let Some((h, next)) = frontier.pop() {
            if h.len() == max {
                continue;
            }
            for i in next..self.0.len() {
                let mut v = h.0.clone();
                v.push(self.0[i]);
                let g = PartialHom(v);
                out.push(g.clone());
                frontier.push((g, i + 1));
            }
        }
        out
    }
}

impl fmt::Debug for PartialHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("}")
    }
}

impl TryFrom<Vec<(Elem, Elem)>> for PartialHom {
    type Error = Error;
    fn try_from(v: Vec<(Elem, Elem)>) -> Result<Self> {
        PartialHom::from_pairs(v)
    }
}

impl From<PartialHom> for Vec<(Elem, Elem)> {
    fn from(h: PartialHom) -> Self {
        h.0.into_vec()
    }
}

/// Checks relation and colour preservation of `h` from `a` into `b`.
pub fn is_partial_hom(a: &Structure, b: &Structure, h: &PartialHom) -> Result<bool> {
    for &(x, y) in h.pairs() {
        if x >= a.universe || y >= b.universe {
            return input(format!("pair {x}->{y} outside universes {} and {}", a.universe, b.universe));
        }
    }
    if let (Some(ca), Some(cb)) = (&a.colors, &b.colors) {
        if h.pairs().iter().any(|&(x, y)| ca.get(x as usize) != cb.get(y as usize)) {
            return Ok(false);
        }
    }
    for (name, rel) in &a.relations {
        for t in &rel.tuples {
            let image: Option<Vec<Elem>> = t.iter().map(|&e| h.get(e)).collect();
            if let Some(image) = image {
                if !b.has_tuple(name, &image) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All legal partial homomorphisms with at most `max_domain` pairs, empty map first.
///
/// Fails once more than `budget` maps have been produced.
pub fn enumerate_partial_homs(a: &Structure, b: &Structure, max_domain: usize, budget: u64) -> Result<Vec<PartialHom>> {
    let board = Board::new(a, b)?;
    let mut out = vec![PartialHom::new()];
    let mut stack = vec![PartialHom::new()];
    while let Some(h) = stack.pop() {
        if h.len() == max_domain {
            continue;
        }
        let start = h.pairs().last().map_or(0, |p| p.0 + 1);
        for z in start..a.universe {
            for &bz in board.candidates(z) {
                if board.extend_ok(h.pairs(), z, bz) {
                    let g = h.with(z, bz).expect("fresh element");
                    out.push(g.clone());
                    if out.len() as u64 > budget {
                        return Err(Error::Budget {
                            what: format!("partial homomorphisms with |Dom| <= {max_domain}"),
                            limit: budget,
                        });
                    }
                    stack.push(g);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(p: &[(u32, u32)]) -> PartialHom {
        PartialHom::from_pairs(p.iter().copied()).unwrap()
    }

    #[test]
    fn validation_reports() {
        let tri = Structure::digraph(3, [(0, 1), (1, 2), (2, 0)]);
        assert!(validate_structure(&tri).is_valid());
        let bad = Structure::digraph(3, [(0, 5)]);
        assert!(matches!(validate_structure(&bad).issues[0], Issue::OutOfRange { element: 5, .. }));
        let partial = Structure::new(3).with_colors(vec![0, 1]);
        assert!(matches!(validate_structure(&partial).issues[0], Issue::PartialColoring { .. }));
        let mut arity = Structure::new(3).with_relation("R", 2);
        arity.relations.get_mut("R").unwrap().tuples.insert(vec![0, 1, 2]);
        assert!(matches!(validate_structure(&arity).issues[0], Issue::BadArity { .. }));
    }

    #[test]
    fn hom_checks() {
        let edge = Structure::digraph(2, [(0, 1)]);
        let looped = Structure::digraph(1, [(0, 0)]);
        let isolated = Structure::digraph(2, []);
        assert!(is_partial_hom(&edge, &looped, &h(&[(0, 0), (1, 0)])).unwrap());
        assert!(!is_partial_hom(&edge, &isolated, &h(&[(0, 0), (1, 1)])).unwrap());
        assert!(is_partial_hom(&edge, &isolated, &h(&[(0, 0)])).unwrap());
        assert!(is_partial_hom(&edge, &isolated, &h(&[(0, 7)])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let one = Structure::new(1);
        assert_eq!(enumerate_partial_homs(&one, &one, 1, 100).unwrap().len(), 2);
        let k2 = Structure::complete(2);
        let all = enumerate_partial_homs(&k2, &k2, 2, 100).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.contains(&h(&[(0, 1), (1, 0)])));
        let a = Structure::new(1).with_colors(vec![1]);
        let b = Structure::new(2).with_colors(vec![1, 2]);
        assert_eq!(enumerate_partial_homs(&a, &b, 1, 100).unwrap(), vec![h(&[]), h(&[(0, 0)])]);
        assert!(matches!(enumerate_partial_homs(&k2, &k2, 2, 3), Err(Error::Budget { .. })));
    }

    #[test]
    fn partial_hom_json_round_trip() {
        let m = h(&[(3, 1), (0, 2)]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, "[[0,2],[3,1]]");
        assert_eq!(serde_json::from_str::<PartialHom>(&text).unwrap(), m);
        assert!(serde_json::from_str::<PartialHom>("[[0,1],[0,2]]").is_err());
    }

    #[test]
    fn bounded_subsets() {
        let m = h(&[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(m.subsets().count(), 8);
        assert_eq!(m.subsets_up_to(2).len(), 7);
    }
}
