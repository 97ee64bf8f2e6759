//! Gadget graphs for the reduction from KAI games to existential pebble games.
//!
//! Vertices are built by name. A Spoiler vertex is `block/i`, a Duplicator
//! vertex is `block/i/suffix`, and every Spoiler vertex has its own colour,
//! shared with the Duplicator vertices of its class. Two gadgets are glued by
//! emitting their boundary blocks under the same name; since vertices and
//! edges are sets, gluing is idempotent and the result does not depend on the
//! order in which gadgets are added.

mod assembly;
pub(crate) mod choice;
mod counts;
mod decolor;
mod dot;
pub(crate) mod init;
mod rule;
pub(crate) mod switch;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::kai::Rule;
use crate::structures::{Elem, PartialHom, Structure};

pub use assembly::{assemble_in_order, assemble_reduction, assemble_with, gadget_count, goal_class, size_report, GadgetSize, Layout, ReductionOutput, SizeReport};
pub use choice::{build_choice, choice_output};
pub use counts::{choice_counts, init_counts, reduction_counts, rule_counts, switch_counts, Counts};
pub use decolor::{decolor, Orientation, PlainPair};
pub use dot::{pair_dot, plain_dot, structure_dot, Side};
pub use init::build_init;
pub use rule::{build_rule_gadgets, RuleSide};
pub use switch::{build_switch, build_switch_as_printed};

/// Maps local block names of a gadget to global names.
#[derive(Clone, Debug)]
pub struct Ns {
    prefix: String,
    renames: Vec<(String, String)>,
}

impl Ns {
    /// Every block lives under `prefix.` unless renamed.
    pub fn new(prefix: &str) -> Self {
        Ns { prefix: prefix.to_string(), renames: Vec::new() }
    }

    /// Standalone gadgets: local names are global names.
    pub fn root() -> Self {
        Ns::new("")
    }

    pub fn rename(mut self, local: &str, global: &str) -> Self {
        self.renames.push((local.to_string(), global.to_string()));
        self
    }

    pub fn block(&self, local: &str) -> String {
        if let Some((_, g)) = self.renames.iter().find(|(l, _)| l == local) {
            return g.clone();
        }
        if self.prefix.is_empty() {
            local.to_string()
        } else {
            format!("{}.{local}", self.prefix)
        }
    }

    /// Namespace for a gadget nested inside this one.
    pub fn nested(&self, prefix: &str) -> Ns {
        Ns::new(&self.block(prefix))
    }
}

pub fn sv(block: &str, i: u32) -> String {
    format!("{block}/{i}")
}

pub fn dv(block: &str, i: u32, suffix: impl std::fmt::Display) -> String {
    format!("{block}/{i}/{suffix}")
}

#[derive(Clone, Debug, Default)]
pub struct PairBuilder {
    spoiler: BTreeSet<String>,
    /// Duplicator vertex -> colour key.
    duplicator: BTreeMap<String, String>,
    s_edges: BTreeSet<(String, String)>,
    d_edges: BTreeSet<(String, String)>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl PairBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn s(&mut self, name: &str) {
        self.spoiler.insert(name.to_string());
    }

    /// Adds a Duplicator vertex in the class of the Spoiler vertex `class`.
    pub fn d(&mut self, name: &str, class: &str) {
        let prev = self.duplicator.insert(name.to_string(), class.to_string());
        assert!(prev.is_none() || prev.as_deref() == Some(class), "vertex {name} glued into two classes");
    }

    pub fn s_edge(&mut self, a: &str, b: &str) {
        debug_assert!(self.spoiler.contains(a) && self.spoiler.contains(b), "{a} {b}");
        self.s_edges.insert(ordered(a, b));
    }

    pub fn d_edge(&mut self, a: &str, b: &str) {
        debug_assert!(self.duplicator.contains_key(a) && self.duplicator.contains_key(b), "{a} {b}");
        self.d_edges.insert(ordered(a, b));
    }

    /// Moves a Duplicator vertex into another colour class.
    pub fn recolor(&mut self, name: &str, class: &str) {
        *self.duplicator.get_mut(name).expect("known vertex") = class.to_string();
    }

    /// Spoiler block `block/1..=k` with Duplicator classes `block/i/0..=n`.
    pub fn vertex_block(&mut self, block: &str, k: u32, n: u32) {
        for i in 1..=k {
            let s = sv(block, i);
            self.s(&s);
            for j in 0..=n {
                self.d(&dv(block, i, j), &s);
            }
        }
    }

    pub fn finalize(&self) -> GamePair {
        let spoiler_names: Vec<String> = self.spoiler.iter().cloned().collect();
        let duplicator_names: Vec<String> = self.duplicator.keys().cloned().collect();
        let mut colors: BTreeSet<&str> = self.spoiler.iter().map(String::as_str).collect();
        colors.extend(self.duplicator.values().map(String::as_str));
        let color_names: Vec<String> = colors.into_iter().map(str::to_string).collect();
        GamePair::from_parts(
            spoiler_names,
            duplicator_names,
            color_names,
            |names| names.to_vec(),
            |names| names.iter().map(|n| self.duplicator[n].clone()).collect(),
            &self.s_edges,
            &self.d_edges,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    Switch,
    Rule { rule: Rule, side: RuleSide },
    Init { start: Vec<u32> },
    Choice { m: u32 },
}

/// A standalone gadget: its pair plus the names of its boundary blocks.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub pair: GamePair,
    pub input: String,
    pub outputs: Vec<String>,
    pub k: u32,
    pub n: u32,
}

/// One colour class: its Spoiler vertices and its Duplicator vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub spoiler: Vec<Elem>,
    pub duplicator: Vec<Elem>,
}

/// A coloured Spoiler graph and Duplicator graph with vertex names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GamePair {
    pub spoiler: Structure,
    pub duplicator: Structure,
    pub spoiler_names: Vec<String>,
    pub duplicator_names: Vec<String>,
    pub color_names: Vec<String>,
    s_index: HashMap<String, Elem>,
    d_index: HashMap<String, Elem>,
}

impl GamePair {
    fn from_parts(
        spoiler_names: Vec<String>,
        duplicator_names: Vec<String>,
        color_names: Vec<String>,
        s_keys: impl Fn(&[String]) -> Vec<String>,
        d_keys: impl Fn(&[String]) -> Vec<String>,
        s_edges: &BTreeSet<(String, String)>,
        d_edges: &BTreeSet<(String, String)>,
    ) -> GamePair {
        let s_index: HashMap<String, Elem> = spoiler_names.iter().enumerate().map(|(i, n)| (n.clone(), i as Elem)).collect();
        let d_index: HashMap<String, Elem> = duplicator_names.iter().enumerate().map(|(i, n)| (n.clone(), i as Elem)).collect();
        let c_index: HashMap<&str, u32> = color_names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
        let graph = |n: usize, idx: &HashMap<String, Elem>, edges: &BTreeSet<(String, String)>, keys: Vec<String>| {
            let arcs = edges.iter().map(|(a, b)| (idx[a], idx[b]));
            Structure::graph(n as u32, arcs).with_colors(keys.iter().map(|k| c_index[k.as_str()]).collect())
        };
        let spoiler = graph(spoiler_names.len(), &s_index, s_edges, s_keys(&spoiler_names));
        let duplicator = graph(duplicator_names.len(), &d_index, d_edges, d_keys(&duplicator_names));
        GamePair { spoiler, duplicator, spoiler_names, duplicator_names, color_names, s_index, d_index }
    }

    pub fn s_id(&self, name: &str) -> Option<Elem> {
        self.s_index.get(name).copied()
    }

    pub fn d_id(&self, name: &str) -> Option<Elem> {
        self.d_index.get(name).copied()
    }

    /// Builds a map from `(spoiler name, duplicator name)` pairs; panics on unknown names.
    pub fn hom<S: AsRef<str>, D: AsRef<str>>(&self, pairs: impl IntoIterator<Item = (S, D)>) -> PartialHom {
        PartialHom::from_pairs(pairs.into_iter().map(|(s, d)| {
            let (s, d) = (s.as_ref(), d.as_ref());
            (self.s_id(s).unwrap_or_else(|| panic!("no spoiler vertex {s}")), self.d_id(d).unwrap_or_else(|| panic!("no duplicator vertex {d}")))
        }))
        .expect("a function")
    }

    pub fn describe(&self, h: &PartialHom) -> String {
        let parts: Vec<String> = h
            .pairs()
            .iter()
            .map(|&(a, b)| format!("{}->{}", self.spoiler_names[a as usize], self.duplicator_names[b as usize]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn vertex_count(&self) -> usize {
        self.spoiler_names.len() + self.duplicator_names.len()
    }

    /// Undirected edge counts (Spoiler, Duplicator).
    pub fn edge_counts(&self) -> (usize, usize) {
        let count = |s: &Structure| s.edges().filter(|t| t[0] <= t[1]).count();
        (count(&self.spoiler), count(&self.duplicator))
    }

    /// Registry of colour classes, keyed by colour name.
    pub fn blocks(&self) -> BTreeMap<String, Block> {
        let mut out: BTreeMap<String, Block> =
            self.color_names.iter().map(|c| (c.clone(), Block { spoiler: Vec::new(), duplicator: Vec::new() })).collect();
        let sc = self.spoiler.colors.as_ref().expect("coloured");
        let dc = self.duplicator.colors.as_ref().expect("coloured");
        for (v, &c) in sc.iter().enumerate() {
            out.get_mut(&self.color_names[c as usize]).unwrap().spoiler.push(v as Elem);
        }
        for (v, &c) in dc.iter().enumerate() {
            out.get_mut(&self.color_names[c as usize]).unwrap().duplicator.push(v as Elem);
        }
        out
    }

    /// Duplicator names of the class of Spoiler vertex `name`.
    pub fn class_of(&self, name: &str) -> Vec<&str> {
        let Some(s) = self.s_id(name) else { return Vec::new() };
        let c = self.spoiler.color(s);
        (0..self.duplicator.universe).filter(|&v| self.duplicator.color(v) == c).map(|v| self.duplicator_names[v as usize].as_str()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct PairDto {
    spoiler: Structure,
    duplicator: Structure,
    spoiler_names: Vec<String>,
    duplicator_names: Vec<String>,
    color_names: Vec<String>,
    #[serde(default)]
    blocks: Option<BTreeMap<String, Block>>,
}

impl Serialize for GamePair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairDto {
            spoiler: self.spoiler.clone(),
            duplicator: self.duplicator.clone(),
            spoiler_names: self.spoiler_names.clone(),
            duplicator_names: self.duplicator_names.clone(),
            color_names: self.color_names.clone(),
            blocks: Some(self.blocks()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GamePair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = PairDto::deserialize(d)?;
        let pair = GamePair::from_dto(dto).map_err(D::Error::custom)?;
        Ok(pair)
    }
}

impl GamePair {
    fn from_dto(dto: PairDto) -> Result<GamePair> {
        if dto.spoiler_names.len() != dto.spoiler.universe as usize || dto.duplicator_names.len() != dto.duplicator.universe as usize {
            return input("vertex names do not match universes");
        }
        let (Some(sc), Some(dc)) = (&dto.spoiler.colors, &dto.duplicator.colors) else {
            return input("a game pair must be coloured on both sides");
        };
        if sc.iter().chain(dc).any(|&c| c as usize >= dto.color_names.len()) {
            return input("colour id without a name");
        }
        let s_index = dto.spoiler_names.iter().enumerate().map(|(i, n)| (n.clone(), i as Elem)).collect();
        let d_index = dto.duplicator_names.iter().enumerate().map(|(i, n)| (n.clone(), i as Elem)).collect();
        let pair = GamePair {
            spoiler: dto.spoiler,
            duplicator: dto.duplicator,
            spoiler_names: dto.spoiler_names,
            duplicator_names: dto.duplicator_names,
            color_names: dto.color_names,
            s_index,
            d_index,
        };
        if let Some(b) = dto.blocks {
            if b != pair.blocks() {
                return input("block registry disagrees with the colouring");
            }
        }
        Ok(pair)
    }
}

/// `(p, T)`: position `p` with the pebbles of `t` (1-based) sent to index 0.
pub fn zeroed(p: &[u32], t: &[usize]) -> Vec<u32> {
    p.iter().enumerate().map(|(i, &v)| if t.contains(&(i + 1)) { 0 } else { v }).collect()
}

/// The boundary map `block/i -> block/i/p(i)`.
pub fn on_block(block: &str, p: &[u32]) -> Vec<(String, String)> {
    p.iter().enumerate().map(|(i, &v)| (sv(block, i as u32 + 1), dv(block, i as u32 + 1, v))).collect()
}

pub(crate) fn check_params(k: u32, n: u32) -> Result<()> {
    if k < 2 || n < 1 {
        return input(format!("gadget parameters need k >= 2 and n >= 1, got k={k}, n={n}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gluing_is_idempotent_and_order_free() {
        let mut a = PairBuilder::new();
        a.vertex_block("x", 2, 2);
        a.vertex_block("y", 2, 2);
        a.s_edge("x/1", "y/1");
        let mut b = PairBuilder::new();
        b.vertex_block("y", 2, 2);
        b.vertex_block("x", 2, 2);
        b.s_edge("y/1", "x/1");
        b.vertex_block("x", 2, 2);
        b.s_edge("x/1", "y/1");
        assert_eq!(a.finalize(), b.finalize());
    }

    #[test]
    fn json_round_trip() {
        let mut b = PairBuilder::new();
        b.vertex_block("x", 2, 1);
        b.d_edge("x/1/0", "x/2/1");
        let p = b.finalize();
        let text = serde_json::to_string(&p).unwrap();
        let back: GamePair = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.class_of("x/2"), vec!["x/2/0", "x/2/1"]);
    }
}
