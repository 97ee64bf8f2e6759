//! DOT export. Colour classes become clusters; output is deterministic.

use std::fmt::Write;

use super::{GamePair, PlainPair};
use crate::structures::Structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Spoiler,
    Duplicator,
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spoiler" => Ok(Side::Spoiler),
            "duplicator" => Ok(Side::Duplicator),
            _ => Err(format!("unknown side {s:?} (spoiler or duplicator)")),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Writes any structure's `E` relation. Coloured structures get one cluster per colour.
pub fn structure_dot(s: &Structure, names: Option<&[String]>, color_names: Option<&[String]>, directed: bool) -> String {
    let name = |v: u32| names.map_or_else(|| v.to_string(), |n| n[v as usize].clone());
    let mut out = String::new();
    let (kw, arrow) = if directed { ("digraph", "->") } else { ("graph", "--") };
    writeln!(out, "{kw} G {{").unwrap();
    match &s.colors {
        Some(colors) => {
            let mut classes: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
            for (v, &c) in colors.iter().enumerate() {
                classes.entry(c).or_default().push(v as u32);
            }
            for (c, vs) in classes {
                let label = color_names.and_then(|n| n.get(c as usize)).cloned().unwrap_or_else(|| c.to_string());
                writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{c}"))).unwrap();
                writeln!(out, "    label={};", quote(&label)).unwrap();
                for v in vs {
                    writeln!(out, "    {};", quote(&name(v))).unwrap();
                }
                writeln!(out, "  }}").unwrap();
            }
        }
        None => {
            for v in 0..s.universe {
                writeln!(out, "  {};", quote(&name(v))).unwrap();
            }
        }
    }
    for t in s.edges() {
        if !directed && t[0] > t[1] {
            continue;
        }
        writeln!(out, "  {} {arrow} {};", quote(&name(t[0])), quote(&name(t[1]))).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn pair_dot(pair: &GamePair, side: Side) -> String {
    let (s, names) = match side {
        Side::Spoiler => (&pair.spoiler, &pair.spoiler_names),
        Side::Duplicator => (&pair.duplicator, &pair.duplicator_names),
    };
    structure_dot(s, Some(names), Some(&pair.color_names), false)
}

pub fn plain_dot(plain: &PlainPair, side: Side) -> String {
    let s = match side {
        Side::Spoiler => &plain.spoiler,
        Side::Duplicator => &plain.duplicator,
    };
    structure_dot(s, None, None, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::build_switch;

    #[test]
    fn empty_structure() {
        assert_eq!(structure_dot(&Structure::new(0), None, None, true), "digraph G {\n}\n");
    }

    #[test]
    fn switch_clusters() {
        let g = build_switch(2, 2).unwrap();
        let text = pair_dot(&g.pair, Side::Duplicator);
        assert_eq!(text.matches("subgraph").count(), 8);
        assert_eq!(text.lines().filter(|l| l.starts_with("    \"")).count(), 30);
        assert_eq!(text, pair_dot(&build_switch(2, 2).unwrap().pair, Side::Duplicator));
    }
}
