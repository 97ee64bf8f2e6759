//! Colour removal: colours become alternating paths to extra vertices `d_0..d_w`.

use serde::{Deserialize, Serialize};

use super::GamePair;
use crate::error::{input, Result};
use crate::structures::{Elem, PartialHom, Structure, EDGE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `(d_i, x)` and `(x, d_{i+1})` for `x` of colour `P_i`, `i < w`.
    #[default]
    Text,
    /// `(x, d_i)` and `(d_{i+1}, x)`, as drawn.
    Figure,
}

impl std::str::FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Orientation::Text),
            "figure" => Ok(Orientation::Figure),
            _ => Err(format!("unknown orientation {s:?} (text or figure)")),
        }
    }
}

/// Uncoloured digraphs; `d_j` is vertex `first_d + j` on either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainPair {
    pub spoiler: Structure,
    pub duplicator: Structure,
    pub colors: u32,
    pub spoiler_first_d: Elem,
    pub duplicator_first_d: Elem,
    pub orientation: Orientation,
}

fn strip(s: &Structure, w: u32, orientation: Orientation) -> Result<(Structure, Elem)> {
    let Some(colors) = &s.colors else { return input("decoloring needs a coloured structure") };
    let first = s.universe;
    let d = |j: u32| first + j;
    let mut out = Structure::new(first + w + 1).with_relation(EDGE, 2);
    for t in s.edges() {
        out.add_tuple(EDGE, t.clone());
    }
    for (x, &c) in colors.iter().enumerate() {
        let (x, i) = (x as Elem, c + 1);
        let mut arc = |u, v| out.add_tuple(EDGE, vec![u, v]);
        match orientation {
            Orientation::Text if i < w => {
                arc(d(i), x);
                arc(x, d(i + 1));
            }
            Orientation::Figure if i < w => {
                arc(x, d(i));
                arc(d(i + 1), x);
            }
            _ => arc(x, d(w)),
        }
    }
    out.add_tuple(EDGE, vec![d(1), d(0)]);
    for j in 0..=w {
        out.add_tuple(EDGE, vec![d(j), d(j)]);
    }
    Ok((out, first))
}

pub fn decolor(pair: &GamePair, orientation: Orientation) -> Result<PlainPair> {
    let w = pair.color_names.len() as u32;
    let (spoiler, spoiler_first_d) = strip(&pair.spoiler, w, orientation)?;
    let (duplicator, duplicator_first_d) = strip(&pair.duplicator, w, orientation)?;
    Ok(PlainPair { spoiler, duplicator, colors: w, spoiler_first_d, duplicator_first_d, orientation })
}

impl PlainPair {
    /// The constant map onto the looped `d_0`: a total homomorphism, so a
    /// Duplicator win with any number of pebbles.
    pub fn constant_certificate(&self) -> PartialHom {
        let target = self.duplicator_first_d;
        PartialHom::from_pairs((0..self.spoiler.universe).map(|a| (a, target))).expect("a function")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::PairBuilder;
    use crate::structures::is_partial_hom;

    fn toy() -> GamePair {
        let mut b = PairBuilder::new();
        b.vertex_block("x", 2, 1);
        b.finalize()
    }

    #[test]
    fn adds_w_plus_one_vertices() {
        let p = toy();
        let w = p.color_names.len() as u32;
        for o in [Orientation::Text, Orientation::Figure] {
            let plain = decolor(&p, o).unwrap();
            assert_eq!(plain.spoiler.universe, p.spoiler.universe + w + 1);
            assert_eq!(plain.duplicator.universe, p.duplicator.universe + w + 1);
            assert!(plain.spoiler.colors.is_none());
        }
    }

    #[test]
    fn loops_give_a_total_homomorphism() {
        let plain = decolor(&toy(), Orientation::Text).unwrap();
        let h = plain.constant_certificate();
        assert!(is_partial_hom(&plain.spoiler, &plain.duplicator, &h).unwrap());
    }

    #[test]
    fn uncoloured_input_is_rejected() {
        let mut p = toy();
        p.spoiler.colors = None;
        assert!(decolor(&p, Orientation::Text).is_err());
        assert_eq!("figure".parse::<Orientation>().unwrap(), Orientation::Figure);
    }
}
