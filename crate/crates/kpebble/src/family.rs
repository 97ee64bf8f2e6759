//! Explicit families of partial homomorphisms with an optional critical subset.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::structures::{Elem, PartialHom};

#[derive(Clone, Debug, Default)]
pub struct StrategyFamily {
    members: FxHashSet<PartialHom>,
    critical: FxHashSet<PartialHom>,
    boundary: Option<BTreeMap<Elem, Elem>>,
}

impl PartialEq for StrategyFamily {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.critical == other.critical && self.boundary == other.boundary
    }
}

impl StrategyFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_members(members: impl IntoIterator<Item = PartialHom>) -> Self {
        StrategyFamily { members: members.into_iter().collect(), ..Self::default() }
    }

    pub fn with_boundary(mut self, boundary: BTreeMap<Elem, Elem>) -> Self {
        self.boundary = Some(boundary);
        self
    }

    pub fn insert(&mut self, h: PartialHom) -> bool {
        self.members.insert(h)
    }

    /// Adds `h` as a member and marks it critical.
    pub fn insert_critical(&mut self, h: PartialHom) {
        self.members.insert(h.clone());
        self.critical.insert(h);
    }

    pub fn mark_critical(&mut self, h: &PartialHom) -> Result<()> {
        if !self.members.contains(h) {
            return input(format!("critical map {h:?} is not a member"));
        }
        self.critical.insert(h.clone());
        Ok(())
    }

    pub fn contains(&self, h: &PartialHom) -> bool {
        self.members.contains(h)
    }

    pub fn is_critical(&self, h: &PartialHom) -> bool {
        self.critical.contains(h)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &PartialHom> {
        self.members.iter()
    }

    pub fn critical(&self) -> impl Iterator<Item = &PartialHom> {
        self.critical.iter()
    }

    pub fn critical_len(&self) -> usize {
        self.critical.len()
    }

    pub fn boundary(&self) -> Option<&BTreeMap<Elem, Elem>> {
        self.boundary.as_ref()
    }

    pub fn set_boundary(&mut self, boundary: Option<BTreeMap<Elem, Elem>>) {
        self.boundary = boundary;
    }

    /// Members in canonical order (by size, then pairs).
    pub fn sorted_members(&self) -> Vec<PartialHom> {
        let mut v: Vec<PartialHom> = self.members.iter().cloned().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    pub fn sorted_critical(&self) -> Vec<PartialHom> {
        let mut v: Vec<PartialHom> = self.critical.iter().cloned().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    pub fn max_domain(&self) -> usize {
        self.members.iter().map(PartialHom::len).max().unwrap_or(0)
    }

    /// First member that disagrees with the declared boundary function, if any.
    pub fn boundary_violation(&self) -> Option<(PartialHom, Elem)> {
        let beta = self.boundary.as_ref()?;
        self.sorted_members().into_iter().find_map(|h| {
            h.pairs().iter().find(|(a, b)| beta.get(a).is_some_and(|v| v != b)).map(|&(a, _)| (h.clone(), a))
        })
    }

    /// Adds every member of `other`, and its critical marks.
    pub fn absorb(&mut self, other: &StrategyFamily) {
        self.members.extend(other.members.iter().cloned());
        self.critical.extend(other.critical.iter().cloned());
    }
}

#[derive(Serialize, Deserialize)]
struct MemberDto {
    map: PartialHom,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    critical: bool,
}

#[derive(Serialize, Deserialize)]
struct FamilyDto {
    members: Vec<MemberDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<Vec<(Elem, Elem)>>,
}

impl Serialize for StrategyFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = FamilyDto {
            members: self
                .sorted_members()
                .into_iter()
                .map(|h| MemberDto { critical: self.critical.contains(&h), map: h })
                .collect(),
            boundary: self.boundary.as_ref().map(|b| b.iter().map(|(&a, &v)| (a, v)).collect()),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StrategyFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = FamilyDto::deserialize(d)?;
        let mut f = StrategyFamily::new();
        for m in dto.members {
            if m.critical {
                f.insert_critical(m.map);
            } else {
                f.insert(m.map);
            }
        }
        f.boundary = dto.boundary.map(|b| b.into_iter().collect());
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_critical_marks() {
        let mut f = StrategyFamily::new().with_boundary([(0, 1)].into_iter().collect());
        f.insert(PartialHom::new());
        f.insert_critical(PartialHom::from_pairs([(0, 1), (2, 2)]).unwrap());
        let text = serde_json::to_string(&f).unwrap();
        let back: StrategyFamily = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn boundary_check() {
        let mut f = StrategyFamily::new().with_boundary([(0, 1)].into_iter().collect());
        f.insert(PartialHom::from_pairs([(0, 1)]).unwrap());
        assert!(f.boundary_violation().is_none());
        f.insert(PartialHom::from_pairs([(0, 2)]).unwrap());
        assert_eq!(f.boundary_violation().unwrap().1, 0);
    }
}
