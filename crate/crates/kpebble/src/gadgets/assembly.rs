//! The full reduction: INIT, one RS/switch/RD/switch chain per rule and a choice gadget.

use serde::Serialize;

use super::choice::{choice_output, emit_choice};
use super::counts::{reduction_counts, Counts};
use super::decolor::{decolor, Orientation, PlainPair};
use super::init::{check_start, emit_init};
use super::rule::{check_rule, emit_rule, RuleSide};
use super::switch::emit_switch;
use super::{check_params, dv, GamePair, Ns, PairBuilder};
use crate::error::{input, Result};
use crate::kai::{KaiInstance, Rule};

/// Global block names and gadget namespaces of a reduction.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub k: u32,
    pub n: u32,
    pub m: u32,
}

pub const X: &str = "X";
pub const Y: &str = "Y";

impl Layout {
    pub fn of(inst: &KaiInstance) -> Layout {
        Layout { k: inst.k, n: inst.nodes, m: inst.rules.len() as u32 }
    }

    /// Link between `RS(r_l)` and its switch.
    pub fn s_link(l: u32) -> String {
        format!("S{l}")
    }

    /// Link between the choice output `l` and `RD(r_l)`.
    pub fn c_link(l: u32) -> String {
        format!("C{l}")
    }

    /// Link between `RD(r_l)` and its switch.
    pub fn d_link(l: u32) -> String {
        format!("D{l}")
    }

    pub fn init() -> Ns {
        Ns::new("init").rename("x", X)
    }

    pub fn rs(l: u32) -> Ns {
        Ns::new(&format!("rs{l}")).rename("x", X).rename("y", &Self::s_link(l))
    }

    pub fn ms(l: u32) -> Ns {
        Ns::new(&format!("ms{l}")).rename("x", &Self::s_link(l)).rename("y", Y)
    }

    pub fn choice(&self) -> Ns {
        (1..=self.m).fold(Ns::new("choice").rename("x", Y), |ns, q| ns.rename(&choice_output(q), &Self::c_link(q)))
    }

    pub fn rd(l: u32) -> Ns {
        Ns::new(&format!("rd{l}")).rename("x", &Self::c_link(l)).rename("y", &Self::d_link(l))
    }

    pub fn md(l: u32) -> Ns {
        Ns::new(&format!("md{l}")).rename("x", &Self::d_link(l)).rename("y", X)
    }
}

/// Colour key that replaces the class of `Y^i_γ`; no Spoiler vertex carries it.
pub fn goal_class(i: u32) -> String {
    format!("goal/{i}")
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetSize {
    pub gadget: String,
    pub spoiler_vertices: usize,
    pub duplicator_vertices: usize,
    pub spoiler_edges: usize,
    pub duplicator_edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub gadgets: Vec<GadgetSize>,
    pub spoiler_vertices: usize,
    pub duplicator_vertices: usize,
    pub spoiler_edges: usize,
    pub duplicator_edges: usize,
    pub closed_form: Counts,
}

impl SizeReport {
    pub fn vertices(&self) -> usize {
        self.spoiler_vertices + self.duplicator_vertices
    }

    pub fn matches_closed_form(&self) -> bool {
        self.spoiler_vertices as u64 == self.closed_form.spoiler && self.duplicator_vertices as u64 == self.closed_form.duplicator
    }
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub colored: GamePair,
    pub plain: PlainPair,
    pub sizes: SizeReport,
}

type Emit<'a> = Box<dyn Fn(&mut PairBuilder) + 'a>;

fn gadgets(inst: &KaiInstance) -> Vec<(String, Emit<'_>)> {
    let (k, n) = (inst.k, inst.nodes);
    let lay = Layout::of(inst);
    let mut out: Vec<(String, Emit)> = vec![("init".into(), Box::new(move |b| emit_init(b, &Layout::init(), &inst.start, k, n, false)))];
    for (idx, r) in inst.rules.iter().enumerate() {
        let l = idx as u32 + 1;
        out.push((format!("rs{l}"), Box::new(move |b| emit_rule(b, &Layout::rs(l), RuleSide::Spoiler, r, k, n))));
        out.push((format!("ms{l}"), Box::new(move |b| emit_switch(b, &Layout::ms(l), k, n, false))));
    }
    out.push(("choice".into(), Box::new(move |b| emit_choice(b, &lay.choice(), k, n, lay.m, false))));
    for (idx, r) in inst.rules.iter().enumerate() {
        let l = idx as u32 + 1;
        out.push((format!("rd{l}"), Box::new(move |b| emit_rule(b, &Layout::rd(l), RuleSide::Duplicator, r, k, n))));
        out.push((format!("md{l}"), Box::new(move |b| emit_switch(b, &Layout::md(l), k, n, false))));
    }
    out
}

fn recolor_goal(b: &mut PairBuilder, inst: &KaiInstance) {
    for i in 1..=inst.k {
        b.recolor(&dv(Y, i, inst.goal), &goal_class(i));
    }
}

/// Builds the coloured pair with the gadgets added in the given order
/// (a permutation of the gadget list); gluing makes the order irrelevant.
pub fn assemble_in_order(inst: &KaiInstance, order: &[usize]) -> Result<GamePair> {
    inst.validate()?;
    check_start(&inst.start, inst.k, inst.nodes)?;
    let list = gadgets(inst);
    if order.len() != list.len() || (0..list.len()).any(|i| !order.contains(&i)) {
        return input(format!("order must be a permutation of 0..{}", list.len()));
    }
    let mut b = PairBuilder::new();
    for &i in order {
        (list[i].1)(&mut b);
    }
    recolor_goal(&mut b, inst);
    Ok(b.finalize())
}

pub fn gadget_count(inst: &KaiInstance) -> usize {
    2 + 4 * inst.rules.len()
}

pub fn assemble_reduction(inst: &KaiInstance) -> Result<ReductionOutput> {
    assemble_with(inst, Orientation::default())
}

pub fn assemble_with(inst: &KaiInstance, orientation: Orientation) -> Result<ReductionOutput> {
    let order: Vec<usize> = (0..gadget_count(inst)).collect();
    let colored = assemble_in_order(inst, &order)?;
    let sizes = sizes_of(inst, &colored);
    let plain = decolor(&colored, orientation)?;
    Ok(ReductionOutput { colored, plain, sizes })
}

/// Size report of the reduction for `k` pebbles, `n` nodes and `rules`.
/// Sizes do not depend on the start or the goal, so neither is asked for;
/// this also covers `n = k`, where no start leaves a node for the goal.
pub fn size_report(k: u32, n: u32, rules: &[Rule]) -> Result<SizeReport> {
    check_params(k, n)?;
    if n < k {
        return input(format!("{k} pebbles do not fit injectively on {n} nodes"));
    }
    for r in rules {
        check_rule(r, k, n)?;
    }
    let inst = KaiInstance { k, nodes: n, rules: rules.to_vec(), start: (1..=k).collect(), goal: n };
    let mut b = PairBuilder::new();
    for (_, emit) in gadgets(&inst) {
        emit(&mut b);
    }
    recolor_goal(&mut b, &inst);
    Ok(sizes_of(&inst, &b.finalize()))
}

fn sizes_of(inst: &KaiInstance, colored: &GamePair) -> SizeReport {
    let gadgets = gadgets(inst)
        .into_iter()
        .map(|(name, emit)| {
            let mut b = PairBuilder::new();
            emit(&mut b);
            let p = b.finalize();
            let (se, de) = p.edge_counts();
            GadgetSize {
                gadget: name,
                spoiler_vertices: p.spoiler_names.len(),
                duplicator_vertices: p.duplicator_names.len(),
                spoiler_edges: se,
                duplicator_edges: de,
            }
        })
        .collect();
    let (se, de) = colored.edge_counts();
    SizeReport {
        gadgets,
        spoiler_vertices: colored.spoiler_names.len(),
        duplicator_vertices: colored.duplicator_names.len(),
        spoiler_edges: se,
        duplicator_edges: de,
        closed_form: reduction_counts(inst.k, inst.nodes, inst.rules.len() as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke() -> KaiInstance {
        KaiInstance::from_triples(2, 3, &[[1, 2, 3]], vec![1, 2], 3).unwrap()
    }

    #[test]
    fn sizes_match_closed_form() {
        let out = assemble_reduction(&smoke()).unwrap();
        assert!(out.sizes.matches_closed_form(), "{:?}", out.sizes);
        assert_eq!(out.sizes.gadgets.len(), 2 + 4 * 2);
    }

    #[test]
    fn goal_vertices_leave_their_class() {
        let out = assemble_reduction(&smoke()).unwrap();
        let p = &out.colored;
        assert!(!p.class_of("Y/1").contains(&"Y/1/3"));
        assert!(p.class_of("Y/1").contains(&"Y/1/2"));
        assert!(p.color_names.contains(&goal_class(2)));
    }

    #[test]
    fn order_does_not_matter() {
        let inst = smoke();
        let n = gadget_count(&inst);
        let fwd: Vec<usize> = (0..n).collect();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(assemble_in_order(&inst, &fwd).unwrap(), assemble_in_order(&inst, &rev).unwrap());
    }

    #[test]
    fn no_rules() {
        let inst = KaiInstance::new(2, 3, vec![], vec![1, 2], 3).unwrap();
        let out = assemble_reduction(&inst).unwrap();
        assert!(out.sizes.matches_closed_form());
    }
}
