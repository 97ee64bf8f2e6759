//! Rule gadgets `RS(r)` (Spoiler picks the rule) and `RD(r)` (Duplicator picks it).

use super::{check_params, dv, sv, Gadget, GadgetKind, Ns, PairBuilder};
use crate::error::{input, Result};
use crate::kai::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSide {
    Spoiler,
    Duplicator,
}

pub(crate) fn emit_rule(b: &mut PairBuilder, ns: &Ns, side: RuleSide, r: &Rule, k: u32, n: u32) {
    let (x, y) = (ns.block("x"), ns.block("y"));
    b.vertex_block(&x, k, n);
    b.vertex_block(&y, k, n);
    for i in 1..=k {
        b.s_edge(&sv(&x, i), &sv(&y, i));
        let mut e = |s: u32, t: u32| b.d_edge(&dv(&x, i, s), &dv(&y, i, t));
        match side {
            RuleSide::Spoiler => {
                if i == r.c {
                    e(r.u, r.w);
                    (0..=n).filter(|&j| j != r.u).for_each(|j| e(j, 0));
                } else if i == r.d {
                    e(r.v, r.v);
                    (0..=n).filter(|&j| j != r.v).for_each(|j| e(j, 0));
                } else {
                    (0..=n).filter(|&j| j != r.w).for_each(|j| e(j, j));
                    e(r.w, 0);
                }
            }
            RuleSide::Duplicator => {
                if i == r.c {
                    e(0, 0);
                    e(r.u, r.w);
                } else if i == r.d {
                    e(0, 0);
                    e(r.v, r.v);
                } else {
                    (0..=n).filter(|&j| j != r.w).for_each(|j| e(j, j));
                }
            }
        }
    }
}

pub(crate) fn check_rule(r: &Rule, k: u32, n: u32) -> Result<()> {
    check_params(k, n)?;
    let nodes_ok = [r.u, r.v, r.w].iter().all(|&v| (1..=n).contains(&v));
    let pebbles_ok = [r.c, r.d].iter().all(|&c| (1..=k).contains(&c)) && r.c != r.d;
    if !nodes_ok || !pebbles_ok || r.u == r.v || r.v == r.w || r.u == r.w {
        return input(format!("rule {:?} does not fit k={k}, n={n}", <[u32; 5]>::from(*r)));
    }
    Ok(())
}

/// `(RS(r), RD(r))` as standalone gadgets with blocks `x` (input) and `y` (output).
pub fn build_rule_gadgets(r: &Rule, k: u32, n: u32) -> Result<(Gadget, Gadget)> {
    check_rule(r, k, n)?;
    let make = |side: RuleSide| {
        let mut b = PairBuilder::new();
        emit_rule(&mut b, &Ns::root(), side, r, k, n);
        Gadget { kind: GadgetKind::Rule { rule: *r, side }, pair: b.finalize(), input: "x".into(), outputs: vec!["y".into()], k, n }
    };
    Ok((make(RuleSide::Spoiler), make(RuleSide::Duplicator)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rules() {
        let bad = Rule { u: 1, v: 1, w: 2, c: 1, d: 2 };
        assert!(build_rule_gadgets(&bad, 2, 3).is_err());
        let far = Rule { u: 1, v: 2, w: 4, c: 1, d: 2 };
        assert!(build_rule_gadgets(&far, 2, 3).is_err());
    }

    #[test]
    fn edge_counts() {
        let r = Rule { u: 1, v: 2, w: 3, c: 1, d: 2 };
        let (rs, rd) = build_rule_gadgets(&r, 3, 3).unwrap();
        // c: 1 + n, d: 1 + n, other: n + 1.
        assert_eq!(rs.pair.edge_counts(), (3, 12));
        // c: 2, d: 2, other: n.
        assert_eq!(rd.pair.edge_counts(), (3, 7));
    }
}
