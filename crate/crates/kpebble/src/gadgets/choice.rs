//! The choice gadget `C^m`: Duplicator picks which output block receives the position.

use super::{check_params, dv, sv, Gadget, GadgetKind, Ns, PairBuilder};
use crate::error::{input, Result};

pub(crate) fn a_choice(l: u32, q: u32) -> String {
    format!("{l}.{q}")
}

/// Local name of output block `q` (1-based).
pub fn choice_output(q: u32) -> String {
    format!("y{q}")
}

/// Local blocks `x`, `a`, `y1..ym`. As for the switch, `a_0` vertices are
/// joined to every vertex of the other `a`-blocks unless `literal` is set.
pub(crate) fn emit_choice(b: &mut PairBuilder, ns: &Ns, k: u32, n: u32, m: u32, literal: bool) {
    let (x, a) = (ns.block("x"), ns.block("a"));
    let ys: Vec<String> = (1..=m).map(|q| ns.block(&choice_output(q))).collect();
    b.vertex_block(&x, k, n);
    for y in &ys {
        b.vertex_block(y, k, n);
    }
    for i in 1..=k {
        let ai = sv(&a, i);
        b.s(&ai);
        b.d(&dv(&a, i, 0), &ai);
        for l in 1..=n {
            for q in 1..=m {
                b.d(&dv(&a, i, a_choice(l, q)), &ai);
            }
        }
    }
    for i in 1..=k {
        let ai = sv(&a, i);
        b.s_edge(&sv(&x, i), &ai);
        for y in &ys {
            b.s_edge(&ai, &sv(y, i));
        }
        for j in (1..=k).filter(|&j| j != i) {
            b.s_edge(&ai, &sv(&a, j));
        }

        let a0 = dv(&a, i, 0);
        b.d_edge(&dv(&x, i, 0), &a0);
        for y in &ys {
            b.d_edge(&a0, &dv(y, i, 0));
        }
        for l in 1..=n {
            for q in 1..=m {
                let alq = dv(&a, i, a_choice(l, q));
                b.d_edge(&dv(&x, i, l), &alq);
                b.d_edge(&alq, &dv(&ys[q as usize - 1], i, l));
                for q2 in (1..=m).filter(|&q2| q2 != q) {
                    b.d_edge(&alq, &dv(&ys[q2 as usize - 1], i, 0));
                }
                for j in (1..=k).filter(|&j| j != i) {
                    for l2 in 1..=n {
                        b.d_edge(&alq, &dv(&a, j, a_choice(l2, q)));
                    }
                    if !literal {
                        b.d_edge(&dv(&a, j, 0), &alq);
                    }
                }
            }
        }
        if !literal {
            for j in (1..=k).filter(|&j| j != i) {
                b.d_edge(&a0, &dv(&a, j, 0));
            }
        }
    }
}

pub fn build_choice(k: u32, n: u32, m: u32) -> Result<Gadget> {
    check_params(k, n)?;
    if m < 1 {
        return input("the choice gadget needs at least one output");
    }
    let mut b = PairBuilder::new();
    emit_choice(&mut b, &Ns::root(), k, n, m, false);
    Ok(Gadget { kind: GadgetKind::Choice { m }, pair: b.finalize(), input: "x".into(), outputs: (1..=m).map(choice_output).collect(), k, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let g = build_choice(2, 2, 2).unwrap();
        assert_eq!(g.pair.duplicator_names.len(), 28);
        assert_eq!(g.pair.spoiler_names.len(), 2 * 4);
        assert_eq!(g.pair.class_of("a/2").len(), 5);
        assert!(build_choice(2, 2, 0).is_err());
    }
}
