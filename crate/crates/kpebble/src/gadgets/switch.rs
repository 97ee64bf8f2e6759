//! The multiple input one-way switch `M^{k,n}`.

use super::{check_params, dv, sv, Gadget, GadgetKind, Ns, PairBuilder};
use crate::error::Result;

pub(crate) fn a_plus(s: u32, l: u32) -> String {
    format!("{s}.{l}")
}

pub(crate) fn b_zero(l: u32) -> String {
    format!("0.{l}")
}

/// Adds a switch whose local blocks are `x`, `a`, `b`, `y`.
///
/// With `literal` set, the edges between the `a_0` vertices of distinct
/// blocks are left out, exactly as the edge list is printed. Without them
/// the output strategy that maps every `a^i` to `a^i_0` is not a
/// homomorphism on the `a`-clique, so the default build adds them.
pub(crate) fn emit_switch(b: &mut PairBuilder, ns: &Ns, k: u32, n: u32, literal: bool) {
    let (x, a, bb, y) = (ns.block("x"), ns.block("a"), ns.block("b"), ns.block("y"));
    b.vertex_block(&x, k, n);
    b.vertex_block(&y, k, n);
    for i in 1..=k {
        let (ai, bi) = (sv(&a, i), sv(&bb, i));
        b.s(&ai);
        b.s(&bi);
        b.d(&dv(&a, i, 0), &ai);
        for s in 1..=n {
            for l in 1..=k {
                b.d(&dv(&a, i, a_plus(s, l)), &ai);
            }
            b.d(&dv(&bb, i, s), &bi);
        }
        for l in 1..=k {
            b.d(&dv(&bb, i, b_zero(l)), &bi);
        }
    }
    for i in 1..=k {
        b.s_edge(&sv(&x, i), &sv(&a, i));
        b.s_edge(&sv(&bb, i), &sv(&y, i));
        for j in 1..=k {
            b.s_edge(&sv(&a, i), &sv(&bb, j));
            if i != j {
                b.s_edge(&sv(&a, i), &sv(&a, j));
                b.s_edge(&sv(&bb, i), &sv(&bb, j));
            }
        }
    }

    let a_all = |i: u32| {
        let mut v = vec![dv(&a, i, 0)];
        for s in 1..=n {
            for l in 1..=k {
                v.push(dv(&a, i, a_plus(s, l)));
            }
        }
        v
    };
    let b_all = |i: u32| {
        let mut v: Vec<String> = (1..=n).map(|s| dv(&bb, i, s)).collect();
        v.extend((1..=k).map(|l| dv(&bb, i, b_zero(l))));
        v
    };

    for i in 1..=k {
        let a0 = dv(&a, i, 0);
        // (E1), (E3)
        for v in a_all(i) {
            b.d_edge(&dv(&x, i, 0), &v);
        }
        for v in b_all(i) {
            b.d_edge(&a0, &v);
        }
        for s in 1..=n {
            for l in 1..=k {
                let asl = dv(&a, i, a_plus(s, l));
                // (E2), (E4), (E5)
                b.d_edge(&dv(&x, i, s), &asl);
                b.d_edge(&asl, &dv(&bb, i, s));
                for p in (1..=k).filter(|&p| p != l) {
                    b.d_edge(&asl, &dv(&bb, i, b_zero(p)));
                }
            }
            // (E6)
            b.d_edge(&dv(&bb, i, s), &dv(&y, i, s));
        }
        // (E7)
        for l in 1..=k {
            for t in 0..=n {
                b.d_edge(&dv(&bb, i, b_zero(l)), &dv(&y, i, t));
            }
        }
    }

    for i in 1..=k {
        for j in (1..=k).filter(|&j| j != i) {
            let a0 = dv(&a, i, 0);
            for s in 1..=n {
                for l in 1..=k {
                    let asl = dv(&a, i, a_plus(s, l));
                    // (E8)
                    for q in 1..=n {
                        for p in (1..=k).filter(|&p| p != l) {
                            b.d_edge(&asl, &dv(&a, j, a_plus(q, p)));
                        }
                    }
                    // (E9)
                    b.d_edge(&a0, &dv(&a, j, a_plus(s, l)));
                    // (E14), (E15)
                    for q in 1..=n {
                        b.d_edge(&asl, &dv(&bb, j, q));
                    }
                    for p in (1..=k).filter(|&p| p != l) {
                        b.d_edge(&asl, &dv(&bb, j, b_zero(p)));
                    }
                }
                // (E13)
                b.d_edge(&a0, &dv(&bb, j, s));
                // (E11)
                for q in 1..=n {
                    b.d_edge(&dv(&bb, i, s), &dv(&bb, j, q));
                }
            }
            for l in 1..=k {
                // (E10), (E12)
                for p in 1..=k {
                    b.d_edge(&dv(&bb, i, b_zero(l)), &dv(&bb, j, b_zero(p)));
                }
                b.d_edge(&a0, &dv(&bb, j, b_zero(l)));
            }
            if !literal {
                b.d_edge(&a0, &dv(&a, j, 0));
            }
        }
    }
}

pub fn build_switch(k: u32, n: u32) -> Result<Gadget> {
    switch_gadget(k, n, false)
}

/// The switch with the inter-block edge list taken literally (no `a_0`–`a_0` edges).
pub fn build_switch_as_printed(k: u32, n: u32) -> Result<Gadget> {
    switch_gadget(k, n, true)
}

fn switch_gadget(k: u32, n: u32, literal: bool) -> Result<Gadget> {
    check_params(k, n)?;
    let mut b = PairBuilder::new();
    emit_switch(&mut b, &Ns::root(), k, n, literal);
    Ok(Gadget { kind: GadgetKind::Switch, pair: b.finalize(), input: "x".into(), outputs: vec!["y".into()], k, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let g = build_switch(2, 2).unwrap();
        assert_eq!(g.pair.spoiler_names.len(), 8);
        assert_eq!(g.pair.duplicator_names.len(), 30);
        assert_eq!(g.pair.class_of("a/1").len(), 5);
        assert_eq!(g.pair.class_of("b/2").len(), 4);
        assert_eq!(build_switch(2, 1).unwrap().pair.duplicator_names.len(), 20);
        assert!(build_switch(1, 2).is_err());
    }

    #[test]
    fn no_edge_between_equal_indices() {
        let g = build_switch(2, 2).unwrap();
        let p = &g.pair;
        let e = |u: &str, v: &str| p.duplicator.has_tuple("E", &[p.d_id(u).unwrap(), p.d_id(v).unwrap()]);
        assert!(!e("a/1/1.1", "b/1/0.1"));
        assert!(e("a/1/1.1", "b/1/0.2"));
        assert!(!e("a/1/1.1", "b/2/0.1"));
        assert!(!e("a/1/1.1", "a/2/2.1"));
        assert!(e("a/1/0", "a/2/0"));
        let lit = build_switch_as_printed(2, 2).unwrap();
        assert_eq!(lit.pair.edge_counts().1 + 1, p.edge_counts().1);
    }
}
