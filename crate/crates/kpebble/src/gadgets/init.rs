//! The initialization gadget `INIT^s`: two switches feeding the start position into `x`.

use super::switch::emit_switch;
use super::{check_params, dv, sv, Gadget, GadgetKind, Ns, PairBuilder};
use crate::error::{input, Result};

pub(crate) fn check_start(s: &[u32], k: u32, n: u32) -> Result<()> {
    check_params(k, n)?;
    if s.len() != k as usize || s.iter().any(|&v| v < 1 || v > n) {
        return input(format!("start {s:?} must place {k} pebbles on nodes 1..={n}"));
    }
    let mut seen = s.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != s.len() {
        return input(format!("start {s:?} is not injective"));
    }
    Ok(())
}

/// Namespaces of the two switches, `m1: a -> c` and `m2: b -> d`.
pub(crate) fn init_switches(ns: &Ns) -> (Ns, Ns) {
    let m1 = ns.nested("m1").rename("x", &ns.block("a")).rename("y", &ns.block("c"));
    let m2 = ns.nested("m2").rename("x", &ns.block("b")).rename("y", &ns.block("d"));
    (m1, m2)
}

/// Local blocks: `top` (the lone vertex y with answers y_1, y_2), `a`, `b`
/// (switch inputs), `c`, `d` (switch outputs), `x` (output), and the two
/// switches `m1: a -> c`, `m2: b -> d`.
pub(crate) fn emit_init(b: &mut PairBuilder, ns: &Ns, s: &[u32], k: u32, n: u32, literal: bool) {
    let [top, a, bb, c, d, x] = ["top", "a", "b", "c", "d", "x"].map(|l| ns.block(l));
    let (m1, m2) = init_switches(ns);
    emit_switch(b, &m1, k, n, literal);
    emit_switch(b, &m2, k, n, literal);
    b.vertex_block(&x, k, n);

    let y = sv(&top, 1);
    b.s(&y);
    let (y1, y2) = (dv(&top, 1, 1), dv(&top, 1, 2));
    b.d(&y1, &y);
    b.d(&y2, &y);
    for i in 1..=k {
        b.s_edge(&y, &sv(&a, i));
        b.s_edge(&y, &sv(&bb, i));
        b.s_edge(&sv(&c, i), &sv(&x, i));
        b.s_edge(&sv(&d, i), &sv(&x, i));
        let si = s[i as usize - 1];
        b.d_edge(&y1, &dv(&bb, i, 0));
        b.d_edge(&y2, &dv(&a, i, 0));
        for yy in [&y1, &y2] {
            b.d_edge(yy, &dv(&a, i, si));
            b.d_edge(yy, &dv(&bb, i, si));
        }
        for out in [&c, &d] {
            for l in 0..=n {
                b.d_edge(&dv(out, i, 0), &dv(&x, i, l));
            }
            b.d_edge(&dv(out, i, si), &dv(&x, i, si));
        }
    }
}

pub fn build_init(s: &[u32], k: u32, n: u32) -> Result<Gadget> {
    check_start(s, k, n)?;
    let mut b = PairBuilder::new();
    emit_init(&mut b, &Ns::root(), s, k, n, false);
    Ok(Gadget { kind: GadgetKind::Init { start: s.to_vec() }, pair: b.finalize(), input: "top".into(), outputs: vec!["x".into()], k, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let g = build_init(&[2, 4, 3], 3, 4).unwrap();
        assert_eq!(g.pair.spoiler_names.len(), 1 + 9 * 3);
        assert_eq!(g.pair.class_of("top/1"), vec!["top/1/1", "top/1/2"]);
        assert_eq!(g.pair.class_of("a/1").len(), 5);
        assert!(g.pair.s_id("m1.a/1").is_some());
        assert!(build_init(&[1, 1], 2, 3).is_err());
        assert!(build_init(&[1, 4], 2, 3).is_err());
    }
}
