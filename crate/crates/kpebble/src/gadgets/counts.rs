//! Vertex counts computed from the set definitions, independently of the builders.

use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub spoiler: u64,
    pub duplicator: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.spoiler + self.duplicator
    }
}

fn block(k: u64, n: u64) -> u64 {
    k * (n + 1)
}

pub fn switch_counts(k: u32, n: u32) -> Counts {
    let (k, n) = (k as u64, n as u64);
    // X, Y, A = A_+ ∪ {a_0}, B = B_+ ∪ {b_{0,l}}
    let per_block = (n + 1) + (n * k + 1) + (n + k) + (n + 1);
    Counts { spoiler: 4 * k, duplicator: k * per_block }
}

pub fn rule_counts(k: u32, n: u32) -> Counts {
    let (k, n) = (k as u64, n as u64);
    Counts { spoiler: 2 * k, duplicator: 2 * block(k, n) }
}

pub fn init_counts(k: u32, n: u32) -> Counts {
    let m = switch_counts(k, n);
    Counts { spoiler: 1 + 2 * m.spoiler + k as u64, duplicator: 2 + 2 * m.duplicator + block(k as u64, n as u64) }
}

pub fn choice_counts(k: u32, n: u32, m: u32) -> Counts {
    let (k, n, m) = (k as u64, n as u64, m as u64);
    Counts { spoiler: k * (m + 2), duplicator: block(k, n) + k * (n * m + 1) + k * m * (n + 1) }
}

/// The glued reduction for `m` rules.
pub fn reduction_counts(k: u32, n: u32, m: u32) -> Counts {
    let (k6, n6, m6) = (k as u64, n as u64, m as u64);
    let sw = switch_counts(k, n);
    let spoiler = 1 + 11 * k6 + 7 * k6 * m6;
    let duplicator = 2 * block(k6, n6)
        + 2
        + 2 * sw.duplicator
        + m6 * (2 * block(k6, n6) + 2 * k6 * (n6 * k6 + n6 + k6 + 1))
        + k6 * (n6 * m6 + 1)
        + k6 * m6 * (n6 + 1);
    Counts { spoiler, duplicator }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        for k in 2..5 {
            for n in 1..6 {
                let (k6, n6) = (k as u64, n as u64);
                assert_eq!(switch_counts(k, n).duplicator, k6 * (n6 * k6 + 3 * n6 + k6 + 3));
            }
            assert_eq!(switch_counts(k, 2).duplicator, k as u64 * (3 * k as u64 + 9));
        }
        // k(2k+11) agrees with k(3k+9) only at k = 2.
        assert_eq!(switch_counts(2, 2).duplicator, 2 * (2 * 2 + 11));
        assert_ne!(switch_counts(3, 2).duplicator, 3 * (2 * 3 + 11));
        assert_eq!(choice_counts(2, 2, 2).duplicator, 28);
        assert_eq!(init_counts(3, 4).spoiler, 28);
    }
}
