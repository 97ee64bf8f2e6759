//! The existential k-pebble game, decided as a greatest fixpoint over
//! partial homomorphisms.
//!
//! Maps with fewer than `k` pairs are stored explicitly. A map with exactly
//! `k` pairs is never stored: it belongs to the family iff it is legal, avoids
//! every forbidden target and all of its `(k-1)`-submaps are alive. Since such
//! maps need no extension, this is the same greatest fixpoint at a fraction of
//! the memory.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::board::Board;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::family::StrategyFamily;
use crate::structures::{Elem, PartialHom, Structure};

/// Largest supported pebble count.
pub const MAX_CAPACITY: usize = 6;

type Key = [u32; MAX_CAPACITY];
const PAD: u32 = u32::MAX;
const EMPTY_KEY: Key = [PAD; MAX_CAPACITY];

type Pairs = SmallVec<[(Elem, Elem); MAX_CAPACITY]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Spoiler,
    Duplicator,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Upper bound on explicitly stored configurations.
    pub budget: u64,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: 100_000_000, exec: Exec::default() }
    }
}

impl SolveOptions {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixpointStats {
    pub configs: u64,
    pub rounds: u32,
    pub deleted: u64,
}

struct Level {
    keys: Vec<Key>,
    index: FxHashMap<Key, u32>,
    alive: Vec<bool>,
}

impl Level {
    fn new() -> Self {
        Level { keys: Vec::new(), index: FxHashMap::default(), alive: Vec::new() }
    }

    fn push(&mut self, key: Key) {
        self.index.insert(key, self.keys.len() as u32);
        self.keys.push(key);
        self.alive.push(true);
    }

    fn is_alive(&self, key: &Key) -> bool {
        self.index.get(key).is_some_and(|&i| self.alive[i as usize])
    }
}

/// The greatest Duplicator family for a capacity and a set of forbidden
/// (Spoiler-winning) targets.
pub struct Fixpoint {
    cap: usize,
    na: u32,
    nb: u32,
    levels: Vec<Level>,
    targets: Vec<Vec<u32>>,
    pub stats: FixpointStats,
}

fn insert_code(key: &Key, len: usize, code: u32) -> Key {
    let mut out = EMPTY_KEY;
    let pos = key[..len].partition_point(|&c| c < code);
    out[..pos].copy_from_slice(&key[..pos]);
    out[pos] = code;
    out[pos + 1..=len].copy_from_slice(&key[pos..len]);
    out
}

fn remove_at(key: &Key, len: usize, i: usize) -> Key {
    let mut out = EMPTY_KEY;
    out[..i].copy_from_slice(&key[..i]);
    out[i..len - 1].copy_from_slice(&key[i + 1..len]);
    out
}

fn is_sorted_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

impl Fixpoint {
    fn code(&self, a: Elem, b: Elem) -> u32 {
        a * self.nb + b
    }

    fn decode(&self, key: &Key, len: usize) -> Pairs {
        key[..len].iter().map(|&c| (c / self.nb, c % self.nb)).collect()
    }

    fn forbidden(&self, codes: &[u32]) -> bool {
        self.targets.iter().any(|t| is_sorted_subset(t, codes))
    }

    fn key_of(&self, h: &PartialHom) -> Key {
        let mut key = EMPTY_KEY;
        for (slot, &(a, b)) in key.iter_mut().zip(h.pairs()) {
            *slot = self.code(a, b);
        }
        key
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    /// Whether `f + (z ↦ b)` is in the family, for an alive `f` with `len` pairs.
    fn ext_member(&self, board: &Board, key: &Key, len: usize, pairs: &[(Elem, Elem)], z: Elem, b: Elem) -> bool {
        let code = self.code(z, b);
        let nk = insert_code(key, len, code);
        if len + 1 < self.cap {
            return self.levels[len + 1].is_alive(&nk);
        }
        if !board.extend_ok(pairs, z, b) || self.forbidden(&nk[..self.cap]) {
            return false;
        }
        (0..self.cap).filter(|&i| nk[i] != code).all(|i| self.levels[self.cap - 1].is_alive(&remove_at(&nk, self.cap, i)))
    }

    /// Whether the alive map at `(level, idx)` lacks an extension to some element.
    fn violates(&self, board: &Board, level: usize, idx: u32) -> bool {
        let key = &self.levels[level].keys[idx as usize];
        let pairs = self.decode(key, level);
        (0..self.na).any(|z| {
            pairs.binary_search_by_key(&z, |p| p.0).is_err()
                && !board.candidates(z).iter().any(|&b| self.ext_member(board, key, level, &pairs, z, b))
        })
    }

    fn kill(&mut self, board: &Board, level: usize, idx: u32, dirty: &mut Dirty) {
        let mut stack = vec![(level, idx)];
        self.levels[level].alive[idx as usize] = false;
        self.stats.deleted += 1;
        while let Some((j, i)) = stack.pop() {
            let key = self.levels[j].keys[i as usize];
            let pairs = self.decode(&key, j);
            let free = |z: &Elem| pairs.binary_search_by_key(z, |p| p.0).is_err();
            if j + 1 < self.cap {
                for z in (0..self.na).filter(free) {
                    for &b in board.candidates(z) {
                        let nk = insert_code(&key, j, self.code(z, b));
                        let lvl = &mut self.levels[j + 1];
                        if let Some(&s) = lvl.index.get(&nk) {
                            if lvl.alive[s as usize] {
                                lvl.alive[s as usize] = false;
                                self.stats.deleted += 1;
                                stack.push((j + 1, s));
                            }
                        }
                    }
                }
            }
            if j >= 1 {
                for p in 0..j {
                    let sub = remove_at(&key, j, p);
                    if let Some(&s) = self.levels[j - 1].index.get(&sub) {
                        if self.levels[j - 1].alive[s as usize] {
                            dirty.mark(j - 1, s);
                        }
                    }
                }
            }
            if j + 1 == self.cap && j >= 1 {
                // Maps of the same size that shared an implicit top-level superset with this one.
                for p in 0..j {
                    let base = remove_at(&key, j, p);
                    for z in (0..self.na).filter(free) {
                        for &b in board.candidates(z) {
                            let sib = insert_code(&base, j - 1, self.code(z, b));
                            if let Some(&s) = self.levels[j].index.get(&sib) {
                                if self.levels[j].alive[s as usize] {
                                    dirty.mark(j, s);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Whether `h` belongs to the greatest family.
    pub fn contains(&self, board: &Board, h: &PartialHom) -> bool {
        let len = h.len();
        if len > self.cap || h.pairs().iter().any(|&(a, b)| a >= self.na || b >= self.nb) {
            return false;
        }
        let key = self.key_of(h);
        if len < self.cap {
            return self.levels[len].is_alive(&key);
        }
        board.is_legal(h)
            && !self.forbidden(&key[..len])
            && (0..len).all(|i| self.levels[len - 1].is_alive(&remove_at(&key, len, i)))
    }

    pub fn empty_survives(&self) -> bool {
        self.levels[0].is_alive(&EMPTY_KEY)
    }

    /// Alive explicit maps per size `0..k`.
    pub fn alive_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.alive.iter().filter(|&&a| a).count()).collect()
    }

    /// All surviving maps including the implicit top level.
    pub fn materialize(&self, board: &Board) -> StrategyFamily {
        let mut fam = StrategyFamily::new();
        for (j, lvl) in self.levels.iter().enumerate() {
            for (key, _) in lvl.keys.iter().zip(&lvl.alive).filter(|(_, &a)| a) {
                let pairs = self.decode(key, j);
                fam.insert(PartialHom::from_sorted(&pairs));
                if j + 1 == self.cap {
                    let start = pairs.last().map_or(0, |p| p.0 + 1);
                    for z in start..self.na {
                        for &b in board.candidates(z) {
                            if self.ext_member(board, key, j, &pairs, z, b) {
                                let mut ext = pairs.clone();
                                ext.push((z, b));
                                fam.insert(PartialHom::from_sorted(&ext));
                            }
                        }
                    }
                }
            }
        }
        fam
    }

    /// Builds the greatest family on `board` with `cap` pebbles whose maps
    /// contain none of `targets`.
    pub fn compute(board: &Board, cap: usize, targets: &[PartialHom], opts: SolveOptions) -> Result<Fixpoint> {
        if cap == 0 || cap > MAX_CAPACITY {
            return Err(Error::Precondition(format!("pebble count {cap} outside 1..={MAX_CAPACITY}")));
        }
        let (na, nb) = (board.na(), board.nb());
        if (na as u64) * (nb as u64) >= PAD as u64 {
            return Err(Error::Budget { what: "pair codes for the universes".into(), limit: PAD as u64 });
        }
        let mut fp = Fixpoint { cap, na, nb, levels: (0..cap).map(|_| Level::new()).collect(), targets: Vec::new(), stats: FixpointStats::default() };
        fp.targets = targets
            .iter()
            .filter(|t| t.len() <= cap)
            .map(|t| t.pairs().iter().map(|&(a, b)| a * nb + b).collect())
            .collect();
        if !fp.forbidden(&[]) {
            fp.levels[0].push(EMPTY_KEY);
        }
        let mut configs = fp.levels[0].keys.len() as u64;
        for j in 0..cap - 1 {
            let mut next = Level::new();
            for key in &fp.levels[j].keys {
                let pairs = fp.decode(key, j);
                let start = pairs.last().map_or(0, |p| p.0 + 1);
                for z in start..na {
                    for &b in board.candidates(z) {
                        if !board.extend_ok(&pairs, z, b) {
                            continue;
                        }
                        let nk = insert_code(key, j, fp.code(z, b));
                        if fp.forbidden(&nk[..=j]) {
                            continue;
                        }
                        next.push(nk);
                        configs += 1;
                        if configs > opts.budget {
                            return Err(Error::Budget { what: format!("game configurations with {cap} pebbles"), limit: opts.budget });
                        }
                    }
                }
            }
            fp.levels[j + 1] = next;
        }
        fp.stats.configs = configs;

        let mut dirty = Dirty::new(&fp.levels);
        for (j, lvl) in fp.levels.iter().enumerate().rev() {
            for i in 0..lvl.keys.len() as u32 {
                dirty.mark(j, i);
            }
        }
        loop {
            let batch: Vec<(usize, u32)> = dirty.take().into_iter().filter(|&(j, i)| fp.levels[j].alive[i as usize]).collect();
            if batch.is_empty() {
                break;
            }
            fp.stats.rounds += 1;
            let bad = opts.exec.filter(&batch, |&(j, i)| fp.violates(board, j, i));
            for (j, i) in bad {
                if fp.levels[j].alive[i as usize] {
                    fp.kill(board, j, i, &mut dirty);
                }
            }
        }
        Ok(fp)
    }
}

struct Dirty {
    flags: Vec<Vec<bool>>,
    list: Vec<(usize, u32)>,
}

impl Dirty {
    fn new(levels: &[Level]) -> Self {
        Dirty { flags: levels.iter().map(|l| vec![false; l.keys.len()]).collect(), list: Vec::new() }
    }

    fn mark(&mut self, j: usize, i: u32) {
        let f = &mut self.flags[j][i as usize];
        if !*f {
            *f = true;
            self.list.push((j, i));
        }
    }

    fn take(&mut self) -> Vec<(usize, u32)> {
        let list = std::mem::take(&mut self.list);
        for &(j, i) in &list {
            self.flags[j][i as usize] = false;
        }
        list
    }
}

pub struct SolveResult {
    pub winner: Winner,
    pub fixpoint: Fixpoint,
}

impl SolveResult {
    /// The greatest Duplicator family as an explicit set (empty when Spoiler wins).
    pub fn witness(&self, board: &Board) -> StrategyFamily {
        if self.winner == Winner::Spoiler {
            return StrategyFamily::new();
        }
        self.fixpoint.materialize(board)
    }
}

pub fn solve_on(board: &Board, k: usize, opts: SolveOptions) -> Result<SolveResult> {
    let fixpoint = Fixpoint::compute(board, k, &[], opts)?;
    let winner = if fixpoint.empty_survives() { Winner::Duplicator } else { Winner::Spoiler };
    Ok(SolveResult { winner, fixpoint })
}

/// Decides the existential `k`-pebble game on `(a, b)`.
pub fn solve_game(a: &Structure, b: &Structure, k: usize, opts: SolveOptions) -> Result<SolveResult> {
    let board = Board::new(a, b)?;
    solve_on(&board, k, opts)
}

/// Whether Spoiler can, from `start`, win outright or force a configuration
/// containing one of `targets`.
pub fn spoiler_reach(
    a: &Structure,
    b: &Structure,
    k: usize,
    start: &PartialHom,
    targets: &[PartialHom],
    opts: SolveOptions,
) -> Result<bool> {
    let board = Board::new(a, b)?;
    reach_on(&board, k, start, targets, opts)
}

pub fn reach_on(board: &Board, k: usize, start: &PartialHom, targets: &[PartialHom], opts: SolveOptions) -> Result<bool> {
    if start.len() > k {
        return Err(Error::Precondition(format!("start {start:?} has more than {k} pebbles")));
    }
    let fp = Fixpoint::compute(board, k, targets, opts)?;
    Ok(!fp.contains(board, start))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    Oversized { map: PartialHom },
    Illegal { map: PartialHom },
    NotClosed { map: PartialHom, missing: PartialHom },
    NoExtension { map: PartialHom, element: Elem, critical: bool },
    /// A critical member whose size is not `k - 1`.
    CriticalSize { map: PartialHom },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub is_winning: bool,
    pub is_critical: bool,
    pub violations: Vec<Violation>,
}

/// Checks the winning-strategy and critical-strategy conditions for `k` pebbles.
pub fn verify_strategy(a: &Structure, b: &Structure, k: usize, family: &StrategyFamily, exec: Exec) -> Result<VerifyReport> {
    let board = Board::new(a, b)?;
    Ok(verify_on(&board, k, family, exec))
}

pub fn verify_on(board: &Board, k: usize, family: &StrategyFamily, exec: Exec) -> VerifyReport {
    let members = family.sorted_members();
    let per_member = exec.map(&members, |h| {
        let mut v = Vec::new();
        if h.len() > k {
            v.push(Violation::Oversized { map: h.clone() });
        }
        if !board.is_legal(h) {
            v.push(Violation::Illegal { map: h.clone() });
        }
        for &(a, _) in h.pairs() {
            let g = h.without(a);
            if !family.contains(&g) {
                v.push(Violation::NotClosed { map: h.clone(), missing: g });
            }
        }
        if h.len() < k {
            let critical = family.is_critical(h);
            for z in 0..board.na() {
                if h.get(z).is_none() && !board.candidates(z).iter().any(|&b| family.contains(&h.with(z, b).expect("fresh"))) {
                    v.push(Violation::NoExtension { map: h.clone(), element: z, critical });
                }
            }
        }
        v
    });
    let mut violations: Vec<Violation> = per_member.into_iter().flatten().collect();
    if members.is_empty() {
        violations.insert(0, Violation::Empty);
    }
    for c in family.sorted_critical() {
        if c.len() + 1 != k {
            violations.push(Violation::CriticalSize { map: c });
        }
    }
    let is_winning = violations.is_empty();
    let is_critical = violations.iter().all(|v| matches!(v, Violation::NoExtension { critical: true, .. }));
    VerifyReport { is_winning, is_critical, violations }
}

/// All maps of `family` with at most `max` pairs, as a set.
pub fn truncate(family: &FxHashSet<PartialHom>, max: usize) -> FxHashSet<PartialHom> {
    family.iter().filter(|h| h.len() <= max).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Structure;

    fn winner(a: &Structure, b: &Structure, k: usize) -> Winner {
        solve_game(a, b, k, SolveOptions::default()).unwrap().winner
    }

    #[test]
    fn key_helpers() {
        let k = insert_code(&EMPTY_KEY, 0, 5);
        let k = insert_code(&k, 1, 2);
        let k = insert_code(&k, 2, 9);
        assert_eq!(&k[..3], &[2, 5, 9]);
        assert_eq!(&remove_at(&k, 3, 1)[..2], &[2, 9]);
        assert_eq!(remove_at(&k, 3, 1)[2], PAD);
    }

    #[test]
    fn clique_into_pentagon() {
        let k3 = Structure::complete(3);
        let c5 = Structure::cycle(5);
        assert_eq!(winner(&k3, &c5, 3), Winner::Spoiler);
        assert_eq!(winner(&k3, &c5, 2), Winner::Duplicator);
        assert_eq!(winner(&k3, &Structure::complete(4), 3), Winner::Duplicator);
    }

    #[test]
    fn total_homomorphism_gives_duplicator() {
        let a = Structure::cycle(6);
        let b = Structure::complete(2);
        for k in 1..=4 {
            assert_eq!(winner(&a, &b, k), Winner::Duplicator);
        }
    }

    #[test]
    fn witness_verifies_and_modes_agree() {
        let a = Structure::cycle(5);
        let b = Structure::complete(3);
        let board = Board::new(&a, &b).unwrap();
        let seq = solve_on(&board, 3, SolveOptions::default().with_exec(Exec::Sequential)).unwrap();
        let par = solve_on(&board, 3, SolveOptions::default().with_exec(Exec::Parallel)).unwrap();
        assert_eq!(seq.fixpoint.alive_counts(), par.fixpoint.alive_counts());
        let w = seq.witness(&board);
        assert!(verify_on(&board, 3, &w, Exec::Sequential).is_winning);
    }

    #[test]
    fn reach_basics() {
        let a = Structure::graph(2, [(0, 1)]);
        let b = Structure::graph(3, [(0, 1), (1, 2)]);
        let start = PartialHom::from_pairs([(0, 0)]).unwrap();
        assert!(reach_on(&Board::new(&a, &b).unwrap(), 2, &start, std::slice::from_ref(&start), SolveOptions::default()).unwrap());
        // Spoiler can force 1 to be pebbled by the image of 0's neighbour.
        let t = PartialHom::from_pairs([(1, 1)]).unwrap();
        assert!(spoiler_reach(&a, &b, 2, &start, std::slice::from_ref(&t), SolveOptions::default()).unwrap());
        let t2 = PartialHom::from_pairs([(1, 2)]).unwrap();
        assert!(!spoiler_reach(&a, &b, 2, &start, &[t2], SolveOptions::default()).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = Structure::cycle(6);
        let b = Structure::complete(4);
        let err = solve_game(&a, &b, 3, SolveOptions::default().with_budget(10)).err().unwrap();
        assert!(matches!(err, Error::Budget { limit: 10, .. }));
    }

    #[test]
    fn verify_examples() {
        let a = Structure::graph(2, [(0, 1)]);
        let b = Structure::graph(2, [(0, 1)]);
        let board = Board::new(&a, &b).unwrap();
        let empty = StrategyFamily::new();
        let r = verify_on(&board, 2, &empty, Exec::Sequential);
        assert!(!r.is_winning && r.violations == vec![Violation::Empty]);
        let h = PartialHom::from_pairs([(0, 0), (1, 1)]).unwrap();
        let cl = StrategyFamily::from_members(h.subsets());
        assert!(verify_on(&board, 2, &cl, Exec::Sequential).is_winning);
        let partial = StrategyFamily::from_members([PartialHom::new(), PartialHom::from_pairs([(0, 0)]).unwrap()]);
        let r = verify_on(&board, 2, &partial, Exec::Sequential);
        assert!(!r.is_winning);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NoExtension { element: 1, .. })));
    }

    #[test]
    fn critical_members_are_exempt() {
        let a = Structure::graph(3, [(0, 1), (1, 2)]);
        let b = Structure::graph(2, [(0, 1)]);
        let board = Board::new(&a, &b).unwrap();
        let h = PartialHom::from_pairs([(0, 0), (1, 1), (2, 0)]).unwrap();
        let mut fam = StrategyFamily::from_members(h.subsets_up_to(2));
        let r = verify_on(&board, 3, &fam, Exec::Sequential);
        assert!(!r.is_winning && !r.is_critical);
        for g in h.subsets_up_to(2).into_iter().filter(|g| g.len() == 2) {
            fam.mark_critical(&g).unwrap();
        }
        let r = verify_on(&board, 3, &fam, Exec::Sequential);
        assert!(!r.is_winning);
        assert!(r.is_critical, "{:?}", r.violations);
    }
}
