//! Partitions, tree-partitions and leveled tree-partitions of {1..n}, the strata they
//! index, and the face lattices of the Weyl-chamber closures.
//!
//! Subsets are bitmasks: element `i` (1-based) is bit `i - 1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub type Set = u32;

pub const TREE_LIMIT: usize = 9;
pub const TREE_LIMIT_UNRESTRICTED: usize = 7;
pub const LEVELED_LIMIT: usize = 7;

pub fn full(n: usize) -> Set {
    if n == 0 { 0 } else { u32::MAX >> (32 - n) }
}

pub fn elements(s: Set) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn set_of(elems: &[usize]) -> Set {
    elems.iter().fold(0, |s, &e| s | 1 << (e - 1))
}

fn size(s: Set) -> usize {
    s.count_ones() as usize
}

fn is_interval(s: Set) -> bool {
    s != 0 && {
        let t = s >> s.trailing_zeros();
        t & (t + 1) == 0
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, s: Set, n: usize) -> fmt::Result {
    let e = elements(s);
    let body: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    write!(f, "({})", body.join(if n > 9 { "," } else { "" }))
}

/// Canonical order of the sets of a nested family: non-singletons by depth (number
/// of strict supersets in the family) and element list, then the singletons.
fn canonical_sort(sets: &mut Vec<Set>) {
    sets.sort_unstable();
    sets.dedup();
    let all = sets.clone();
    let depth = |s: Set| all.iter().filter(|&&t| t != s && s & !t == 0).count();
    sets.sort_by_cached_key(|&s| (size(s) == 1, depth(s), elements(s)));
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 31 {
        return Err(Error::InvalidIndex(format!("ground set size {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub n: usize,
    /// Blocks sorted by their minimum element.
    pub blocks: Vec<Set>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Set>) -> Result<Partition> {
        check_n(n)?;
        let mut acc: Set = 0;
        for &b in &blocks {
            if b == 0 || acc & b != 0 {
                return Err(Error::InvalidIndex("blocks must be nonempty and disjoint".into()));
            }
            acc |= b;
        }
        if acc != full(n) {
            return Err(Error::InvalidIndex("blocks do not cover the ground set".into()));
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(Partition { n, blocks })
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<Partition> {
        if lists.iter().flatten().any(|&e| e == 0 || e > n) {
            return Err(Error::InvalidIndex("element out of range".into()));
        }
        let blocks: Vec<Set> = lists.iter().map(|l| set_of(l)).collect();
        if blocks.iter().zip(lists).any(|(b, l)| size(*b) != l.len()) {
            return Err(Error::InvalidIndex("repeated element".into()));
        }
        Partition::new(n, blocks)
    }

    pub fn trivial(n: usize) -> Partition {
        Partition { n, blocks: vec![full(n)] }
    }

    pub fn lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| elements(b)).collect()
    }

    pub fn is_segmental(&self) -> bool {
        self.blocks.iter().all(|&b| is_interval(b))
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|&b| coarser.blocks.iter().any(|&c| b & !c == 0))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.blocks {
            write_set(f, b, self.n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePartition {
    pub n: usize,
    /// Sets in canonical order; the full set comes first.
    pub sets: Vec<Set>,
}

impl TreePartition {
    pub fn new(n: usize, mut sets: Vec<Set>) -> Result<TreePartition> {
        check_n(n)?;
        let j = full(n);
        canonical_sort(&mut sets);
        if sets.first() != Some(&j) {
            return Err(Error::InvalidIndex("the full set must belong to a tree-partition".into()));
        }
        if sets.iter().any(|&s| s == 0 || s & !j != 0) {
            return Err(Error::InvalidIndex("sets must be nonempty subsets of the ground set".into()));
        }
        for (a, &x) in sets.iter().enumerate() {
            for &y in &sets[a + 1..] {
                if x & y != 0 && x & y != x && x & y != y {
                    return Err(Error::InvalidIndex("sets must be nested or disjoint".into()));
                }
            }
        }
        let t = TreePartition { n, sets };
        for &s in &t.sets {
            let ch = t.children(s);
            if !ch.is_empty() && ch.iter().fold(0, |a, c| a | c) != s {
                return Err(Error::InvalidIndex("a reducible set is not covered by its children".into()));
            }
        }
        Ok(t)
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<TreePartition> {
        if lists.iter().flatten().any(|&e| e == 0 || e > n) {
            return Err(Error::InvalidIndex("element out of range".into()));
        }
        TreePartition::new(n, lists.iter().map(|l| set_of(l)).collect())
    }

    pub fn trivial(n: usize) -> TreePartition {
        TreePartition { n, sets: vec![full(n)] }
    }

    pub fn lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| elements(s)).collect()
    }

    pub fn contains(&self, s: Set) -> bool {
        self.sets.contains(&s)
    }

    /// Minimal decomposition of `s`: the maximal members strictly inside it.
    pub fn children(&self, s: Set) -> Vec<Set> {
        let inside: Vec<Set> = self.sets.iter().copied().filter(|&k| k != s && k & !s == 0).collect();
        let mut ch: Vec<Set> = inside
            .iter()
            .copied()
            .filter(|&k| !inside.iter().any(|&l| l != k && k & !l == 0))
            .collect();
        ch.sort_by_key(|c| c.trailing_zeros());
        ch
    }

    pub fn is_irreducible(&self, s: Set) -> bool {
        self.children(s).is_empty()
    }

    /// h(K), the size of the minimal decomposition.
    pub fn h(&self, s: Set) -> usize {
        self.children(s).len()
    }

    pub fn is_segmental(&self) -> bool {
        self.sets.iter().all(|&s| is_interval(s))
    }

    pub fn is_perfect(&self) -> bool {
        self.sets.iter().all(|&s| !self.is_irreducible(s) || size(s) == 1)
    }

    /// Nested notation: `((1)(2)(3))((4)(56))`.
    pub fn nested(&self) -> String {
        struct Nested<'a>(&'a TreePartition, Set, bool);
        impl fmt::Display for Nested<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let ch = self.0.children(self.1);
                if ch.is_empty() {
                    return write_set(f, self.1, self.0.n);
                }
                if !self.2 {
                    write!(f, "(")?;
                }
                for c in ch {
                    write!(f, "{}", Nested(self.0, c, false))?;
                }
                if !self.2 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
        Nested(self, full(self.n), true).to_string()
    }

    fn sort_key(&self) -> Vec<Vec<usize>> {
        self.lists()
    }
}

impl fmt::Display for TreePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write_set(f, s, self.n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeveledTreePartition {
    pub n: usize,
    pub levels: Vec<Partition>,
}

impl LeveledTreePartition {
    pub fn new(levels: Vec<Partition>) -> Result<LeveledTreePartition> {
        let first = levels.first().ok_or(Error::InvalidIndex("no levels".into()))?;
        let n = first.n;
        if first.blocks != [full(n)] {
            return Err(Error::InvalidIndex("level 0 must be the one-block partition".into()));
        }
        for w in levels.windows(2) {
            if w[1].n != n || !w[1].refines(&w[0]) || w[1] == w[0] {
                return Err(Error::InvalidIndex("each level must strictly refine the previous".into()));
            }
        }
        Ok(LeveledTreePartition { n, levels })
    }

    pub fn trivial(n: usize) -> LeveledTreePartition {
        LeveledTreePartition { n, levels: vec![Partition::trivial(n)] }
    }

    pub fn tau(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_segmental(&self) -> bool {
        self.levels.iter().all(Partition::is_segmental)
    }

    fn sort_key(&self) -> Vec<Vec<Vec<usize>>> {
        self.levels.iter().map(Partition::lists).collect()
    }
}

impl fmt::Display for LeveledTreePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Set partitions of `s`; intervals only when `segmental`.
fn set_partitions(s: Set, segmental: bool) -> Vec<Vec<Set>> {
    if s == 0 {
        return vec![vec![]];
    }
    let low = s & s.wrapping_neg();
    let rest = s & !low;
    let mut out = Vec::new();
    if segmental {
        // blocks are initial runs of the remaining interval
        let mut block = low;
        loop {
            for mut tail in set_partitions(s & !block, true) {
                tail.insert(0, block);
                out.push(tail);
            }
            let next = (block << 1) & !block;
            if block == s || next & s == 0 {
                break;
            }
            block |= next;
        }
        return out;
    }
    // block containing the lowest element: low plus any subset of rest
    let mut sub = rest;
    loop {
        let block = low | sub;
        for mut tail in set_partitions(s & !block, false) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn families(s: Set, segmental: bool, perfect: bool, memo: &mut HashMap<Set, Vec<Vec<Set>>>) -> Vec<Vec<Set>> {
    if let Some(v) = memo.get(&s) {
        return v.clone();
    }
    let mut out = Vec::new();
    if !perfect || size(s) == 1 {
        out.push(vec![s]);
    }
    for parts in set_partitions(s, segmental) {
        if parts.len() < 2 {
            continue;
        }
        let mut acc: Vec<Vec<Set>> = vec![vec![s]];
        for &p in &parts {
            let sub = families(p, segmental, perfect, memo);
            let mut next = Vec::with_capacity(acc.len() * sub.len());
            for a in &acc {
                for b in &sub {
                    let mut c = a.clone();
                    c.extend(b);
                    next.push(c);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    memo.insert(s, out.clone());
    out
}

pub fn enumerate_tree_partitions(n: usize, segmental_only: bool, perfect_only: bool) -> Result<Vec<TreePartition>> {
    check_n(n)?;
    if n > TREE_LIMIT {
        return Err(Error::TooLarge { n, limit: TREE_LIMIT });
    }
    if !segmental_only && n > TREE_LIMIT_UNRESTRICTED {
        return Err(Error::TooLarge { n, limit: TREE_LIMIT_UNRESTRICTED });
    }
    let mut memo = HashMap::new();
    let mut out: Vec<TreePartition> = families(full(n), segmental_only, perfect_only, &mut memo)
        .into_iter()
        .map(|mut sets| {
            canonical_sort(&mut sets);
            TreePartition { n, sets }
        })
        .collect();
    out.sort_by_cached_key(TreePartition::sort_key);
    Ok(out)
}

/// Strict refinements of `p`.
fn refinements(p: &Partition, segmental: bool) -> Vec<Partition> {
    let mut acc: Vec<Vec<Set>> = vec![vec![]];
    for &b in &p.blocks {
        let subs = set_partitions(b, segmental);
        let mut next = Vec::with_capacity(acc.len() * subs.len());
        for a in &acc {
            for s in &subs {
                let mut c = a.clone();
                c.extend(s);
                next.push(c);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter(|blocks| blocks.len() > p.blocks.len())
        .map(|mut blocks| {
            blocks.sort_by_key(|b| b.trailing_zeros());
            Partition { n: p.n, blocks }
        })
        .collect()
}

pub fn enumerate_leveled(n: usize, segmental_only: bool) -> Result<Vec<LeveledTreePartition>> {
    check_n(n)?;
    if n > LEVELED_LIMIT {
        return Err(Error::TooLarge { n, limit: LEVELED_LIMIT });
    }
    let mut memo: HashMap<Partition, Vec<Partition>> = HashMap::new();
    let mut out = Vec::new();
    let mut chain = vec![Partition::trivial(n)];
    fn walk(
        chain: &mut Vec<Partition>,
        seg: bool,
        memo: &mut HashMap<Partition, Vec<Partition>>,
        out: &mut Vec<LeveledTreePartition>,
    ) {
        let n = chain[0].n;
        out.push(LeveledTreePartition { n, levels: chain.clone() });
        let last = chain.last().unwrap().clone();
        let refs = memo.entry(last.clone()).or_insert_with(|| refinements(&last, seg)).clone();
        for r in refs {
            chain.push(r);
            walk(chain, seg, memo, out);
            chain.pop();
        }
    }
    walk(&mut chain, segmental_only, &mut memo, &mut out);
    out.sort_by_cached_key(LeveledTreePartition::sort_key);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StratumKind {
    Pass,
    Karp,
    AssFace,
    WeylPass,
    WeylKarp,
}

impl StratumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StratumKind::Pass => "Pass",
            StratumKind::Karp => "Karp",
            StratumKind::AssFace => "AssFace",
            StratumKind::WeylPass => "WeylPass",
            StratumKind::WeylKarp => "WeylKarp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StratumIndex {
    Tree(TreePartition),
    Leveled(LeveledTreePartition),
}

impl fmt::Display for StratumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumIndex::Tree(t) => write!(f, "{t}"),
            StratumIndex::Leveled(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub index: StratumIndex,
    pub kind: StratumKind,
    pub dim: usize,
    pub components: u64,
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn pass_dim(a: &TreePartition) -> usize {
    a.sets
        .iter()
        .map(|&k| match a.h(k) {
            0 => size(k) - 1,
            h => h - 2,
        })
        .sum()
}

pub fn stratum_pass(a: &TreePartition) -> Stratum {
    let components = a.sets.iter().map(|&k| a.h(k)).filter(|&h| h > 0).map(factorial).product();
    Stratum { index: StratumIndex::Tree(a.clone()), kind: StratumKind::Pass, dim: pass_dim(a), components }
}

pub fn stratum_karp(a: &LeveledTreePartition) -> Stratum {
    let mut components = 1u64;
    for w in a.levels.windows(2) {
        for &k in &w[0].blocks {
            let staff = w[1].blocks.iter().filter(|&&b| b & !k == 0).count();
            components *= factorial(staff);
        }
    }
    Stratum {
        index: StratumIndex::Leveled(a.clone()),
        kind: StratumKind::Karp,
        dim: a.n - 1 - a.tau(),
        components,
    }
}

/// Whether the stratum of `b` lies in the closure of the stratum of `a`.
pub fn pass_closure_leq(a: &TreePartition, b: &TreePartition) -> bool {
    a.n == b.n && a.sets.iter().all(|s| b.contains(*s))
}

pub fn karp_closure_leq(a: &LeveledTreePartition, b: &LeveledTreePartition) -> bool {
    a.n == b.n && a.levels.iter().all(|p| b.levels.contains(p))
}

/// The tree-partition formed by all blocks of all levels.
pub fn karp_to_pass(a: &LeveledTreePartition) -> TreePartition {
    let mut sets: Vec<Set> = a.levels.iter().flat_map(|p| p.blocks.iter().copied()).collect();
    canonical_sort(&mut sets);
    TreePartition { n: a.n, sets }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylKind {
    Pass,
    Karp,
    Ass,
}

impl WeylKind {
    pub fn parse(s: &str) -> Option<WeylKind> {
        match s.to_ascii_lowercase().as_str() {
            "pass" => Some(WeylKind::Pass),
            "karp" => Some(WeylKind::Karp),
            "ass" => Some(WeylKind::Ass),
            _ => None,
        }
    }
}

/// Closure poset with its Hasse covers; `covers` holds `(upper, lower)` pairs.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub nodes: Vec<Stratum>,
    pub covers: Vec<(usize, usize)>,
    pub top: usize,
    pub bottoms: Vec<usize>,
}

impl FaceLattice {
    /// Builds the Hasse diagram of `leq` (x ≤ y meaning y lies in the closure of x).
    fn from_order(nodes: Vec<Stratum>, leq: impl Fn(&Stratum, &Stratum) -> bool) -> FaceLattice {
        let m = nodes.len();
        let words = m.div_ceil(64);
        let mut up = vec![vec![0u64; words]; m];
        let mut below: Vec<Vec<usize>> = vec![vec![]; m];
        for a in 0..m {
            for b in 0..m {
                if a != b && leq(&nodes[a], &nodes[b]) {
                    up[a][b / 64] |= 1 << (b % 64);
                    below[b].push(a);
                }
            }
        }
        let mut covers = Vec::new();
        for b in 0..m {
            for &a in &below[b] {
                // a covers-down to b unless some c sits strictly between
                let between = below[b].iter().any(|&c| c != a && up[a][c / 64] >> (c % 64) & 1 == 1);
                if !between {
                    covers.push((a, b));
                }
            }
        }
        covers.sort();
        let top = (0..m).find(|&a| below[a].is_empty()).unwrap_or(0);
        let bottoms = (0..m).filter(|&a| up[a].iter().all(|&w| w == 0)).collect();
        FaceLattice { nodes, covers, top, bottoms }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        f_vector(self)
    }

    /// Σ_d (-1)^d f_d.
    pub fn alternating_sum(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph faces {\n  rankdir=TB;\n");
        for (i, node) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"dim={}; index={}\"];\n", node.dim, node.index));
        }
        for (a, b) in &self.covers {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn f_vector(l: &FaceLattice) -> Vec<usize> {
    let top = l.nodes.iter().map(|s| s.dim).max().unwrap_or(0);
    let mut f = vec![0; top + 1];
    for s in &l.nodes {
        f[s.dim] += 1;
    }
    f
}

fn weyl_stratum(mut s: Stratum, kind: StratumKind) -> Stratum {
    s.kind = kind;
    s.components = 1;
    s
}

fn tree_of(s: &Stratum) -> &TreePartition {
    match &s.index {
        StratumIndex::Tree(t) => t,
        StratumIndex::Leveled(_) => unreachable!("tree index expected"),
    }
}

fn leveled_of(s: &Stratum) -> &LeveledTreePartition {
    match &s.index {
        StratumIndex::Leveled(l) => l,
        StratumIndex::Tree(_) => unreachable!("leveled index expected"),
    }
}

/// Face lattice of the closure of the positive Weyl chamber (or of the associahedron).
/// The Pass lattice is the image of the Karp lattice under [`karp_to_pass`].
pub fn weyl_face_lattice(n: usize, kind: WeylKind) -> Result<FaceLattice> {
    check_n(n)?;
    if n > LEVELED_LIMIT {
        return Err(Error::TooLarge { n, limit: LEVELED_LIMIT });
    }
    match kind {
        WeylKind::Karp => {
            let nodes = enumerate_leveled(n, true)?
                .iter()
                .map(|a| weyl_stratum(stratum_karp(a), StratumKind::WeylKarp))
                .collect();
            Ok(FaceLattice::from_order(nodes, |a, b| karp_closure_leq(leveled_of(a), leveled_of(b))))
        }
        WeylKind::Pass => {
            let image: BTreeSet<Vec<Vec<usize>>> =
                enumerate_leveled(n, true)?.iter().map(|a| karp_to_pass(a).sort_key()).collect();
            let nodes = image
                .iter()
                .map(|lists| {
                    let t = TreePartition::from_lists(n, lists).expect("image is a tree-partition");
                    weyl_stratum(stratum_pass(&t), StratumKind::WeylPass)
                })
                .collect();
            Ok(FaceLattice::from_order(nodes, |a, b| pass_closure_leq(tree_of(a), tree_of(b))))
        }
        WeylKind::Ass => {
            let nodes = enumerate_tree_partitions(n, true, true)?
                .iter()
                .map(|t| weyl_stratum(stratum_pass(t), StratumKind::AssFace))
                .collect();
            Ok(FaceLattice::from_order(nodes, |a, b| pass_closure_leq(tree_of(a), tree_of(b))))
        }
    }
}
