//! Points and rays of the Ξ spaces, and the exact limit algorithms in Pass_n and Karp_n
//! for polynomially growing sequences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::growth::{fmt_rational, GrowthVector, Poly};
use crate::polytope::{self, LeveledTreePartition, Partition, Set, TreePartition};

/// Element of Ξ(K) for a labeled set K; canonical representative has minimum 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPoint {
    pub labels: Vec<usize>,
    pub coords: Vec<BigRational>,
}

/// Point at infinity of Ξ(K): integer direction with minimum 0 and gcd 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiRay {
    pub labels: Vec<usize>,
    pub dir: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XiLimit {
    Point(XiPoint),
    Ray(XiRay),
}

fn min_of(v: &[BigRational]) -> BigRational {
    v.iter().min().cloned().unwrap_or_else(BigRational::zero)
}

impl XiPoint {
    pub fn canonical(labels: Vec<usize>, vals: Vec<BigRational>) -> XiPoint {
        let m = min_of(&vals);
        XiPoint { labels, coords: vals.into_iter().map(|x| x - &m).collect() }
    }
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }
}

/// Clears denominators and divides out the gcd of the entries.
fn integer_direction(vals: &[BigRational]) -> Vec<BigInt> {
    let l = vals.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = vals.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

impl XiRay {
    pub fn canonical(labels: Vec<usize>, vals: Vec<BigRational>) -> XiRay {
        let m = min_of(&vals);
        let shifted: Vec<BigRational> = vals.into_iter().map(|x| x - &m).collect();
        XiRay { labels, dir: integer_direction(&shifted) }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn fmt_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for XiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        fmt_list(f, &v)
    }
}

impl fmt::Display for XiRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_list(f, &self.dir)
    }
}

impl fmt::Display for XiLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiLimit::Point(p) => write!(f, "point {p}"),
            XiLimit::Ray(r) => write!(f, "ray {r}"),
        }
    }
}

/// Maximal degree of the pairwise differences, with the degree-D coefficients of
/// `v_i - v_0`; `None` when every difference is constant.
fn leading_part(coords: &[&Poly]) -> Option<(usize, Vec<BigRational>)> {
    let diffs: Vec<Poly> = coords.iter().map(|p| *p - coords[0]).collect();
    let d = diffs.iter().filter_map(Poly::degree).max()?;
    if d == 0 {
        return None;
    }
    Some((d, diffs.iter().map(|p| p.coeff(d)).collect()))
}

fn constants(coords: &[&Poly]) -> Vec<BigRational> {
    coords.iter().map(|p| (*p - coords[0]).coeff(0)).collect()
}

fn xi_limit_labeled(labels: &[usize], coords: &[&Poly]) -> XiLimit {
    match leading_part(coords) {
        None => XiLimit::Point(XiPoint::canonical(labels.to_vec(), constants(coords))),
        Some((_, c)) => XiLimit::Ray(XiRay::canonical(labels.to_vec(), c)),
    }
}

/// Limit of the sequence in the compactified Ξ(I).
pub fn xi_limit(v: &GrowthVector) -> XiLimit {
    let labels: Vec<usize> = (1..=v.n()).collect();
    let coords: Vec<&Poly> = v.coords.iter().collect();
    xi_limit_labeled(&labels, &coords)
}

/// Groups labels by equal ray coordinate, in order of first appearance.
fn split_by_value(labels: &[usize], dir: &[BigInt]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(BigInt, Vec<usize>)> = Vec::new();
    for (l, d) in labels.iter().zip(dir) {
        match groups.iter_mut().find(|(v, _)| v == d) {
            Some((_, g)) => g.push(*l),
            None => groups.push((d.clone(), vec![*l])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassNode {
    pub set: Vec<usize>,
    /// A point for irreducible sets; for reducible ones a ray constant on each child.
    pub limit: XiLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassLimit {
    pub tree: TreePartition,
    /// One entry per set of the tree, in the tree's order.
    pub data: Vec<PassNode>,
}

impl PassLimit {
    pub fn node(&self, set: &[usize]) -> Option<&PassNode> {
        self.data.iter().find(|d| d.set == set)
    }
}

pub fn pass_limit(v: &GrowthVector) -> PassLimit {
    let n = v.n();
    let mut nodes = Vec::new();
    let mut stack = vec![(1..=n).collect::<Vec<usize>>()];
    while let Some(set) = stack.pop() {
        let coords: Vec<&Poly> = set.iter().map(|&l| &v.coords[l - 1]).collect();
        let lim = xi_limit_labeled(&set, &coords);
        if let XiLimit::Ray(r) = &lim {
            stack.extend(split_by_value(&set, &r.dir));
        }
        nodes.push(PassNode { set, limit: lim });
    }
    let tree = TreePartition::new(n, nodes.iter().map(|d| polytope::set_of(&d.set)).collect())
        .expect("limit sets form a tree-partition");
    let data = tree
        .sets
        .iter()
        .map(|&s| {
            let e = polytope::elements(s);
            nodes.iter().find(|d| d.set == e).expect("node for every set").clone()
        })
        .collect();
    PassLimit { tree, data }
}

/// Direction in Ξ[J; 𝔞] ≅ ⊕ Ξ(block): per-block integer coordinates, each block
/// anchored at minimum 0, with one common positive factor cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointRay {
    pub blocks: Vec<(Vec<usize>, Vec<BigInt>)>,
}

impl fmt::Display for JointRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (_, d)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            fmt_list(f, d)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KarpLimit {
    pub leveled: LeveledTreePartition,
    /// Ray taking level j to level j + 1, for j < τ.
    pub rays: Vec<JointRay>,
    /// Final point, one per block of the last level.
    pub points: Vec<XiPoint>,
}

pub fn karp_limit(v: &GrowthVector) -> KarpLimit {
    let n = v.n();
    let mut level = Partition::trivial(n);
    let mut levels = vec![level.clone()];
    let mut rays = Vec::new();
    loop {
        let blocks = level.lists();
        let parts: Vec<Option<(usize, Vec<BigRational>)>> = blocks
            .iter()
            .map(|b| leading_part(&b.iter().map(|&l| &v.coords[l - 1]).collect::<Vec<_>>()))
            .collect();
        let Some(d) = parts.iter().flatten().map(|(d, _)| *d).max() else {
            let points = blocks
                .iter()
                .map(|b| {
                    let coords: Vec<&Poly> = b.iter().map(|&l| &v.coords[l - 1]).collect();
                    XiPoint::canonical(b.clone(), constants(&coords))
                })
                .collect();
            let leveled = LeveledTreePartition::new(levels).expect("strictly refining levels");
            return KarpLimit { leveled, rays, points };
        };
        // blocks growing at the maximal rate contribute their leading coefficients
        let shifted: Vec<Vec<BigRational>> = blocks
            .iter()
            .zip(&parts)
            .map(|(b, p)| match p {
                Some((db, c)) if *db == d => {
                    let m = min_of(c);
                    c.iter().map(|x| x - &m).collect()
                }
                _ => vec![BigRational::zero(); b.len()],
            })
            .collect();
        let flat: Vec<BigRational> = shifted.iter().flatten().cloned().collect();
        let ints = integer_direction(&flat);
        let mut joint = Vec::new();
        let mut next: Vec<Set> = Vec::new();
        let mut at = 0;
        for b in &blocks {
            let dir = ints[at..at + b.len()].to_vec();
            at += b.len();
            next.extend(split_by_value(b, &dir).iter().map(|g| polytope::set_of(g)));
            joint.push((b.clone(), dir));
        }
        rays.push(JointRay { blocks: joint });
        level = Partition::new(n, next).expect("refinement is a partition");
        levels.push(level.clone());
    }
}

/// Whether every ray datum is generic (distinct values on distinct children).
pub fn ray_is_generic(r: &XiRay, children: &[Vec<usize>]) -> bool {
    let vals: Vec<&BigInt> = children
        .iter()
        .map(|c| {
            let i = r.labels.iter().position(|l| *l == c[0]).expect("child label in ray");
            &r.dir[i]
        })
        .collect();
    (0..vals.len()).all(|i| (i + 1..vals.len()).all(|j| vals[i] != vals[j]))
        && r.dir.iter().any(|x| x.is_positive())
}
