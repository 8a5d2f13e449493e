//! Points of the associahedral, Karpelevich and Martin boundaries: a combinatorial
//! index, chamber data, and a Satake part whose forms carry the chamber values.

use crate::error::{Error, Result};
use crate::growth::GrowthVector;
use crate::linalg::{self, Mat};
use crate::polytope::{self, LeveledTreePartition, Partition, TreePartition};
use crate::satake::{self, Flag, SatakePoint, SubquotientForm};
use crate::spd::Geodesic;
use crate::xi::{self, XiLimit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Ass,
    Karp,
    Martin,
}

impl BoundaryKind {
    pub fn parse(s: &str) -> Option<BoundaryKind> {
        match s.to_ascii_lowercase().as_str() {
            "ass" => Some(BoundaryKind::Ass),
            "karp" => Some(BoundaryKind::Karp),
            "martin" => Some(BoundaryKind::Martin),
            _ => None,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Ass => "Ass",
            BoundaryKind::Karp => "Karp",
            BoundaryKind::Martin => "Martin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryIndex {
    Interior,
    Tree(TreePartition),
    Leveled(LeveledTreePartition),
    /// Interior cut points i_1 < … < i_k of the Martin index.
    Subset(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub kind: BoundaryKind,
    pub index: BoundaryIndex,
    /// Directions at infinity: for each entry the labels it lives on and its values,
    /// anchored at minimum 0 per block of constancy and scaled to maximum 1.
    pub rays: Vec<(Vec<usize>, Vec<f64>)>,
    /// Values ψ on each irreducible segment, summing to zero (Ass and Karp only).
    pub chamber: Vec<Vec<f64>>,
    pub satake: SatakePoint,
}

fn normalize_ray(blocks: &[Vec<f64>]) -> Vec<f64> {
    let shifted: Vec<f64> = blocks
        .iter()
        .flat_map(|b| {
            let m = b.iter().cloned().fold(f64::INFINITY, f64::min);
            b.iter().map(move |x| x - m)
        })
        .collect();
    let top = shifted.iter().cloned().fold(0.0, f64::max);
    if top > 0.0 { shifted.iter().map(|x| x / top).collect() } else { shifted }
}

fn centered(v: &[f64]) -> Vec<f64> {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - m).collect()
}

/// Replaces each form by `U diag(e^{ψ}) Uᵀ`, with `U` the form's eigenvectors.
fn impose_semiaxes(sp: &SatakePoint, chamber: &[Vec<f64>]) -> SatakePoint {
    let forms = sp
        .forms
        .iter()
        .zip(chamber)
        .map(|(f, psi)| {
            let (_, u) = linalg::sym_eigen(&f.matrix);
            let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|x| x.exp())));
            SubquotientForm::literal(&(&u * d * u.transpose()))
        })
        .collect();
    SatakePoint { flag: sp.flag.clone(), forms }
}

/// Log-eigenvalues (non-increasing, centered) of each form.
pub fn form_log_spectra(sp: &SatakePoint) -> Vec<Vec<f64>> {
    sp.forms.iter().map(|f| centered(&linalg::sym_eigen(&f.matrix).0.iter().map(|x| x.ln()).collect::<Vec<_>>())).collect()
}

fn segments(cuts: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut c = vec![0];
    c.extend(cuts);
    c.push(n);
    c.windows(2).map(|w| (w[0] + 1..=w[1]).collect()).collect()
}

pub fn geodesic_boundary_point(gamma: &Geodesic, kind: BoundaryKind) -> BoundaryPoint {
    let n = gamma.n();
    let sp = satake::geodesic_satake_limit(gamma);
    let psi: Vec<f64> = centered(&gamma.expanded());
    let cuts = gamma.codims();
    let chamber = form_log_spectra(&sp);
    if cuts.is_empty() {
        let satake = impose_semiaxes(&sp, &chamber);
        return BoundaryPoint { kind, index: BoundaryIndex::Interior, rays: vec![], chamber, satake };
    }
    let segs = segments(&cuts, n);
    let blocks = Partition::from_lists(n, &segs).expect("velocity blocks partition J");
    let ray = ((1..=n).collect(), normalize_ray(&[psi]));
    let index = match kind {
        BoundaryKind::Karp | BoundaryKind::Ass => {
            let leveled = LeveledTreePartition::new(vec![Partition::trivial(n), blocks]).expect("two levels");
            if kind == BoundaryKind::Karp {
                BoundaryIndex::Leveled(leveled)
            } else {
                BoundaryIndex::Tree(polytope::karp_to_pass(&leveled))
            }
        }
        BoundaryKind::Martin => BoundaryIndex::Subset(cuts),
    };
    match kind {
        BoundaryKind::Martin => BoundaryPoint { kind, index, rays: vec![ray], chamber: vec![], satake: sp },
        _ => {
            let satake = impose_semiaxes(&sp, &chamber);
            BoundaryPoint { kind, index, rays: vec![ray], chamber, satake }
        }
    }
}

fn check_cuts(flag: &Flag, want: &[usize]) -> Result<()> {
    if flag.codims != want {
        return Err(Error::Incompatible(format!(
            "frame limit has codimensions {:?}, growth data needs {:?}",
            flag.codims, want
        )));
    }
    Ok(())
}

fn cuts_of(blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::new();
    for b in &blocks[..blocks.len() - 1] {
        acc += b.len();
        out.push(acc);
    }
    out
}

fn ints_to_f64(v: &[num_bigint::BigInt]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Boundary point of a sequence given its log-eigenvalue growth and the Satake limit
/// of its eigenframes.
pub fn sequence_boundary_point(eigen: &GrowthVector, frame_limit: &SatakePoint, kind: BoundaryKind) -> Result<BoundaryPoint> {
    let n = eigen.n();
    if frame_limit.n() != n {
        return Err(Error::DimensionMismatch(n, frame_limit.n()));
    }
    if !eigen.is_sorted() {
        return Err(Error::NotSorted);
    }
    let kl = xi::karp_limit(eigen);
    if kl.leveled.tau() == 0 {
        check_cuts(&frame_limit.flag, &[])?;
        let chamber = vec![centered(&kl.points[0].to_f64())];
        let satake = impose_semiaxes(frame_limit, &chamber);
        return Ok(BoundaryPoint { kind, index: BoundaryIndex::Interior, rays: vec![], chamber, satake });
    }
    match kind {
        BoundaryKind::Karp => {
            let segs = kl.leveled.levels.last().expect("levels").lists();
            check_cuts(&frame_limit.flag, &cuts_of(&segs))?;
            let rays = kl
                .rays
                .iter()
                .map(|r| {
                    let blocks: Vec<Vec<f64>> = r.blocks.iter().map(|(_, d)| ints_to_f64(d)).collect();
                    ((1..=n).collect(), normalize_ray(&blocks))
                })
                .collect();
            let chamber: Vec<Vec<f64>> = kl.points.iter().map(|p| centered(&p.to_f64())).collect();
            let satake = impose_semiaxes(frame_limit, &chamber);
            Ok(BoundaryPoint { kind, index: BoundaryIndex::Leveled(kl.leveled), rays, chamber, satake })
        }
        BoundaryKind::Ass => {
            let pl = xi::pass_limit(eigen);
            let mut rays = Vec::new();
            let mut chamber = Vec::new();
            let mut irreducible = Vec::new();
            for node in &pl.data {
                match &node.limit {
                    XiLimit::Ray(r) => rays.push((node.set.clone(), normalize_ray(&[ints_to_f64(&r.dir)]))),
                    XiLimit::Point(p) => {
                        irreducible.push(node.set.clone());
                        chamber.push((node.set[0], centered(&p.to_f64())));
                    }
                }
            }
            irreducible.sort();
            chamber.sort_by_key(|c| c.0);
            let chamber: Vec<Vec<f64>> = chamber.into_iter().map(|c| c.1).collect();
            check_cuts(&frame_limit.flag, &cuts_of(&irreducible))?;
            let satake = impose_semiaxes(frame_limit, &chamber);
            Ok(BoundaryPoint { kind, index: BoundaryIndex::Tree(pl.tree), rays, chamber, satake })
        }
        BoundaryKind::Martin => {
            let first = kl.leveled.levels[1].lists();
            let cuts = cuts_of(&first);
            check_cuts(&frame_limit.flag, &cuts)?;
            let r = &kl.rays[0].blocks[0].1;
            let rays = vec![((1..=n).collect(), normalize_ray(&[ints_to_f64(r)]))];
            Ok(BoundaryPoint { kind, index: BoundaryIndex::Subset(cuts), rays, chamber: vec![], satake: frame_limit.clone() })
        }
    }
}

/// Largest deviation between the log-eigenvalues of the forms and the chamber values.
pub fn semiaxis_defect(p: &BoundaryPoint) -> f64 {
    if p.chamber.is_empty() {
        return 0.0;
    }
    form_log_spectra(&p.satake)
        .iter()
        .zip(&p.chamber)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}
