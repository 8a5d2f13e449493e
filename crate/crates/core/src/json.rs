//! JSON documents for every value the command line reads or writes.
//!
//! Floats are rounded to 12 significant digits before serialization; rationals are
//! strings `"p/q"` (or `"p"`). Each `*Json` type deserializes what it serializes.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryIndex, BoundaryKind, BoundaryPoint};
use crate::error::{Error, Result};
use crate::growth::fmt_rational;
use crate::laurent::Laurent;
use crate::linalg::Mat;
use crate::pencil::NullPencilData;
use crate::polytope::{FaceLattice, LeveledTreePartition, Partition, Stratum, StratumIndex, StratumKind, TreePartition};
use crate::satake::{Flag, SatakePoint, ScaleMode, SubquotientForm};
use crate::spd::{ComplexDistance, Geodesic, Model, SpdMatrix, Velocity};
use crate::urchin::{CurveFactorization, MeromorphicCurve, UrchinLimit};
use crate::xi::{JointRay, KarpLimit, PassLimit, PassNode, XiLimit, XiPoint, XiRay};

/// Rounds to 12 significant digits.
pub fn r12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| r12(m[(r, c)])).collect()).collect()
}

fn mat(rows: &[Vec<f64>]) -> Result<Mat> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch(m, bad.len()));
    }
    Ok(Mat::from_fn(n, m, |r, c| rows[r][c]))
}

pub fn parse_model(s: &str) -> Result<Model> {
    match s {
        "E" => Ok(Model::E),
        "PE" => Ok(Model::PE),
        _ => Err(Error::Incompatible(format!("unknown model {s:?}"))),
    }
}

pub fn rat(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|_| Error::Parse { pos: 0, msg: format!("bad rational {s:?}") })
}

fn rats(v: &[BigRational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn to_string(v: &impl Serialize, pretty: bool) -> String {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.expect("documents serialize")
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixJson {
    pub n: usize,
    pub model: String,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_spd(x: &SpdMatrix) -> MatrixJson {
        MatrixJson { n: x.n(), model: x.model().as_str().into(), rows: rows(x.matrix()) }
    }
    pub fn to_spd(&self) -> Result<SpdMatrix> {
        let m = mat(&self.rows)?;
        if m.nrows() != self.n {
            return Err(Error::DimensionMismatch(self.n, m.nrows()));
        }
        crate::spd::make_spd(&m, parse_model(&self.model)?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DistanceJson {
    pub psis: Vec<f64>,
    pub rho: f64,
}

impl DistanceJson {
    pub fn from_distance(d: &ComplexDistance) -> DistanceJson {
        // log-eigenvalues are absolute quantities; noise below 1e-12 is reported as 0
        let snap = |x: f64| if x.abs() < 1e-12 { 0.0 } else { r12(x) };
        DistanceJson { psis: d.psis.iter().map(|&x| snap(x)).collect(), rho: snap(d.rho()) }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GeodesicJson {
    pub frame: Vec<Vec<f64>>,
    pub blocks: Vec<usize>,
    pub values: Vec<f64>,
    #[serde(default = "default_model")]
    pub model: String,
}

fn default_model() -> String {
    "E".into()
}

impl GeodesicJson {
    pub fn from_geodesic(g: &Geodesic) -> GeodesicJson {
        GeodesicJson {
            frame: rows(&g.frame),
            blocks: g.blocks.clone(),
            values: g.values.iter().map(|&x| r12(x)).collect(),
            model: g.model.as_str().into(),
        }
    }
    pub fn to_geodesic(&self) -> Result<Geodesic> {
        Geodesic::new(mat(&self.frame)?, self.blocks.clone(), self.values.clone(), parse_model(&self.model)?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FormJson {
    pub dim: usize,
    pub matrix: Vec<Vec<f64>>,
    pub scale: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SatakeJson {
    pub n: usize,
    pub codims: Vec<usize>,
    pub basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub forms: Vec<FormJson>,
}

fn form_json(f: &SubquotientForm) -> FormJson {
    FormJson { dim: f.dim(), matrix: rows(&f.matrix), scale: f.mode.as_str().into() }
}

fn form_from_json(f: &FormJson) -> Result<SubquotientForm> {
    let mode = match f.scale.as_str() {
        "upToScale" => ScaleMode::UpToScale,
        "literal" => ScaleMode::Literal,
        s => return Err(Error::Incompatible(format!("unknown scale {s:?}"))),
    };
    let m = mat(&f.matrix)?;
    if m.nrows() != f.dim {
        return Err(Error::DimensionMismatch(f.dim, m.nrows()));
    }
    Ok(SubquotientForm { matrix: m, mode })
}

impl SatakeJson {
    fn from_flag(flag: &Flag, forms: &[SubquotientForm]) -> SatakeJson {
        SatakeJson {
            n: flag.n,
            codims: flag.codims.clone(),
            basis: rows(&flag.basis),
            forms: forms.iter().map(form_json).collect(),
        }
    }
    pub fn from_point(p: &SatakePoint) -> SatakeJson {
        SatakeJson::from_flag(&p.flag, &p.forms)
    }
    pub fn to_point(&self) -> Result<SatakePoint> {
        let flag = Flag::new(mat(&self.basis)?, self.codims.clone())?;
        SatakePoint::new(flag, self.forms.iter().map(form_from_json).collect::<Result<_>>()?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VelocityJson {
    pub blocks: Vec<usize>,
    pub values: Vec<f64>,
    pub model: String,
}

impl VelocityJson {
    pub fn from_velocity(v: &Velocity) -> VelocityJson {
        VelocityJson {
            blocks: v.blocks.clone(),
            values: v.values.iter().map(|&x| r12(x)).collect(),
            model: v.model.as_str().into(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct PencilJson {
    pub velocity: VelocityJson,
    #[serde(flatten)]
    pub point: SatakeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms_mode: Option<String>,
}

impl PencilJson {
    pub fn from_finite(v: &Velocity, flag: &Flag) -> PencilJson {
        PencilJson { velocity: VelocityJson::from_velocity(v), point: SatakeJson::from_flag(flag, &[]), forms_mode: None }
    }
    pub fn from_solvable(v: &Velocity, p: &SatakePoint) -> PencilJson {
        PencilJson { velocity: VelocityJson::from_velocity(v), point: SatakeJson::from_point(p), forms_mode: None }
    }
    pub fn from_null(d: &NullPencilData) -> PencilJson {
        PencilJson {
            velocity: VelocityJson::from_velocity(&d.velocity),
            point: SatakeJson::from_flag(&d.flag, &d.forms),
            forms_mode: Some("literal".into()),
        }
    }
}

pub fn partition_json(p: &Partition) -> Vec<Vec<usize>> {
    p.lists()
}

pub fn leveled_json(a: &LeveledTreePartition) -> Vec<Vec<Vec<usize>>> {
    a.levels.iter().map(Partition::lists).collect()
}

pub fn leveled_from_json(n: usize, v: &[Vec<Vec<usize>>]) -> Result<LeveledTreePartition> {
    LeveledTreePartition::new(v.iter().map(|l| Partition::from_lists(n, l)).collect::<Result<_>>()?)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum IndexJson {
    Tree(Vec<Vec<usize>>),
    Leveled(Vec<Vec<Vec<usize>>>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StratumJson {
    pub kind: String,
    pub index: IndexJson,
    pub label: String,
    pub dim: usize,
    pub components: u64,
}

fn stratum_kind(s: &str) -> Result<StratumKind> {
    Ok(match s {
        "Pass" => StratumKind::Pass,
        "Karp" => StratumKind::Karp,
        "AssFace" => StratumKind::AssFace,
        "WeylPass" => StratumKind::WeylPass,
        "WeylKarp" => StratumKind::WeylKarp,
        _ => return Err(Error::Incompatible(format!("unknown stratum kind {s:?}"))),
    })
}

impl StratumJson {
    pub fn from_stratum(s: &Stratum) -> StratumJson {
        let index = match &s.index {
            StratumIndex::Tree(t) => IndexJson::Tree(t.lists()),
            StratumIndex::Leveled(l) => IndexJson::Leveled(leveled_json(l)),
        };
        StratumJson { kind: s.kind.as_str().into(), index, label: s.index.to_string(), dim: s.dim, components: s.components }
    }
    pub fn to_stratum(&self, n: usize) -> Result<Stratum> {
        let index = match &self.index {
            IndexJson::Tree(t) => StratumIndex::Tree(TreePartition::from_lists(n, t)?),
            IndexJson::Leveled(l) => StratumIndex::Leveled(leveled_from_json(n, l)?),
        };
        Ok(Stratum { index, kind: stratum_kind(&self.kind)?, dim: self.dim, components: self.components })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct FaceLatticeJson {
    pub n: usize,
    pub nodes: Vec<StratumJson>,
    /// `[upper, lower]` Hasse covers by node position.
    pub covers: Vec<(usize, usize)>,
    pub top: usize,
    pub bottoms: Vec<usize>,
    pub f_vector: Vec<usize>,
    pub alternating_sum: i64,
}

impl FaceLatticeJson {
    pub fn from_lattice(n: usize, l: &FaceLattice) -> FaceLatticeJson {
        FaceLatticeJson {
            n,
            nodes: l.nodes.iter().map(StratumJson::from_stratum).collect(),
            covers: l.covers.clone(),
            top: l.top,
            bottoms: l.bottoms.clone(),
            f_vector: l.f_vector(),
            alternating_sum: l.alternating_sum(),
        }
    }
    pub fn to_lattice(&self) -> Result<FaceLattice> {
        let nodes = self.nodes.iter().map(|s| s.to_stratum(self.n)).collect::<Result<Vec<_>>>()?;
        if let Some(&(a, b)) = self.covers.iter().find(|(a, b)| *a >= nodes.len() || *b >= nodes.len()) {
            return Err(Error::InvalidIndex(format!("cover ({a},{b}) out of range")));
        }
        Ok(FaceLattice { nodes, covers: self.covers.clone(), top: self.top, bottoms: self.bottoms.clone() })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct XiNodeJson {
    pub set: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
}

impl XiNodeJson {
    fn ray(set: &[usize], dir: &[BigInt]) -> XiNodeJson {
        XiNodeJson { set: set.to_vec(), ray: Some(ints(dir)), point: None }
    }
    fn point(p: &XiPoint) -> XiNodeJson {
        XiNodeJson { set: p.labels.clone(), ray: None, point: Some(rats(&p.coords)) }
    }
    fn limit(&self) -> Result<XiLimit> {
        match (&self.ray, &self.point) {
            (Some(r), None) => Ok(XiLimit::Ray(XiRay {
                labels: self.set.clone(),
                dir: r.iter().map(|s| BigInt::from_str(s).map_err(|_| Error::Parse { pos: 0, msg: format!("bad integer {s:?}") })).collect::<Result<_>>()?,
            })),
            (None, Some(p)) => Ok(XiLimit::Point(XiPoint {
                labels: self.set.clone(),
                coords: p.iter().map(|s| rat(s)).collect::<Result<_>>()?,
            })),
            _ => Err(Error::Incompatible("node needs exactly one of ray and point".into())),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PassLimitJson {
    pub n: usize,
    pub tree: Vec<Vec<usize>>,
    pub nested: String,
    pub data: Vec<XiNodeJson>,
}

impl PassLimitJson {
    pub fn from_limit(l: &PassLimit) -> PassLimitJson {
        let data = l
            .data
            .iter()
            .map(|d| match &d.limit {
                XiLimit::Ray(r) => XiNodeJson::ray(&d.set, &r.dir),
                XiLimit::Point(p) => XiNodeJson::point(p),
            })
            .collect();
        PassLimitJson { n: l.tree.n, tree: l.tree.lists(), nested: l.tree.nested(), data }
    }
    pub fn to_limit(&self) -> Result<PassLimit> {
        let tree = TreePartition::from_lists(self.n, &self.tree)?;
        let data = self.data.iter().map(|d| Ok(PassNode { set: d.set.clone(), limit: d.limit()? })).collect::<Result<_>>()?;
        Ok(PassLimit { tree, data })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct KarpLimitJson {
    pub n: usize,
    pub levels: Vec<Vec<Vec<usize>>>,
    /// One joint ray per level transition, listed block by block.
    pub rays: Vec<Vec<XiNodeJson>>,
    pub data: Vec<XiNodeJson>,
}

impl KarpLimitJson {
    pub fn from_limit(l: &KarpLimit) -> KarpLimitJson {
        KarpLimitJson {
            n: l.leveled.n,
            levels: leveled_json(&l.leveled),
            rays: l.rays.iter().map(|r| r.blocks.iter().map(|(s, d)| XiNodeJson::ray(s, d)).collect()).collect(),
            data: l.points.iter().map(XiNodeJson::point).collect(),
        }
    }
    pub fn to_limit(&self) -> Result<KarpLimit> {
        let leveled = leveled_from_json(self.n, &self.levels)?;
        let rays = self
            .rays
            .iter()
            .map(|r| {
                let blocks = r
                    .iter()
                    .map(|b| match b.limit()? {
                        XiLimit::Ray(x) => Ok((x.labels, x.dir)),
                        XiLimit::Point(_) => Err(Error::Incompatible("joint ray block must be a ray".into())),
                    })
                    .collect::<Result<_>>()?;
                Ok(JointRay { blocks })
            })
            .collect::<Result<_>>()?;
        let points = self
            .data
            .iter()
            .map(|b| match b.limit()? {
                XiLimit::Point(p) => Ok(p),
                XiLimit::Ray(_) => Err(Error::Incompatible("final data must be points".into())),
            })
            .collect::<Result<_>>()?;
        Ok(KarpLimit { leveled, rays, points })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RayJson {
    pub labels: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum BoundaryIndexJson {
    Interior,
    Tree(Vec<Vec<usize>>),
    Leveled(Vec<Vec<Vec<usize>>>),
    Subset(Vec<usize>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BoundaryPointJson {
    pub kind: String,
    pub index: BoundaryIndexJson,
    pub rays: Vec<RayJson>,
    pub chamber: Vec<Vec<f64>>,
    pub satake: SatakeJson,
}

impl BoundaryPointJson {
    pub fn from_point(p: &BoundaryPoint) -> BoundaryPointJson {
        let index = match &p.index {
            BoundaryIndex::Interior => BoundaryIndexJson::Interior,
            BoundaryIndex::Tree(t) => BoundaryIndexJson::Tree(t.lists()),
            BoundaryIndex::Leveled(l) => BoundaryIndexJson::Leveled(leveled_json(l)),
            BoundaryIndex::Subset(s) => BoundaryIndexJson::Subset(s.clone()),
        };
        BoundaryPointJson {
            kind: p.kind.as_str().into(),
            index,
            rays: p.rays.iter().map(|(l, v)| RayJson { labels: l.clone(), values: v.iter().map(|&x| r12(x)).collect() }).collect(),
            chamber: p.chamber.iter().map(|c| c.iter().map(|&x| r12(x)).collect()).collect(),
            satake: SatakeJson::from_point(&p.satake),
        }
    }
    pub fn to_point(&self) -> Result<BoundaryPoint> {
        let kind = BoundaryKind::parse(&self.kind).ok_or_else(|| Error::Incompatible(format!("unknown kind {:?}", self.kind)))?;
        let n = self.satake.n;
        let index = match &self.index {
            BoundaryIndexJson::Interior => BoundaryIndex::Interior,
            BoundaryIndexJson::Tree(t) => BoundaryIndex::Tree(TreePartition::from_lists(n, t)?),
            BoundaryIndexJson::Leveled(l) => BoundaryIndex::Leveled(leveled_from_json(n, l)?),
            BoundaryIndexJson::Subset(s) => BoundaryIndex::Subset(s.clone()),
        };
        Ok(BoundaryPoint {
            kind,
            index,
            rays: self.rays.iter().map(|r| (r.labels.clone(), r.values.clone())).collect(),
            chamber: self.chamber.clone(),
            satake: self.satake.to_point()?,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesJson {
    pub low: i64,
    pub coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CurveJson {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    /// Full rows, or upper-triangular rows starting at the diagonal.
    pub entries: Vec<Vec<SeriesJson>>,
}

impl CurveJson {
    /// Entry `(i,j)` known through order `low + T - 1`.
    pub fn to_curve(&self) -> Result<MeromorphicCurve> {
        self.to_curve_with(self.t)
    }

    /// Same data read with window `t`, treating the listed coefficients as complete.
    pub fn to_curve_with(&self, t: usize) -> Result<MeromorphicCurve> {
        let n = self.n;
        if self.t == 0 {
            return Err(Error::Incompatible("T must be positive".into()));
        }
        if self.entries.len() != n {
            return Err(Error::DimensionMismatch(n, self.entries.len()));
        }
        let upper_only = self.entries.iter().enumerate().all(|(i, r)| r.len() == n - i) && n > 1;
        let series = |s: &SeriesJson| -> Result<Laurent> {
            let c = s.coeffs.iter().map(|x| rat(x)).collect::<Result<Vec<_>>>()?;
            Ok(Laurent::new(s.low, c, s.low + t as i64))
        };
        let mut e = vec![vec![Laurent::zero(0); n]; n];
        for (i, row) in self.entries.iter().enumerate() {
            let offset = if upper_only { i } else { 0 };
            if !upper_only && row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            for (jj, s) in row.iter().enumerate() {
                let j = jj + offset;
                if j >= i {
                    let x = series(s)?;
                    e[j][i] = x.clone();
                    e[i][j] = x;
                }
            }
        }
        if !upper_only {
            for i in 0..n {
                for j in 0..i {
                    if series(&self.entries[i][j])? != e[i][j] {
                        return Err(Error::NotSymmetric(f64::NAN));
                    }
                }
            }
        }
        MeromorphicCurve::new(e)
    }

    pub fn from_curve(x: &MeromorphicCurve, t: usize) -> CurveJson {
        let n = x.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = x.entry(i, j);
                        let low = s.valuation().unwrap_or(0);
                        let coeffs = (low..low + t as i64).map(|k| s.coeff(k)).collect::<Vec<_>>();
                        let mut coeffs = rats(&coeffs);
                        while coeffs.last().is_some_and(|c| c == "0") {
                            coeffs.pop();
                        }
                        SeriesJson { low, coeffs }
                    })
                    .collect()
            })
            .collect();
        CurveJson { n, t, entries }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct UrchinLimitJson {
    pub blocks: Vec<usize>,
    pub values: Vec<i64>,
    pub flag: Vec<Vec<Vec<String>>>,
    pub forms: Vec<Vec<Vec<String>>>,
}

fn qmat(m: &[Vec<BigRational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| rats(r)).collect()
}

fn qmat_from(m: &[Vec<String>]) -> Result<Vec<Vec<BigRational>>> {
    m.iter().map(|r| r.iter().map(|s| rat(s)).collect()).collect()
}

impl UrchinLimitJson {
    pub fn from_limit(l: &UrchinLimit) -> UrchinLimitJson {
        UrchinLimitJson {
            blocks: l.blocks.clone(),
            values: l.values.clone(),
            flag: l.flag.iter().map(|w| qmat(w)).collect(),
            forms: l.forms.iter().map(|f| qmat(f)).collect(),
        }
    }
    pub fn to_limit(&self) -> Result<UrchinLimit> {
        Ok(UrchinLimit {
            blocks: self.blocks.clone(),
            values: self.values.clone(),
            flag: self.flag.iter().map(|w| qmat_from(w)).collect::<Result<_>>()?,
            forms: self.forms.iter().map(|f| qmat_from(f)).collect::<Result<_>>()?,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct UrchinJson {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub exponents: Vec<i64>,
    pub scales: Vec<String>,
    pub g0: Vec<Vec<String>>,
    pub limit: UrchinLimitJson,
    /// Floating null-pencil data; absent when all exponents vanish.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_pencil: Option<PencilJson>,
}

impl UrchinJson {
    pub fn new(f: &CurveFactorization, t: usize, limit: &UrchinLimit, null: Option<&NullPencilData>) -> UrchinJson {
        UrchinJson {
            n: f.k.len(),
            t,
            exponents: f.k.clone(),
            scales: rats(&f.c),
            g0: qmat(&f.g0()),
            limit: UrchinLimitJson::from_limit(limit),
            null_pencil: null.map(PencilJson::from_null),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ErrorJson {
    pub error: String,
    pub detail: String,
}

impl ErrorJson {
    pub fn from_error(e: &Error) -> ErrorJson {
        ErrorJson { error: e.code().into(), detail: e.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(r12(0.1), 0.1);
        assert_eq!(r12(1.0 / 3.0), 0.333333333333);
        assert_eq!(r12(-2.0f64.ln() * 1e7), -6931471.80560);
    }

    #[test]
    fn curve_upper_triangle_is_mirrored() {
        let doc = r#"{"n":2,"T":8,"entries":[[{"low":-2,"coeffs":["1"]},{"low":0,"coeffs":["1"]}],[{"low":0,"coeffs":["1","1/2"]}]]}"#;
        let c: CurveJson = from_str(doc).unwrap();
        let x = c.to_curve().unwrap();
        assert_eq!(x.entry(1, 0), x.entry(0, 1));
        assert_eq!(x.entry(1, 1).coeff(1), rat("1/2").unwrap());
        assert_eq!(x.entry(0, 0).prec(), 6);
        let back = CurveJson::from_curve(&x, 8);
        assert_eq!(back.to_curve().unwrap(), x);
    }

    #[test]
    fn asymmetric_full_curve_is_rejected() {
        let doc = r#"{"n":2,"T":4,"entries":[[{"low":0,"coeffs":["1"]},{"low":0,"coeffs":["1"]}],[{"low":0,"coeffs":["2"]},{"low":0,"coeffs":["1"]}]]}"#;
        let c: CurveJson = from_str(doc).unwrap();
        assert!(matches!(c.to_curve(), Err(Error::NotSymmetric(_))));
    }
}
