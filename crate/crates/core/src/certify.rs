//! Certified refutations of openness and randomized checks of the
//! commuting-diagram laws.
//!
//! `combine_points` is nondecreasing in every input, so its value at the
//! upper corner of a box bounds every value attained inside the box. Open
//! endpoints are handled through the closure: a bound `b` and targets `> b`
//! separate strictly even when the bound itself is not attained.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::barycenter::{barycenter, EmbeddedMeasure};
use crate::convexity::{combine_points, n_ary_combine, CubePoint};
use crate::error::{Error, Result};
use crate::measures::{sup_distance, FunctionOnSpace, IdempotentMeasure, SpaceMap, WeightPair};
use crate::par::Exec;
use crate::tnorm::{dyadic_denominator, TNormSpec, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let iv = Self {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(Error::InvalidInstance(format!("bad interval {iv}")));
        }
        Ok(iv)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn point(v: f64) -> Result<Self> {
        Self::closed(v, v)
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_closed { v >= self.lo } else { v > self.lo };
        let below = if self.hi_closed { v <= self.hi } else { v < self.hi };
        above && below
    }

    /// Multiples of `1/denom` inside the interval.
    pub fn grid(&self, denom: usize) -> Vec<f64> {
        let d = denom as f64;
        (0..=denom)
            .map(|k| k as f64 / d)
            .filter(|&v| self.contains(v))
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A box of inputs `(x, y, t, p)` of the combination map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InputBox {
    pub x: Vec<Interval>,
    pub y: Vec<Interval>,
    pub t: Interval,
    pub p: Interval,
    /// Restrict `(t, p)` to `max(t, p) = 1`.
    pub j_constrained: bool,
}

impl InputBox {
    pub fn validate(&self) -> Result<()> {
        if self.x.is_empty() || self.x.len() != self.y.len() {
            return Err(Error::DimensionMismatch {
                left: self.x.len(),
                right: self.y.len(),
            });
        }
        if self.j_constrained && !(self.t.contains(1.0) || self.p.contains(1.0)) {
            return Err(Error::InvalidInstance("the weight box misses J".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Grid points `(x, y, t, p)` of the box at step `1/denom`, in
    /// lexicographic order.
    pub fn grid(&self, denom: usize) -> Vec<(Vec<f64>, Vec<f64>, f64, f64)> {
        let axes: Vec<Vec<f64>> = self.x.iter().chain(&self.y).map(|iv| iv.grid(denom)).collect();
        let mut weights = Vec::new();
        for &t in &self.t.grid(denom) {
            for &p in &self.p.grid(denom) {
                if !self.j_constrained || t.max(p) >= 1.0 {
                    weights.push((t, p));
                }
            }
        }
        let mut out = Vec::new();
        let d = self.dim();
        for coords in cartesian(&axes) {
            for &(t, p) in &weights {
                out.push((coords[..d].to_vec(), coords[d..].to_vec(), t, p));
            }
        }
        out
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect()
    })
}

/// Coordinatewise bound on `combine_points` over the box, read off at the
/// upper corner of its closure.
pub fn box_sup(tnorm: &TNormSpec, b: &InputBox) -> Result<Vec<f64>> {
    b.validate()?;
    Ok(b.x
        .iter()
        .zip(&b.y)
        .map(|(x, y)| tnorm.apply(b.t.hi, x.hi).max(tnorm.apply(b.p.hi, y.hi)))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Counterexample {
    #[serde(rename = "prop51")]
    SectionInterval,
    #[serde(rename = "prop53")]
    MinSquare,
    #[serde(rename = "joinAD")]
    TwoPointJoin,
}

impl Counterexample {
    pub fn name(self) -> &'static str {
        match self {
            Counterexample::SectionInterval => "prop51",
            Counterexample::MinSquare => "prop53",
            Counterexample::TwoPointJoin => "joinAD",
        }
    }

    /// T-norm the case is stated for; `joinAD` holds for every t-norm.
    pub fn default_tnorm(self) -> TNormSpec {
        match self {
            Counterexample::SectionInterval => TNormSpec::SectionT,
            _ => TNormSpec::Min,
        }
    }
}

impl FromStr for Counterexample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop51" => Ok(Counterexample::SectionInterval),
            "prop53" => Ok(Counterexample::MinSquare),
            "joinAD" => Ok(Counterexample::TwoPointJoin),
            other => Err(Error::InvalidInstance(format!("unknown case {other:?}"))),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "refuted-open")]
    RefutedOpen,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Inputs `(x, y, t, p)` of the combination map at the base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
    pub p: f64,
}

/// Evidence collected while certifying.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    /// Value of the map at the base point.
    pub base_value: Vec<f64>,
    /// Grid points of the box that were evaluated.
    pub grid_points: usize,
    /// Coordinatewise maximum over the grid.
    pub grid_max: Vec<f64>,
    /// Grid points where the certified property failed.
    pub violations: usize,
    /// Structural description of the image, when the bound is not numeric.
    pub image: Option<String>,
    /// Smallest sup-distance from a target to the certified image.
    pub separation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OpennessReport {
    pub case: Counterexample,
    pub tnorm: TNormSpec,
    pub base_point: BasePoint,
    #[serde(rename = "box")]
    pub input_box: Option<InputBox>,
    pub bound: Option<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
    pub verdict: Verdict,
    pub resolution: f64,
    pub witness: Witness,
}

/// One evaluated grid point, for CSV export.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub inputs: Vec<f64>,
    pub value: Vec<f64>,
}

fn check_resolution(resolution: f64) -> Result<usize> {
    match dyadic_denominator(resolution) {
        Some(d) if d >= 8 => Ok(d),
        _ => Err(Error::InvalidGridStep(resolution)),
    }
}

/// Target sequence indices `i` with `1/i` on the grid.
fn target_indices(denom: usize) -> Vec<usize> {
    [8, 16, 32].into_iter().filter(|&i| i <= denom).collect()
}

/// Reproduces one of the shipped counterexamples at grid step `resolution`
/// (dyadic, at most 1/8) under the case's own t-norm.
pub fn verify_counterexample(case: Counterexample, resolution: f64) -> Result<OpennessReport> {
    verify_counterexample_with(case, &case.default_tnorm(), resolution, Exec::default())
        .map(|(r, _)| r)
}

/// Like [`verify_counterexample`] with an explicit t-norm and execution
/// strategy; also returns the evaluated grid.
///
/// `prop51` and `prop53` are stated for one t-norm each; under another
/// t-norm the certificate may not go through and the verdict is then
/// `inconclusive`.
pub fn verify_counterexample_with(
    case: Counterexample,
    tnorm: &TNormSpec,
    resolution: f64,
    exec: Exec,
) -> Result<(OpennessReport, Vec<GridRow>)> {
    let denom = check_resolution(resolution)?;
    match case {
        Counterexample::SectionInterval => section_interval(tnorm, denom, resolution, exec),
        Counterexample::MinSquare => min_square(tnorm, denom, resolution, exec),
        Counterexample::TwoPointJoin => two_point_join(tnorm, denom, resolution),
    }
}

fn evaluate_grid(tnorm: &TNormSpec, b: &InputBox, denom: usize, exec: Exec) -> Result<Vec<GridRow>> {
    let points = b.grid(denom);
    exec.map(points.len(), |k| {
        let (x, y, t, p) = &points[k];
        let value = combine_points(
            &CubePoint::new(x.clone())?,
            &CubePoint::new(y.clone())?,
            WeightPair::new(*t, *p)?,
            tnorm,
        )?;
        let mut inputs = x.clone();
        inputs.extend(y);
        inputs.extend([*t, *p]);
        Ok(GridRow {
            inputs,
            value: value.coords().to_vec(),
        })
    })
    .into_iter()
    .collect()
}

fn grid_max(rows: &[GridRow], dim: usize) -> Vec<f64> {
    rows.iter().fold(vec![0.0; dim], |acc, r| {
        acc.iter().zip(&r.value).map(|(a, v)| a.max(*v)).collect()
    })
}

fn base_value(tnorm: &TNormSpec, base: &BasePoint) -> Result<Vec<f64>> {
    Ok(combine_points(
        &CubePoint::new(base.x.clone())?,
        &CubePoint::new(base.y.clone())?,
        WeightPair::new(base.t, base.p)?,
        tnorm,
    )?
    .coords()
    .to_vec())
}

fn contains_base(b: &InputBox, base: &BasePoint) -> bool {
    b.x.iter().zip(&base.x).all(|(iv, &v)| iv.contains(v))
        && b.y.iter().zip(&base.y).all(|(iv, &v)| iv.contains(v))
        && b.t.contains(base.t)
        && b.p.contains(base.p)
}

fn section_interval(
    tnorm: &TNormSpec,
    denom: usize,
    resolution: f64,
    exec: Exec,
) -> Result<(OpennessReport, Vec<GridRow>)> {
    let base = BasePoint {
        x: vec![0.5],
        y: vec![0.0],
        t: 0.5,
        p: 1.0,
    };
    let b = InputBox {
        x: vec![Interval::open(0.25, 0.75)?],
        y: vec![Interval::new(0.0, 0.25, true, false)?],
        t: Interval::open(0.25, 0.75)?,
        p: Interval::new(0.75, 1.0, false, true)?,
        j_constrained: true,
    };
    let bound = box_sup(tnorm, &b)?;
    let targets: Vec<Vec<f64>> = target_indices(denom)
        .into_iter()
        .map(|i| vec![0.5 + 1.0 / i as f64])
        .collect();
    let rows = evaluate_grid(tnorm, &b, denom, exec)?;
    let violations = rows.iter().filter(|r| r.value[0] > bound[0]).count();
    let value = base_value(tnorm, &base)?;
    let separation = targets
        .iter()
        .map(|z| z[0] - bound[0])
        .fold(f64::INFINITY, f64::min);
    // Strict separation: every target lies above the bound, and the targets
    // converge to the base value.
    let refuted = contains_base(&b, &base)
        && separation > 0.0
        && violations == 0
        && targets.iter().all(|z| z[0] - value[0] <= 1.0 / 8.0);
    let report = OpennessReport {
        case: Counterexample::SectionInterval,
        tnorm: tnorm.clone(),
        base_point: base,
        input_box: Some(b),
        bound: Some(bound),
        targets,
        verdict: if refuted {
            Verdict::RefutedOpen
        } else {
            Verdict::Inconclusive
        },
        resolution,
        witness: Witness {
            base_value: value,
            grid_points: rows.len(),
            grid_max: grid_max(&rows, 1),
            violations,
            image: None,
            separation,
        },
    };
    Ok((report, rows))
}

fn min_square(
    tnorm: &TNormSpec,
    denom: usize,
    resolution: f64,
    exec: Exec,
) -> Result<(OpennessReport, Vec<GridRow>)> {
    let base = BasePoint {
        x: vec![1.0, 1.0],
        y: vec![0.0, 0.0],
        t: 0.5,
        p: 1.0,
    };
    let high = Interval::new(0.75, 1.0, false, true)?;
    let low = Interval::new(0.0, 0.25, true, false)?;
    let b = InputBox {
        x: vec![high, high],
        y: vec![low, low],
        t: Interval::open(0.25, 0.75)?,
        p: Interval::new(0.75, 1.0, false, true)?,
        j_constrained: true,
    };
    let targets: Vec<Vec<f64>> = target_indices(denom)
        .into_iter()
        .map(|i| vec![0.5 - 1.0 / i as f64, 0.5 + 1.0 / i as f64])
        .collect();

    // Structural certificate for the minimum: t < 1 forces p = 1 on J, and
    // y_c <= t <= x_c on the box, so the image is (t, t).
    let structural = *tnorm == TNormSpec::Min
        && b.j_constrained
        && !b.t.contains(1.0)
        && b.x.iter().all(|iv| iv.lo >= b.t.hi)
        && b.y.iter().all(|iv| iv.hi <= b.t.lo);

    let rows = evaluate_grid(tnorm, &b, denom, exec)?;
    let off_diagonal = |r: &GridRow| r.value[0] != r.value[1] || r.value[0] != r.inputs[4];
    let violations = rows.iter().filter(|r| off_diagonal(r)).count();
    // Sup-distance from (a, b) to the diagonal is |a - b| / 2.
    let separation = targets
        .iter()
        .map(|z| (z[1] - z[0]).abs() / 2.0)
        .fold(f64::INFINITY, f64::min);
    let value = base_value(tnorm, &base)?;
    let refuted = structural && contains_base(&b, &base) && violations == 0 && separation > 0.0;
    let report = OpennessReport {
        case: Counterexample::MinSquare,
        tnorm: tnorm.clone(),
        base_point: base,
        input_box: Some(b),
        bound: None,
        targets,
        verdict: if refuted {
            Verdict::RefutedOpen
        } else {
            Verdict::Inconclusive
        },
        resolution,
        witness: Witness {
            base_value: value,
            grid_points: rows.len(),
            grid_max: grid_max(&rows, 2),
            violations,
            image: Some("diagonal (t, t)".into()),
            separation,
        },
    };
    Ok((report, rows))
}

/// Pairs `(alpha, beta)` of normalized densities on two points with
/// `alpha ⊕ beta = (v, 1)`, on the grid of step `1/denom`.
fn join_decompositions(v: f64, denom: usize) -> Vec<([f64; 2], [f64; 2])> {
    let grid: Vec<f64> = (0..=denom).map(|k| k as f64 / denom as f64).collect();
    let normalized: Vec<[f64; 2]> = grid
        .iter()
        .flat_map(|&a| [[a, 1.0], [1.0, a]])
        .collect();
    let mut out = Vec::new();
    for a in &normalized {
        for b in &normalized {
            if a[0].max(b[0]) == v && a[1].max(b[1]) == 1.0 {
                out.push((*a, *b));
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("grid values are finite"));
    out.dedup();
    out
}

fn two_point_join(
    tnorm: &TNormSpec,
    denom: usize,
    resolution: f64,
) -> Result<(OpennessReport, Vec<GridRow>)> {
    let phi = FunctionOnSpace::new(vec![0.0, 1.0])?;
    let base_alpha = IdempotentMeasure::from_density(vec![1.0, 0.0], tnorm.clone())?;
    let base_eval = base_alpha.eval(&phi)?;
    let both = WeightPair::new(1.0, 1.0)?;
    let mut targets = Vec::new();
    let mut rows = Vec::new();
    let mut all_full = true;
    let mut smallest = f64::INFINITY;
    for i in target_indices(denom) {
        let v = 1.0 - 1.0 / i as f64;
        let nu = IdempotentMeasure::from_density(vec![v, 1.0], tnorm.clone())?;
        targets.push(nu.density().to_vec());
        let pairs = join_decompositions(v, denom);
        all_full &= !pairs.is_empty();
        for (a, b) in pairs {
            let alpha = IdempotentMeasure::from_density(a.to_vec(), tnorm.clone())?;
            let beta = IdempotentMeasure::from_density(b.to_vec(), tnorm.clone())?;
            if alpha.combine(&beta, both)?.distance(&nu)? != 0.0 {
                return Err(Error::ConstructionFailed(format!(
                    "enumerated pair {a:?}, {b:?} does not join to {:?}",
                    nu.density()
                )));
            }
            let value = alpha.eval(&phi)?;
            // alpha_0 <= v < 1 forces alpha_1 = 1, hence alpha(phi) = 1.
            all_full &= a[1] == 1.0 && value == 1.0;
            smallest = smallest.min(value);
            rows.push(GridRow {
                inputs: vec![a[0], a[1], b[0], b[1]],
                value: vec![value],
            });
        }
    }
    let refuted = all_full && base_eval < 0.5 && smallest >= 0.5;
    let report = OpennessReport {
        case: Counterexample::TwoPointJoin,
        tnorm: tnorm.clone(),
        base_point: BasePoint {
            x: base_alpha.density().to_vec(),
            y: vec![0.0, 1.0],
            t: 1.0,
            p: 1.0,
        },
        input_box: None,
        bound: None,
        targets,
        verdict: if refuted {
            Verdict::RefutedOpen
        } else {
            Verdict::Inconclusive
        },
        resolution,
        witness: Witness {
            base_value: vec![base_eval],
            grid_points: rows.len(),
            grid_max: vec![rows.iter().map(|r| r.value[0]).fold(0.0, f64::max)],
            violations: rows.iter().filter(|r| r.value[0] < 0.5).count(),
            image: Some(format!("every decomposition has alpha(phi) >= {smallest}")),
            separation: smallest - 0.5,
        },
    };
    Ok((report, rows))
}

/// Writes grid rows as CSV text with header `inputs...,value`.
pub fn grid_csv_header(case: Counterexample) -> Vec<String> {
    let names: &[&str] = match case {
        Counterexample::SectionInterval => &["x", "y", "t", "p", "value"],
        Counterexample::MinSquare => &["x0", "x1", "y0", "y1", "t", "p", "value0", "value1"],
        Counterexample::TwoPointJoin => &["alpha0", "alpha1", "beta0", "beta1", "value"],
    };
    names.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DiagramKind {
    PushforwardComm,
    BarycenterCom,
    Affine,
    DiracSection,
}

impl DiagramKind {
    pub const ALL: [DiagramKind; 4] = [
        DiagramKind::PushforwardComm,
        DiagramKind::BarycenterCom,
        DiagramKind::Affine,
        DiagramKind::DiracSection,
    ];
}

impl DiagramKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagramKind::PushforwardComm => "pushforwardComm",
            DiagramKind::BarycenterCom => "barycenterCom",
            DiagramKind::Affine => "affine",
            DiagramKind::DiracSection => "diracSection",
        }
    }
}

impl FromStr for DiagramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pushforwardComm" => Ok(DiagramKind::PushforwardComm),
            "barycenterCom" => Ok(DiagramKind::BarycenterCom),
            "affine" => Ok(DiagramKind::Affine),
            "diracSection" => Ok(DiagramKind::DiracSection),
            other => Err(Error::InvalidInstance(format!("unknown diagram {other:?}"))),
        }
    }
}

/// Input of one diagram check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum DiagramInstance {
    /// `f_*(t ⊙ mu ⊕ p ⊙ nu) = t ⊙ f_* mu ⊕ p ⊙ f_* nu`.
    PushforwardComm {
        map: SpaceMap,
        left: IdempotentMeasure,
        right: IdempotentMeasure,
        weights: WeightPair,
    },
    /// Barycenter of a combination equals the combination of barycenters.
    BarycenterCom {
        support: Vec<CubePoint>,
        left: IdempotentMeasure,
        right: IdempotentMeasure,
        weights: WeightPair,
    },
    /// `β(⊕ rho_k ⊙ mu_k) = ⊕ rho_k ⊙ β(mu_k)`.
    Affine {
        support: Vec<CubePoint>,
        measures: Vec<IdempotentMeasure>,
        weights: Vec<f64>,
    },
    /// The barycenter of the image of `mu` under the Dirac embedding is
    /// `mu`, tested on the indicators and the given functions.
    DiracSection {
        measure: IdempotentMeasure,
        tests: Vec<FunctionOnSpace>,
    },
}

impl DiagramInstance {
    pub fn kind(&self) -> DiagramKind {
        match self {
            DiagramInstance::PushforwardComm { .. } => DiagramKind::PushforwardComm,
            DiagramInstance::BarycenterCom { .. } => DiagramKind::BarycenterCom,
            DiagramInstance::Affine { .. } => DiagramKind::Affine,
            DiagramInstance::DiracSection { .. } => DiagramKind::DiracSection,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramReport {
    pub kind: DiagramKind,
    /// Sup-norm gap between the two composite paths.
    pub gap: f64,
    pub pass: bool,
}

fn embed(support: &[CubePoint], m: &IdempotentMeasure) -> Result<EmbeddedMeasure> {
    EmbeddedMeasure::new(m.clone(), support.to_vec())
}

/// Evaluates both paths of the diagram and compares them.
pub fn check_diagram(instance: &DiagramInstance) -> Result<DiagramReport> {
    let gap = match instance {
        DiagramInstance::PushforwardComm {
            map,
            left,
            right,
            weights,
        } => {
            let down = left.combine(right, *weights)?.pushforward(map)?;
            let across = left.pushforward(map)?.combine(&right.pushforward(map)?, *weights)?;
            down.distance(&across)?
        }
        DiagramInstance::BarycenterCom {
            support,
            left,
            right,
            weights,
        } => {
            let combined = barycenter(&embed(support, &left.combine(right, *weights)?)?)?;
            let separate = combine_points(
                &barycenter(&embed(support, left)?)?,
                &barycenter(&embed(support, right)?)?,
                *weights,
                left.tnorm(),
            )?;
            combined.distance(&separate)
        }
        DiagramInstance::Affine {
            support,
            measures,
            weights,
        } => {
            let mixed = IdempotentMeasure::combine_many(measures, weights)?;
            let lhs = barycenter(&embed(support, &mixed)?)?;
            let points = measures
                .iter()
                .map(|m| barycenter(&embed(support, m)?))
                .collect::<Result<Vec<_>>>()?;
            let rhs = n_ary_combine(&points, weights, mixed.tnorm())?;
            lhs.distance(&rhs)
        }
        DiagramInstance::DiracSection { measure, tests } => {
            let n = measure.len();
            let mut functions = (0..n)
                .map(|i| FunctionOnSpace::indicator(n, i))
                .collect::<Result<Vec<_>>>()?;
            for f in tests {
                if f.len() != n {
                    return Err(Error::SpaceMismatch {
                        left: n,
                        right: f.len(),
                    });
                }
                functions.push(f.clone());
            }
            // delta_x sits at (phi(x))_phi in the cube of test functions.
            let support = (0..n)
                .map(|x| CubePoint::new(functions.iter().map(|f| f.values()[x]).collect()))
                .collect::<Result<Vec<_>>>()?;
            let bary = barycenter(&embed(&support, measure)?)?;
            let direct = functions
                .iter()
                .map(|f| measure.eval(f))
                .collect::<Result<Vec<_>>>()?;
            let recovered = &bary.coords()[..n];
            sup_distance(bary.coords(), &direct).max(sup_distance(recovered, measure.density()))
        }
    };
    Ok(DiagramReport {
        kind: instance.kind(),
        gap,
        pass: gap <= TOL,
    })
}

/// Aggregate of a randomized suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteSummary {
    pub name: String,
    pub tnorm: String,
    pub instances: usize,
    pub max_gap: f64,
    /// Instances whose gap exceeded the threshold.
    pub failures: usize,
    /// Instances that raised an error, with the first message.
    pub errors: usize,
    pub first_error: Option<String>,
    pub threshold: f64,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.errors == 0
    }
}

/// Runs `count` instances of `check`, each with its own seeded stream, and
/// aggregates the gaps.
pub fn run_suite<F>(
    name: &str,
    tnorm: &TNormSpec,
    count: usize,
    seed: u64,
    threshold: f64,
    exec: Exec,
    check: F,
) -> SuiteSummary
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let results = exec.map(count, |k| check(&mut crate::sample::rng_for(seed, k as u64)));
    let mut summary = SuiteSummary {
        name: name.to_string(),
        tnorm: tnorm.name(),
        instances: count,
        max_gap: 0.0,
        failures: 0,
        errors: 0,
        first_error: None,
        threshold,
    };
    for r in results {
        match r {
            Ok(gap) => {
                summary.max_gap = summary.max_gap.max(gap);
                // NaN gaps count as failures
                if gap.is_nan() || gap > threshold {
                    summary.failures += 1;
                }
            }
            Err(e) => {
                summary.errors += 1;
                summary.first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    summary
}

/// Random instance of a diagram law on small spaces.
pub fn random_diagram<R: rand::Rng>(
    rng: &mut R,
    kind: DiagramKind,
    tnorm: &TNormSpec,
) -> Result<DiagramInstance> {
    use crate::sample;
    let n = rng.gen_range(1..=5);
    Ok(match kind {
        DiagramKind::PushforwardComm => {
            let m = rng.gen_range(1..=n);
            DiagramInstance::PushforwardComm {
                map: sample::onto_map(rng, n, m)?,
                left: sample::measure(rng, n, tnorm)?,
                right: sample::measure(rng, n, tnorm)?,
                weights: sample::weight_pair(rng, sample::DENOM),
            }
        }
        DiagramKind::BarycenterCom => {
            let dim = rng.gen_range(1..=3);
            DiagramInstance::BarycenterCom {
                support: (0..n)
                    .map(|_| sample::point(rng, dim, sample::DENOM))
                    .collect::<Result<_>>()?,
                left: sample::measure(rng, n, tnorm)?,
                right: sample::measure(rng, n, tnorm)?,
                weights: sample::weight_pair(rng, sample::DENOM),
            }
        }
        DiagramKind::Affine => {
            let dim = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=4);
            DiagramInstance::Affine {
                support: (0..n)
                    .map(|_| sample::point(rng, dim, sample::DENOM))
                    .collect::<Result<_>>()?,
                measures: (0..k).map(|_| sample::measure(rng, n, tnorm)).collect::<Result<_>>()?,
                weights: sample::density(rng, k, sample::DENOM),
            }
        }
        DiagramKind::DiracSection => DiagramInstance::DiracSection {
            measure: sample::measure(rng, n, tnorm)?,
            tests: (0..3).map(|_| sample::function(rng, n)).collect::<Result<_>>()?,
        },
    })
}

/// Randomized suite for one diagram law.
pub fn diagram_suite(kind: DiagramKind, tnorm: &TNormSpec, count: usize, seed: u64, exec: Exec) -> SuiteSummary {
    run_suite(kind.name(), tnorm, count, seed, TOL, exec, |rng| {
        Ok(check_diagram(&random_diagram(rng, kind, tnorm)?)?.gap)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_sup_examples() {
        let (report, _) = verify_counterexample_with(
            Counterexample::SectionInterval,
            &TNormSpec::SectionT,
            1.0 / 64.0,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(report.bound, Some(vec![0.5]));

        let b = InputBox {
            x: vec![Interval::point(0.3).unwrap()],
            y: vec![Interval::point(0.6).unwrap()],
            t: Interval::point(1.0).unwrap(),
            p: Interval::point(0.5).unwrap(),
            j_constrained: true,
        };
        assert_eq!(box_sup(&TNormSpec::Product, &b).unwrap(), vec![0.3]);
    }

    #[test]
    fn interval_grid_respects_openness() {
        let iv = Interval::new(0.25, 0.75, false, true).unwrap();
        let g = iv.grid(4);
        assert_eq!(g, vec![0.5, 0.75]);
        assert!(Interval::open(0.5, 0.5).is_err());
        assert!(Interval::closed(0.6, 0.5).is_err());
    }

    #[test]
    fn counterexamples_at_default_resolution() {
        let r = verify_counterexample(Counterexample::SectionInterval, 1.0 / 64.0).unwrap();
        assert_eq!(r.verdict, Verdict::RefutedOpen);
        assert_eq!(r.targets, vec![vec![0.625], vec![0.5625], vec![0.53125]]);

        let r = verify_counterexample(Counterexample::MinSquare, 1.0 / 64.0).unwrap();
        assert_eq!(r.verdict, Verdict::RefutedOpen);
        assert_eq!(r.witness.violations, 0);

        let r = verify_counterexample(Counterexample::TwoPointJoin, 1.0 / 64.0).unwrap();
        assert_eq!(r.verdict, Verdict::RefutedOpen);
        assert!(r.witness.grid_points > 0);
    }

    #[test]
    fn resolution_checks() {
        for bad in [0.25, 0.3, 0.0, -0.125] {
            assert!(matches!(
                verify_counterexample(Counterexample::SectionInterval, bad),
                Err(Error::InvalidGridStep(_))
            ));
        }
        let r = verify_counterexample(Counterexample::SectionInterval, 0.125).unwrap();
        assert_eq!(r.targets, vec![vec![0.625]]);
    }

    #[test]
    fn min_square_is_inconclusive_under_product() {
        let (r, _) = verify_counterexample_with(
            Counterexample::MinSquare,
            &TNormSpec::Product,
            1.0 / 16.0,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn diagram_examples() {
        let tn = TNormSpec::Product;
        let inst = DiagramInstance::PushforwardComm {
            map: SpaceMap::from_image(vec![0, 1, 1], 2).unwrap(),
            left: IdempotentMeasure::from_density(vec![0.25, 1.0, 0.5], tn.clone()).unwrap(),
            right: IdempotentMeasure::from_density(vec![1.0, 0.125, 0.75], tn.clone()).unwrap(),
            weights: WeightPair::new(0.5, 1.0).unwrap(),
        };
        let r = check_diagram(&inst).unwrap();
        assert!(r.pass);
        assert_eq!(r.gap, 0.0);

        let inst = DiagramInstance::DiracSection {
            measure: IdempotentMeasure::from_density(vec![0.25, 1.0, 0.5, 0.0], TNormSpec::Min)
                .unwrap(),
            tests: vec![],
        };
        assert!(check_diagram(&inst).unwrap().pass);
    }

    #[test]
    fn diagram_json_roundtrip() {
        let text = r#"{"kind":"diracSection","measure":{"space":{"n":2},"tnorm":{"kind":"min"},"density":[1,0.5]},"tests":[{"values":[0.25,1]}]}"#;
        let inst: DiagramInstance = serde_json::from_str(text).unwrap();
        assert_eq!(inst.kind(), DiagramKind::DiracSection);
        let back: DiagramInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
    }
}
