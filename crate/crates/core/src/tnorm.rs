//! Continuous t-norms: evaluation, residuation and law checking.
//!
//! A t-norm `*` is the "multiplication" of the max-`*` semiring on `[0,1]`.
//! Every other module is parameterized by a [`TNormSpec`]. Only continuous
//! t-norms are representable: the builtin minimum, product and Łukasiewicz
//! norms, and ordinal sums of continuous t-norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;

/// Absolute tolerance for scalar equality checks.
pub const TOL: f64 = 1e-9;

/// Tolerance used when checking the normalization `max = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-12;

/// One summand of an ordinal sum: `inner` rescaled onto `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summand {
    pub a: f64,
    pub b: f64,
    pub inner: TNormSpec,
}

/// Validated list of ordinal-sum summands, sorted by interval.
///
/// Adjacent intervals may share an endpoint; interiors are disjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct OrdinalSum {
    summands: Vec<Summand>,
}

impl OrdinalSum {
    pub fn new(summands: Vec<Summand>) -> Result<Self> {
        let mut prev_b = 0.0;
        for (k, s) in summands.iter().enumerate() {
            if !(s.a.is_finite() && s.b.is_finite()) || s.a < 0.0 || s.b > 1.0 || s.a >= s.b {
                return Err(Error::InvalidTNorm(format!(
                    "summand {k} has invalid interval [{}, {}]",
                    s.a, s.b
                )));
            }
            if k > 0 && s.a < prev_b {
                return Err(Error::InvalidTNorm(format!(
                    "summand {k} overlaps or is out of order (starts at {} before {prev_b})",
                    s.a
                )));
            }
            prev_b = s.b;
        }
        Ok(Self { summands })
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }
}

/// Description of a continuous t-norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTNorm", into = "RawTNorm")]
pub enum TNormSpec {
    Min,
    Product,
    Lukasiewicz,
    /// Łukasiewicz rescaled onto `[1/2, 1]`, minimum elsewhere.
    SectionT,
    OrdinalSum(OrdinalSum),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
enum RawTNorm {
    Min,
    Product,
    Lukasiewicz,
    SectionT,
    OrdinalSum { summands: Vec<Summand> },
}

impl TryFrom<RawTNorm> for TNormSpec {
    type Error = Error;

    fn try_from(raw: RawTNorm) -> Result<Self> {
        Ok(match raw {
            RawTNorm::Min => TNormSpec::Min,
            RawTNorm::Product => TNormSpec::Product,
            RawTNorm::Lukasiewicz => TNormSpec::Lukasiewicz,
            RawTNorm::SectionT => TNormSpec::SectionT,
            RawTNorm::OrdinalSum { summands } => TNormSpec::OrdinalSum(OrdinalSum::new(summands)?),
        })
    }
}

impl From<TNormSpec> for RawTNorm {
    fn from(spec: TNormSpec) -> Self {
        match spec {
            TNormSpec::Min => RawTNorm::Min,
            TNormSpec::Product => RawTNorm::Product,
            TNormSpec::Lukasiewicz => RawTNorm::Lukasiewicz,
            TNormSpec::SectionT => RawTNorm::SectionT,
            TNormSpec::OrdinalSum(o) => RawTNorm::OrdinalSum { summands: o.summands },
        }
    }
}

static LUKASIEWICZ: TNormSpec = TNormSpec::Lukasiewicz;

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")))
    }
}

impl TNormSpec {
    /// The four t-norms shipped with the library.
    pub fn builtins() -> [TNormSpec; 4] {
        [
            TNormSpec::Min,
            TNormSpec::Product,
            TNormSpec::Lukasiewicz,
            TNormSpec::SectionT,
        ]
    }

    pub fn ordinal_sum(summands: Vec<Summand>) -> Result<Self> {
        Ok(TNormSpec::OrdinalSum(OrdinalSum::new(summands)?))
    }

    /// `SectionT` written out as an explicit ordinal sum.
    pub fn section_t_as_ordinal_sum() -> Self {
        TNormSpec::OrdinalSum(OrdinalSum {
            summands: vec![Summand {
                a: 0.5,
                b: 1.0,
                inner: TNormSpec::Lukasiewicz,
            }],
        })
    }

    pub fn name(&self) -> String {
        match self {
            TNormSpec::Min => "min".into(),
            TNormSpec::Product => "product".into(),
            TNormSpec::Lukasiewicz => "lukasiewicz".into(),
            TNormSpec::SectionT => "sectionT".into(),
            TNormSpec::OrdinalSum(o) => {
                let parts: Vec<String> = o
                    .summands
                    .iter()
                    .map(|s| format!("[{},{}]:{}", s.a, s.b, s.inner.name()))
                    .collect();
                format!("ordinalSum({})", parts.join(","))
            }
        }
    }

    /// The summand whose closed interval contains both arguments, if any.
    fn common_summand(&self, s: f64, p: f64) -> Option<(f64, f64, &TNormSpec)> {
        match self {
            TNormSpec::SectionT => {
                (s >= 0.5 && p >= 0.5).then_some((0.5, 1.0, &LUKASIEWICZ))
            }
            TNormSpec::OrdinalSum(o) => o
                .summands
                .iter()
                .find(|m| m.a <= s && s <= m.b && m.a <= p && p <= m.b)
                .map(|m| (m.a, m.b, &m.inner)),
            _ => None,
        }
    }

    /// `s * p` without domain checks. Arguments must lie in `[0, 1]`.
    pub fn apply(&self, s: f64, p: f64) -> f64 {
        if s >= 1.0 {
            return p;
        }
        if p >= 1.0 {
            return s;
        }
        if s <= 0.0 || p <= 0.0 {
            return 0.0;
        }
        match self {
            TNormSpec::Min => s.min(p),
            TNormSpec::Product => s * p,
            TNormSpec::Lukasiewicz => (s + p - 1.0).max(0.0),
            TNormSpec::SectionT | TNormSpec::OrdinalSum(_) => match self.common_summand(s, p) {
                Some((a, b, inner)) => {
                    let w = b - a;
                    a + w * inner.apply((s - a) / w, (p - a) / w)
                }
                None => s.min(p),
            },
        }
    }

    /// Checked evaluation of `s * p`.
    pub fn evaluate(&self, s: f64, p: f64) -> Result<f64> {
        check_unit("s", s)?;
        check_unit("p", p)?;
        Ok(self.apply(s, p))
    }

    fn residual_unchecked(&self, a: f64, b: f64) -> f64 {
        if a <= b {
            return 1.0;
        }
        match self {
            TNormSpec::Min => b,
            TNormSpec::Product => b / a,
            TNormSpec::Lukasiewicz => (1.0 - a + b).min(1.0),
            TNormSpec::SectionT | TNormSpec::OrdinalSum(_) => match self.common_summand(a, b) {
                Some((lo, hi, inner)) => {
                    let w = hi - lo;
                    lo + w * inner.residual_unchecked((a - lo) / w, (b - lo) / w)
                }
                None => b,
            },
        }
    }

    /// Residuum `sup { l : a * l <= b }`.
    pub fn residual(&self, a: f64, b: f64) -> Result<f64> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(self.residual_unchecked(a, b))
    }

    fn lower_inverse_unchecked(&self, a: f64, b: f64) -> f64 {
        if b <= 0.0 {
            return 0.0;
        }
        match self {
            TNormSpec::Min => b,
            TNormSpec::Product => (b / a).min(1.0),
            TNormSpec::Lukasiewicz => (1.0 - a + b).min(1.0),
            TNormSpec::SectionT | TNormSpec::OrdinalSum(_) => match self.common_summand(a, b) {
                Some((lo, hi, inner)) => {
                    let w = hi - lo;
                    lo + w * inner.lower_inverse_unchecked((a - lo) / w, (b - lo) / w)
                }
                None => b,
            },
        }
    }

    /// Level set `{ l : t * l = v }` as a closed interval `[inf, sup]`.
    ///
    /// Requires `v <= t`; values above `t` by at most [`TOL`] are clamped.
    pub fn level_set(&self, t: f64, v: f64) -> Result<(f64, f64)> {
        check_unit("t", t)?;
        check_unit("v", v)?;
        if v > t + TOL {
            return Err(Error::Domain(format!(
                "level {v} is unreachable: t * l <= t = {t} for every l"
            )));
        }
        let v = v.min(t);
        let hi = self.residual_unchecked(t, v);
        let lo = self.lower_inverse_unchecked(t, v).min(hi);
        for k in [lo, hi] {
            let got = self.apply(t, k);
            if (got - v).abs() > TOL {
                return Err(Error::ConstructionFailed(format!(
                    "{}: t * {k} = {got}, expected {v}",
                    self.name()
                )));
            }
        }
        Ok((lo, hi))
    }

    /// `sup { l : t * l = v }`, the largest solution of `t * l = v`.
    pub fn pseudo_inverse(&self, t: f64, v: f64) -> Result<f64> {
        self.level_set(t, v).map(|(_, hi)| hi)
    }

    /// Bisection for `sup { l : t * l <= v }` on the monotone map `l -> t * l`.
    ///
    /// Independent of the closed forms; used to cross-check them.
    pub fn pseudo_inverse_bisection(&self, t: f64, v: f64) -> f64 {
        if self.apply(t, 1.0) <= v {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.apply(t, mid) <= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Grid check of the t-norm laws and of max-distributivity.
    pub fn check_axioms(&self, grid_step: f64) -> Result<AxiomReport> {
        self.check_axioms_with(grid_step, Exec::default())
    }

    pub fn check_axioms_with(&self, grid_step: f64, exec: Exec) -> Result<AxiomReport> {
        let n = dyadic_denominator(grid_step).filter(|&n| n >= 4);
        let Some(n) = n else {
            return Err(Error::InvalidGridStep(grid_step));
        };
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let g = &grid;
        let rows = exec.map(grid.len(), |i| {
            let s = g[i];
            let mut v = LawViolations {
                unit: (self.apply(s, 1.0) - s).abs().max((self.apply(1.0, s) - s).abs()),
                zero: self.apply(s, 0.0).abs().max(self.apply(0.0, s).abs()),
                ..LawViolations::default()
            };
            for (j, &p) in g.iter().enumerate() {
                let sp = self.apply(s, p);
                v.commutativity = v.commutativity.max((sp - self.apply(p, s)).abs());
                if j + 1 < g.len() {
                    v.monotonicity = v.monotonicity.max(sp - self.apply(s, g[j + 1]));
                }
                if i + 1 < g.len() {
                    v.monotonicity = v.monotonicity.max(sp - self.apply(g[i + 1], p));
                }
                for &l in g {
                    let left = self.apply(sp, l);
                    let right = self.apply(s, self.apply(p, l));
                    v.associativity = v.associativity.max((left - right).abs());
                    let join = self.apply(s.max(p), l);
                    let split = self.apply(s, l).max(self.apply(p, l));
                    v.distributivity = v.distributivity.max((join - split).abs());
                }
            }
            v
        });
        let total = rows.into_iter().fold(LawViolations::default(), LawViolations::merge);
        let max_violation = total.max();
        Ok(AxiomReport {
            tnorm: self.name(),
            grid_step,
            commutativity: total.commutativity,
            associativity: total.associativity,
            monotonicity: total.monotonicity.max(0.0),
            unit: total.unit,
            zero: total.zero,
            distributivity: total.distributivity,
            max_violation,
            pass: max_violation <= TOL,
        })
    }
}

/// Returns `n` when `step == 1/n` with `n` a power of two.
pub fn dyadic_denominator(step: f64) -> Option<usize> {
    if !(step > 0.0 && step <= 1.0) {
        return None;
    }
    let inv = 1.0 / step;
    let n = inv.round();
    if n > (1u64 << 30) as f64 || (n * step - 1.0).abs() > 1e-15 {
        return None;
    }
    let n = n as usize;
    n.is_power_of_two().then_some(n)
}

#[derive(Clone, Copy, Debug, Default)]
struct LawViolations {
    commutativity: f64,
    associativity: f64,
    monotonicity: f64,
    unit: f64,
    zero: f64,
    distributivity: f64,
}

impl LawViolations {
    fn merge(self, o: Self) -> Self {
        Self {
            commutativity: self.commutativity.max(o.commutativity),
            associativity: self.associativity.max(o.associativity),
            monotonicity: self.monotonicity.max(o.monotonicity),
            unit: self.unit.max(o.unit),
            zero: self.zero.max(o.zero),
            distributivity: self.distributivity.max(o.distributivity),
        }
    }

    fn max(&self) -> f64 {
        [
            self.commutativity,
            self.associativity,
            self.monotonicity,
            self.unit,
            self.zero,
            self.distributivity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Per-law maximum violation over a dyadic grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub tnorm: String,
    pub grid_step: f64,
    pub commutativity: f64,
    pub associativity: f64,
    pub monotonicity: f64,
    pub unit: f64,
    pub zero: f64,
    pub distributivity: f64,
    pub max_violation: f64,
    pub pass: bool,
}

impl fmt::Display for TNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for TNormSpec {
    type Err = Error;

    /// Accepts a builtin name or a JSON-free shorthand.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" | "minimum" => Ok(TNormSpec::Min),
            "product" | "prod" => Ok(TNormSpec::Product),
            "lukasiewicz" | "luk" => Ok(TNormSpec::Lukasiewicz),
            "sectiont" | "t" => Ok(TNormSpec::SectionT),
            other => Err(Error::InvalidTNorm(format!("unknown t-norm name {other:?}"))),
        }
    }
}
