//! Decision procedures on the weighted filtration.
//!
//! Symbolic coefficient families (separable `α(m)β(n)` and diagonal
//! `γ(m)δ_mn`) have closed-form convergence tests for every weighted norm,
//! so membership in `G_{s,t}`, `I_{s,t}`, `B_{s,t}` and the Moyal classes
//! `M_L`, `M_R`, `M` can be decided exactly. Truncated matrices only carry
//! norms at their truncation order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{frobenius_sq, involute, norm, CoefficientMatrix, NormKind, WeightPair};
use crate::error::{Error, Result};
use crate::special::{exp_weighted_sum, odd_power_sum, oddzeta};

/// A scalar sequence `α(m)`, `m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecayFamily {
    /// `e^{−a m}` with `a > 0`.
    Exponential { rate: f64 },
    /// `(2m+1)^p`.
    Power { p: f64 },
    /// `1`.
    Constant,
}

impl DecayFamily {
    pub fn exponential(rate: f64) -> Result<Self> {
        if rate > 0.0 && rate.is_finite() {
            Ok(Self::Exponential { rate })
        } else {
            Err(Error::Parse(format!("exponential rate must be positive, got {rate}")))
        }
    }

    pub fn value(&self, m: usize) -> f64 {
        let base = 2.0 * m as f64 + 1.0;
        match *self {
            Self::Exponential { rate } => (-rate * m as f64).exp(),
            Self::Power { p } => base.powf(p),
            Self::Constant => 1.0,
        }
    }

    /// Power-law exponent of `α(m)` in `(2m+1)`, or `None` for exponential
    /// decay.
    fn growth(&self) -> Option<f64> {
        match *self {
            Self::Exponential { .. } => None,
            Self::Power { p } => Some(p),
            Self::Constant => Some(0.0),
        }
    }

    fn is_exponential(&self) -> bool {
        self.growth().is_none()
    }

    /// `Σ_m (2m+1)^w |α(m)|^k`, or the divergent exponent.
    fn series(&self, w: f64, k: f64) -> std::result::Result<f64, f64> {
        match *self {
            Self::Exponential { rate } => Ok(exp_weighted_sum(w, k * rate)),
            _ => {
                let exponent = w + k * self.growth().unwrap_or(0.0);
                odd_power_sum(exponent).map_err(|_| exponent)
            }
        }
    }

    /// `sup_m (2m+1)^w |α(m)|`, or the unbounded exponent.
    fn sup(&self, w: f64) -> std::result::Result<f64, f64> {
        match *self {
            Self::Exponential { rate } => {
                // (2m+1)^w e^{−am} increases until 2m+1 ≈ 2w/a, then decays.
                let peak = if w > 0.0 { (w / rate).ceil() as usize + 1 } else { 0 };
                Ok((0..=peak).map(|m| (2.0 * m as f64 + 1.0).powf(w) * self.value(m)).fold(0.0, f64::max))
            }
            _ => {
                let exponent = w + self.growth().unwrap_or(0.0);
                if exponent <= 0.0 {
                    Ok(1.0)
                } else {
                    Err(exponent)
                }
            }
        }
    }

    /// The weight `t` making `Σ (2n+1)^t |α(n)|²` converge: `0` for
    /// exponential decay, otherwise one unit below the threshold.
    fn convergent_weight(&self) -> f64 {
        match self.growth() {
            None => 0.0,
            Some(p) => -2.0 - 2.0 * p,
        }
    }
}

impl fmt::Display for DecayFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { rate } => write!(f, "exp({rate:?})"),
            Self::Power { p } => write!(f, "pow({p:?})"),
            Self::Constant => write!(f, "one"),
        }
    }
}

/// Coefficients of `Σ c_mn f_mn`, symbolic or truncated.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientModel {
    /// `c_mn = α(m) β(n)`.
    Separable {
        alpha: DecayFamily,
        beta: DecayFamily,
    },
    /// `c_mn = γ(m) δ_mn`.
    Diagonal {
        gamma: DecayFamily,
    },
    Truncated {
        matrix: CoefficientMatrix,
    },
}

impl CoefficientModel {
    /// The model of `T*`. Families are real, so conjugation only swaps
    /// the roles of rows and columns.
    pub fn involute(&self) -> Self {
        match self {
            Self::Separable { alpha, beta } => Self::Separable { alpha: *beta, beta: *alpha },
            Self::Diagonal { gamma } => Self::Diagonal { gamma: *gamma },
            Self::Truncated { matrix } => Self::Truncated { matrix: involute(matrix) },
        }
    }

    /// The model's coefficients for `m, n < order`.
    pub fn truncate(&self, order: usize) -> CoefficientMatrix {
        match self {
            Self::Separable { alpha, beta } => {
                CoefficientMatrix::from_fn(order, |m, n| Complex64::new(alpha.value(m) * beta.value(n), 0.0))
            }
            Self::Diagonal { gamma } => CoefficientMatrix::from_fn(order, |m, n| {
                Complex64::new(if m == n { gamma.value(m) } else { 0.0 }, 0.0)
            }),
            Self::Truncated { matrix } => matrix.truncated(order.min(matrix.order())).padded(order),
        }
    }
}

impl fmt::Display for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Separable { alpha, beta } => write!(f, "sep({alpha}, {beta})"),
            Self::Diagonal { gamma } => write!(f, "diag({gamma})"),
            Self::Truncated { matrix } => write!(f, "truncated(order {})", matrix.order()),
        }
    }
}

fn parse_call<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')').map(str::trim)
}

fn parse_number(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("expected a number, got `{text}`")))
}

impl FromStr for DecayFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "one" || s == "const" {
            return Ok(Self::Constant);
        }
        if let Some(arg) = parse_call(s, "exp") {
            return Self::exponential(parse_number(arg)?);
        }
        if let Some(arg) = parse_call(s, "pow") {
            return Ok(Self::Power { p: parse_number(arg)? });
        }
        Err(Error::Parse(format!("unknown decay family `{s}`; expected exp(a), pow(p) or one")))
    }
}

/// Grammar: `sep(F, F)`, `diag(F)`, or a bare family `F` (read as the
/// separable model `sep(F, F)`), where `F` is `exp(a)`, `pow(p)` or `one`.
impl FromStr for CoefficientModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(args) = parse_call(s, "sep") {
            let (a, b) =
                args.split_once(',').ok_or_else(|| Error::Parse(format!("sep needs two families: `{s}`")))?;
            return Ok(Self::Separable { alpha: a.parse()?, beta: b.parse()? });
        }
        if let Some(arg) = parse_call(s, "diag") {
            return Ok(Self::Diagonal { gamma: arg.parse()? });
        }
        let family: DecayFamily = s.parse()?;
        Ok(Self::Separable { alpha: family, beta: family })
    }
}

/// Outcome of a symbolic norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NormOutcome {
    /// The series converges; `squared` is `‖·‖²`.
    Finite { squared: f64 },
    /// The named sub-series has a power-law term `(2m+1)^exponent` with
    /// `exponent ≥ −1`.
    Divergent { factor: SeriesFactor, exponent: f64 },
}

impl NormOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn norm(&self) -> Option<f64> {
        match self {
            Self::Finite { squared } => Some(squared.sqrt()),
            Self::Divergent { .. } => None,
        }
    }
}

/// Which one-dimensional series of a model carries a divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFactor {
    Row,
    Column,
    Diagonal,
}

/// `‖T‖²_{st} = Σ (2m+1)^s (2n+1)^t |c_mn|²` for a symbolic model.
pub fn gst_norm_model(model: &CoefficientModel, s: f64, t: f64) -> Result<NormOutcome> {
    let divergent = |factor| move |exponent| NormOutcome::Divergent { factor, exponent };
    Ok(match model {
        CoefficientModel::Separable { alpha, beta } => match (alpha.series(s, 2.0), beta.series(t, 2.0)) {
            (Ok(a), Ok(b)) => NormOutcome::Finite { squared: a * b },
            (Err(e), _) => divergent(SeriesFactor::Row)(e),
            (_, Err(e)) => divergent(SeriesFactor::Column)(e),
        },
        CoefficientModel::Diagonal { gamma } => match gamma.series(s + t, 2.0) {
            Ok(v) => NormOutcome::Finite { squared: v },
            Err(e) => divergent(SeriesFactor::Diagonal)(e),
        },
        CoefficientModel::Truncated { .. } => {
            return Err(Error::WrongVariant("symbolic model (sep or diag) required"))
        }
    })
}

/// How a Moyal-class verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// For every first weight `u`, the second weight `slope·u + offset`
    /// gives a finite norm.
    WeightMap { slope: f64, offset: f64 },
    /// At this first weight, no second weight gives a finite norm.
    FailingWeight { at: f64 },
}

impl Witness {
    pub fn map(&self, u: f64) -> Option<f64> {
        match *self {
            Self::WeightMap { slope, offset } => Some(slope * u + offset),
            Self::FailingWeight { .. } => None,
        }
    }
}

/// Membership in `M_L = ∩_s ∪_t G_{s,t}`, `M_R = ∩_t ∪_s G_{s,t}` and
/// `M = M_L ∩ M_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoyalVerdict {
    #[serde(rename = "ML")]
    pub in_ml: bool,
    #[serde(rename = "MR")]
    pub in_mr: bool,
    #[serde(rename = "M")]
    pub in_m: bool,
    /// `s ↦ t(s)`, or the failing `s`.
    pub ml_witness: Witness,
    /// `t ↦ s(t)`, or the failing `t`.
    pub mr_witness: Witness,
}

/// Decides `∀u ∃v: ‖·‖ < ∞` where `lead` is weighted by `u` and `other`
/// by `v`, for a separable model.
fn separable_witness(lead: &DecayFamily, other: &DecayFamily) -> Witness {
    match lead.growth() {
        None => Witness::WeightMap { slope: 0.0, offset: other.convergent_weight() },
        Some(p) => Witness::FailingWeight { at: -1.0 - 2.0 * p },
    }
}

pub fn moyal_membership(model: &CoefficientModel) -> Result<MoyalVerdict> {
    let (ml, mr) = match model {
        CoefficientModel::Separable { alpha, beta } => {
            (separable_witness(alpha, beta), separable_witness(beta, alpha))
        }
        CoefficientModel::Diagonal { gamma } => {
            // Σ (2m+1)^{s+t} |γ(m)|² converges once s + t is small enough.
            let w = if gamma.is_exponential() {
                Witness::WeightMap { slope: 0.0, offset: 0.0 }
            } else {
                Witness::WeightMap { slope: -1.0, offset: gamma.convergent_weight() }
            };
            (w, w)
        }
        CoefficientModel::Truncated { .. } => {
            return Err(Error::WrongVariant("symbolic model (sep or diag) required"))
        }
    };
    let in_ml = ml.map(0.0).is_some();
    let in_mr = mr.map(0.0).is_some();
    Ok(MoyalVerdict { in_ml, in_mr, in_m: in_ml && in_mr, ml_witness: ml, mr_witness: mr })
}

/// The three weighted families of the filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Trace-class type: `‖·‖_{st,1}`.
    I,
    /// Hilbert–Schmidt type: `‖·‖_{st}`.
    G,
    /// Bounded type: `‖·‖_{st,∞}`.
    B,
}

impl Family {
    fn rank(self) -> u8 {
        match self {
            Self::I => 0,
            Self::G => 1,
            Self::B => 2,
        }
    }
}

/// A space of the filtration or one of its limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpaceTag {
    Weighted(Family, WeightPair),
    ML,
    MR,
    M,
    /// Schwartz space `S₂`.
    S2,
    /// Tempered distributions `S′₂`.
    S2Dual,
}

impl SpaceTag {
    pub fn g(s: f64, t: f64) -> Self {
        Self::Weighted(Family::G, WeightPair::new(s, t))
    }

    pub fn i(s: f64, t: f64) -> Self {
        Self::Weighted(Family::I, WeightPair::new(s, t))
    }

    pub fn b(s: f64, t: f64) -> Self {
        Self::Weighted(Family::B, WeightPair::new(s, t))
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Weighted(family, w) => write!(f, "{family:?}_{{{},{}}}", w.s, w.t),
            Self::ML => write!(f, "M_L"),
            Self::MR => write!(f, "M_R"),
            Self::M => write!(f, "M"),
            Self::S2 => write!(f, "S2"),
            Self::S2Dual => write!(f, "S2'"),
        }
    }
}

/// `G(s,t)`, `I(s,t)`, `B(s,t)`, `ML`, `MR`, `M`, `S2` or `S2'`.
impl FromStr for SpaceTag {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "ML" | "M_L" => return Ok(Self::ML),
            "MR" | "M_R" => return Ok(Self::MR),
            "M" => return Ok(Self::M),
            "S2" => return Ok(Self::S2),
            "S2'" | "S2dual" => return Ok(Self::S2Dual),
            _ => {}
        }
        for (name, family) in [("G", Family::G), ("I", Family::I), ("B", Family::B)] {
            if let Some(args) = parse_call(text, name) {
                let (s, t) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("{name} needs two weights: `{text}`")))?;
                return Ok(Self::Weighted(family, WeightPair::new(parse_number(s)?, parse_number(t)?)));
            }
        }
        Err(Error::Parse(format!("unknown space `{text}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inclusion {
    Included,
    /// No rule applies. This is not a claim that the inclusion fails.
    NotImpliedByRules,
}

/// Sufficient conditions for `a ⊆ b`: the chain `I ⊆ G ⊆ B` at equal
/// weights, monotonicity in decreasing weights, `B_{p,q} ⊆ I_{s,t}` for
/// `p > s + 2, q > t + 2`, `M ⊆ M_L, M_R`, and `S₂ ⊆ · ⊆ S′₂`.
pub fn space_inclusion(a: SpaceTag, b: SpaceTag) -> Inclusion {
    use SpaceTag::*;
    let included = match (a, b) {
        _ if a == b => true,
        (S2, _) | (_, S2Dual) => true,
        (M, ML) | (M, MR) => true,
        (Weighted(fa, wa), Weighted(fb, wb)) => {
            let chain = fa.rank() <= fb.rank() && wa.s >= wb.s && wa.t >= wb.t;
            let jump = wa.s > wb.s + 2.0 && wa.t > wb.t + 2.0;
            chain || jump
        }
        _ => false,
    };
    if included {
        Inclusion::Included
    } else {
        Inclusion::NotImpliedByRules
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    In,
    Out,
    UndecidedAtTruncation,
}

/// Membership of a model in one space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub space: String,
    pub verdict: Verdict,
    /// The relevant norm when finite.
    pub norm: Option<f64>,
    /// Divergent sub-series when the verdict is `Out` for a weighted space.
    pub divergence: Option<NormOutcome>,
    /// Weight map or failing weight for the Moyal classes.
    pub witness: Option<Witness>,
    /// Set for truncated models: the norm is that of the first `N × N`
    /// coefficients.
    pub truncation: Option<usize>,
}

impl MembershipReport {
    fn weighted(space: SpaceTag, outcome: NormOutcome) -> Self {
        let finite = outcome.is_finite();
        Self {
            space: space.to_string(),
            verdict: if finite { Verdict::In } else { Verdict::Out },
            norm: outcome.norm(),
            divergence: (!finite).then_some(outcome),
            witness: None,
            truncation: None,
        }
    }
}

/// Trace norm `Σ_m (2m+1)^{(s+t)/2} |γ(m)|` or operator norm (the sup) of
/// a diagonal model; for a separable model, which has rank one, all three
/// norms agree.
fn symbolic_norm(model: &CoefficientModel, family: Family, w: WeightPair) -> Result<NormOutcome> {
    let gamma = match (model, family) {
        (_, Family::G) | (CoefficientModel::Separable { .. }, _) => return gst_norm_model(model, w.s, w.t),
        (CoefficientModel::Diagonal { gamma }, _) => gamma,
        (CoefficientModel::Truncated { .. }, _) => {
            return Err(Error::WrongVariant("symbolic model (sep or diag) required"))
        }
    };
    let half = 0.5 * (w.s + w.t);
    let value = match family {
        Family::I => gamma.series(half, 1.0),
        _ => gamma.sup(half),
    };
    Ok(match value {
        Ok(v) => NormOutcome::Finite { squared: v * v },
        Err(exponent) => NormOutcome::Divergent { factor: SeriesFactor::Diagonal, exponent },
    })
}

/// Decides whether `model` lies in `space`. Truncated models defer to
/// [`truncated_membership`].
pub fn classify(model: &CoefficientModel, space: SpaceTag) -> Result<MembershipReport> {
    if let CoefficientModel::Truncated { matrix } = model {
        return Ok(truncated_membership(matrix, space));
    }
    let moyal = |in_class: bool, witness: Witness| MembershipReport {
        space: space.to_string(),
        verdict: if in_class { Verdict::In } else { Verdict::Out },
        norm: None,
        divergence: None,
        witness: Some(witness),
        truncation: None,
    };
    Ok(match space {
        SpaceTag::Weighted(family, w) => MembershipReport::weighted(space, symbolic_norm(model, family, w)?),
        SpaceTag::ML => {
            let v = moyal_membership(model)?;
            moyal(v.in_ml, v.ml_witness)
        }
        SpaceTag::MR => {
            let v = moyal_membership(model)?;
            moyal(v.in_mr, v.mr_witness)
        }
        SpaceTag::M => {
            let v = moyal_membership(model)?;
            let witness = if v.in_ml { v.mr_witness } else { v.ml_witness };
            moyal(v.in_m, witness)
        }
        SpaceTag::S2 => {
            // Schwartz coefficients decay faster than every power of (2m+1).
            let rapid = match model {
                CoefficientModel::Separable { alpha, beta } => {
                    alpha.is_exponential() && beta.is_exponential()
                }
                CoefficientModel::Diagonal { gamma } => gamma.is_exponential(),
                CoefficientModel::Truncated { .. } => unreachable!(),
            };
            MembershipReport {
                space: space.to_string(),
                verdict: if rapid { Verdict::In } else { Verdict::Out },
                norm: None,
                divergence: None,
                witness: None,
                truncation: None,
            }
        }
        // Every family grows at most polynomially.
        SpaceTag::S2Dual => MembershipReport {
            space: space.to_string(),
            verdict: Verdict::In,
            norm: None,
            divergence: None,
            witness: None,
            truncation: None,
        },
    })
}

/// Norm of a finite matrix in `space`. A finite sum lies in every space,
/// so the verdict is `In` unless an entry is not finite.
pub fn truncated_membership(c: &CoefficientMatrix, space: SpaceTag) -> MembershipReport {
    let kind = match space {
        SpaceTag::Weighted(Family::G, w) => NormKind::Frobenius(w),
        SpaceTag::Weighted(Family::I, w) => NormKind::Trace(w),
        SpaceTag::Weighted(Family::B, w) => NormKind::Operator(w),
        _ => NormKind::Frobenius(WeightPair::ZERO),
    };
    let finite = c.is_finite();
    MembershipReport {
        space: space.to_string(),
        verdict: if finite { Verdict::In } else { Verdict::UndecidedAtTruncation },
        norm: finite.then(|| norm(c, kind)),
        divergence: None,
        witness: None,
        truncation: Some(c.order()),
    }
}

/// `C = g ★ h` with `g` diagonal, certifying `‖C‖_{00,1} ≤ bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCertificate {
    pub g: CoefficientMatrix,
    pub h: CoefficientMatrix,
    pub r: f64,
    /// `oddzeta(r)^{1/2} · ‖C‖_{r0}`.
    pub bound: f64,
    /// `max |(g★h − C)_mn|`.
    pub residual: f64,
    /// `‖C‖_{00,1}` from the singular values of `C`.
    pub trace_norm: f64,
    /// `‖h‖²_{00}`.
    pub h_norm_sq: f64,
    pub odd_zeta: f64,
}

/// Relative slack for comparing quantities that agree in exact arithmetic.
const ROUNDING_SLACK: f64 = 1e-12;

impl FactorizationCertificate {
    /// `‖h‖²_{00} ≤ oddzeta(r)` and `‖C‖_{00,1} ≤ bound`.
    pub fn bounds_hold(&self) -> bool {
        self.h_norm_sq <= self.odd_zeta * (1.0 + ROUNDING_SLACK)
            && self.trace_norm <= self.bound * (1.0 + ROUNDING_SLACK) + f64::MIN_POSITIVE
    }
}

/// Factorizes `C = g ★ h` with `g = Σ d_m f_mm`,
/// `d_m² = (2m+1)^r Σ_n |c_mn|²` and `h_mn = c_mn / d_m` (zero rows stay
/// zero).
pub fn trace_factorize(c: &CoefficientMatrix, r: f64) -> Result<FactorizationCertificate> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::BadExponent { r });
    }
    let odd_zeta = oddzeta(r)?;
    let order = c.order();
    let d: Vec<f64> = (0..order)
        .map(|m| {
            let row: f64 = (0..order).map(|n| c.get(m, n).norm_sqr()).sum();
            ((2.0 * m as f64 + 1.0).powf(r) * row).sqrt()
        })
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let g = CoefficientMatrix::from_fn(order, |m, n| if m == n { Complex64::new(d[m], 0.0) } else { zero });
    let h = CoefficientMatrix::from_fn(order, |m, n| if d[m] > 0.0 { c.get(m, n) / d[m] } else { zero });
    let residual = crate::coeff::star_coeff(&g, &h).max_abs_diff(c);
    Ok(FactorizationCertificate {
        bound: odd_zeta.sqrt() * norm(c, NormKind::Frobenius(WeightPair::new(r, 0.0))),
        trace_norm: norm(c, NormKind::Trace(WeightPair::ZERO)),
        h_norm_sq: frobenius_sq(&h, WeightPair::ZERO),
        g,
        h,
        r,
        residual,
        odd_zeta,
    })
}

/// Both sides of `‖C‖_{−r,0}, ‖C‖_{0,−r} ≤ oddzeta(r)^{1/2} ‖C‖_{00,∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedReport {
    pub r: f64,
    pub operator_norm: f64,
    pub bound: f64,
    pub row_weighted: f64,
    pub column_weighted: f64,
    pub holds: bool,
}

pub fn bounded_bound_check(c: &CoefficientMatrix, r: f64) -> Result<BoundedReport> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::BadExponent { r });
    }
    let operator_norm = norm(c, NormKind::Operator(WeightPair::ZERO));
    let bound = oddzeta(r)?.sqrt() * operator_norm;
    let row_weighted = norm(c, NormKind::Frobenius(WeightPair::new(-r, 0.0)));
    let column_weighted = norm(c, NormKind::Frobenius(WeightPair::new(0.0, -r)));
    let limit = bound * (1.0 + ROUNDING_SLACK) + f64::MIN_POSITIVE;
    Ok(BoundedReport {
        r,
        operator_norm,
        bound,
        row_weighted,
        column_weighted,
        holds: row_weighted <= limit && column_weighted <= limit,
    })
}

/// Regularity of functions whose weights reach `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    /// Continuous and vanishing at infinity.
    Continuous,
    /// Star products of pairs are `C₀^m`.
    ProductSmooth(u32),
}

/// Largest `m ≥ 0` with `s > 2m`, `t > 2m`, `s + t > 4m + 2`; else
/// `Continuous` when `s, t ≥ 0` and `s + t ≥ 2`; else `None`.
pub fn regularity_class(s: f64, t: f64) -> Option<Regularity> {
    let bound = (0.5 * s).min(0.5 * t).min(0.25 * (s + t - 2.0));
    if bound > 0.0 {
        let m = bound.ceil() - 1.0;
        return Some(Regularity::ProductSmooth(m.min(u32::MAX as f64) as u32));
    }
    (s >= 0.0 && t >= 0.0 && s + t >= 2.0).then_some(Regularity::Continuous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::identity_model;
    use std::f64::consts::PI;

    fn model(text: &str) -> CoefficientModel {
        text.parse().unwrap()
    }

    #[test]
    fn grammar_round_trip() {
        for text in ["sep(exp(1.0), one)", "diag(one)", "sep(pow(-1.0), pow(-1.0))", "diag(pow(1.0))"] {
            assert_eq!(model(text).to_string(), text);
        }
        assert_eq!(model("sep(pow(-1), pow(-1))"), model("sep(pow(-1.0),pow(-1.0))"));
        for bad in ["sep(exp(1.0))", "diag(exp(-1))", "cube(one)", "sep(one, pow(x))", ""] {
            assert!(bad.parse::<CoefficientModel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn separable_exponential_constant() {
        let m = model("sep(exp(1.0), one)");
        assert!(gst_norm_model(&m, 0.0, -2.0).unwrap().is_finite());
        let out = gst_norm_model(&m, 0.0, -1.0).unwrap();
        assert_eq!(out, NormOutcome::Divergent { factor: SeriesFactor::Column, exponent: -1.0 });
        // Σ e^{−2m} · Σ (2n+1)^{−2}
        let want = 1.0 / (1.0 - (-2.0f64).exp()) * PI * PI / 8.0;
        let NormOutcome::Finite { squared } = gst_norm_model(&m, 0.0, -2.0).unwrap() else { unreachable!() };
        assert!((squared - want).abs() < 1e-10 * want);
    }

    #[test]
    fn identity_and_hamiltonian_norms() {
        let one = model("diag(one)");
        let v = gst_norm_model(&one, -1.0, -1.0).unwrap();
        assert!((v.norm().unwrap().powi(2) - PI * PI / 8.0).abs() < 1e-12);
        assert!(!gst_norm_model(&one, -0.5, -0.5).unwrap().is_finite());
        let h = model("diag(pow(1))");
        assert!(gst_norm_model(&h, -2.0, -2.0).unwrap().is_finite());
        assert!(!gst_norm_model(&h, -1.0, -1.0).unwrap().is_finite());
        let truncated = CoefficientModel::Truncated { matrix: identity_model(3) };
        assert!(matches!(gst_norm_model(&truncated, 0.0, 0.0), Err(Error::WrongVariant(_))));
    }

    #[test]
    fn moyal_examples() {
        let v = moyal_membership(&model("sep(exp(1.0), one)")).unwrap();
        assert_eq!((v.in_ml, v.in_mr, v.in_m), (true, false, false));
        let w = moyal_membership(&model("sep(exp(1.0), one)").involute()).unwrap();
        assert_eq!((w.in_ml, w.in_mr, w.in_m), (false, true, false));
        let one = moyal_membership(&model("diag(one)")).unwrap();
        assert_eq!((one.in_ml, one.in_mr, one.in_m), (true, true, true));
        let p = moyal_membership(&model("sep(pow(-1), pow(-1))")).unwrap();
        assert_eq!((p.in_ml, p.in_mr, p.in_m), (false, false, false));
        assert_eq!(p.ml_witness, Witness::FailingWeight { at: 1.0 });
    }

    #[test]
    fn witnesses_are_sound() {
        for text in
            ["sep(exp(1.0), one)", "sep(exp(0.5), pow(2))", "diag(one)", "diag(pow(3))", "diag(exp(2))"]
        {
            let m = model(text);
            let v = moyal_membership(&m).unwrap();
            for s in [-10.0, -1.0, 0.0, 3.0, 25.0] {
                if let Some(t) = v.ml_witness.map(s) {
                    assert!(gst_norm_model(&m, s, t).unwrap().is_finite(), "{text} s={s}");
                }
                if let Some(u) = v.mr_witness.map(s) {
                    assert!(gst_norm_model(&m, u, s).unwrap().is_finite(), "{text} t={s}");
                }
            }
        }
        let m = model("sep(pow(-1), exp(1.0))");
        let Witness::FailingWeight { at } = moyal_membership(&m).unwrap().ml_witness else {
            panic!("expected failure")
        };
        for t in [-100.0, 0.0, 100.0] {
            assert!(!gst_norm_model(&m, at, t).unwrap().is_finite());
        }
    }

    #[test]
    fn inclusion_rules() {
        use Inclusion::*;
        assert_eq!(space_inclusion(SpaceTag::b(0.0, 0.0), SpaceTag::i(-3.0, -3.0)), Included);
        assert_eq!(space_inclusion(SpaceTag::g(1.0, 1.0), SpaceTag::g(0.0, 0.0)), Included);
        assert_eq!(space_inclusion(SpaceTag::g(0.0, 0.0), SpaceTag::i(0.0, 0.0)), NotImpliedByRules);
        assert_eq!(space_inclusion(SpaceTag::i(0.0, 0.0), SpaceTag::b(0.0, 0.0)), Included);
        assert_eq!(space_inclusion(SpaceTag::b(0.0, 0.0), SpaceTag::i(-2.0, -3.0)), NotImpliedByRules);
        assert_eq!(space_inclusion(SpaceTag::S2, SpaceTag::ML), Included);
        assert_eq!(space_inclusion(SpaceTag::M, SpaceTag::MR), Included);
        assert_eq!(space_inclusion(SpaceTag::ML, SpaceTag::M), NotImpliedByRules);
        assert_eq!(space_inclusion(SpaceTag::S2Dual, SpaceTag::g(0.0, 0.0)), NotImpliedByRules);
        assert_eq!(space_inclusion(SpaceTag::b(9.0, 9.0), SpaceTag::S2Dual), Included);
    }

    #[test]
    fn space_tags_parse() {
        assert_eq!("G(1, -2)".parse::<SpaceTag>().unwrap(), SpaceTag::g(1.0, -2.0));
        assert_eq!("S2'".parse::<SpaceTag>().unwrap(), SpaceTag::S2Dual);
        assert!("Q(1,1)".parse::<SpaceTag>().is_err());
    }

    #[test]
    fn factorization_examples() {
        let e = CoefficientMatrix::unit(4, 0, 0);
        let cert = trace_factorize(&e, 2.0).unwrap();
        assert_eq!(cert.g, e);
        assert_eq!(cert.h, e);
        assert_eq!(cert.residual, 0.0);
        assert!((cert.trace_norm - 1.0).abs() < 1e-14);
        assert!(cert.bounds_hold());

        let mut c = CoefficientMatrix::from_fn(5, |m, n| Complex64::new((m + 2 * n) as f64, 1.0));
        for n in 0..5 {
            c.set(2, n, Complex64::new(0.0, 0.0));
        }
        let cert = trace_factorize(&c, 3.0).unwrap();
        assert!(cert.residual < 1e-12);
        assert_eq!(cert.g.get(2, 2), Complex64::new(0.0, 0.0));
        assert!(cert.h_norm_sq < cert.odd_zeta);
        assert!(cert.bounds_hold());
        assert!(matches!(trace_factorize(&c, 1.0), Err(Error::BadExponent { .. })));
    }

    #[test]
    fn bounded_estimates() {
        let rep = bounded_bound_check(&identity_model(32), 2.0).unwrap();
        assert!((rep.operator_norm - 1.0).abs() < 1e-12);
        let partial: f64 = (0..32).map(|m| (2.0 * m as f64 + 1.0).powi(-2)).sum();
        assert!((rep.row_weighted - partial.sqrt()).abs() < 1e-12);
        assert!(rep.holds);
        let e = bounded_bound_check(&CoefficientMatrix::unit(6, 4, 1), 2.0).unwrap();
        assert!((e.row_weighted - 1.0 / 9.0).abs() < 1e-14);
        assert!((e.column_weighted - 1.0 / 3.0).abs() < 1e-14);
        assert!(e.holds);
    }

    #[test]
    fn regularity() {
        assert_eq!(regularity_class(2.0, 2.0), Some(Regularity::ProductSmooth(0)));
        assert_eq!(regularity_class(1.0, 1.0), Some(Regularity::Continuous));
        assert_eq!(regularity_class(0.0, 0.0), None);
        assert_eq!(regularity_class(7.0, 7.0), Some(Regularity::ProductSmooth(2)));
        assert_eq!(regularity_class(6.0, 6.0), Some(Regularity::ProductSmooth(2)));
        assert_eq!(regularity_class(0.0, 5.0), Some(Regularity::Continuous));
    }

    #[test]
    fn truncated_reports() {
        let r = truncated_membership(&CoefficientMatrix::unit(3, 1, 2), SpaceTag::g(2.0, 0.0));
        assert_eq!(r.verdict, Verdict::In);
        assert!((r.norm.unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(r.truncation, Some(3));
        let z = truncated_membership(&CoefficientMatrix::zeros(3), SpaceTag::b(1.0, 1.0));
        assert_eq!(z.norm, Some(0.0));
        let i = truncated_membership(&identity_model(4), SpaceTag::g(-1.0, -1.0));
        let want: f64 = (0..4).map(|n| (2.0 * n as f64 + 1.0).powi(-2)).sum::<f64>().sqrt();
        assert!((i.norm.unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn symbolic_classes() {
        let one = model("diag(one)");
        assert_eq!(classify(&one, SpaceTag::b(0.0, 0.0)).unwrap().verdict, Verdict::In);
        assert_eq!(classify(&one, SpaceTag::b(1.0, 0.0)).unwrap().verdict, Verdict::Out);
        assert_eq!(classify(&one, SpaceTag::i(-1.0, -1.0)).unwrap().verdict, Verdict::Out);
        // Σ (2m+1)^{−2} and Σ (2m+1)^{−3} = 7ζ(3)/8.
        let i = classify(&one, SpaceTag::i(-2.0, -2.0)).unwrap();
        assert!((i.norm.unwrap() - PI * PI / 8.0).abs() < 1e-12);
        let i = classify(&one, SpaceTag::i(-3.0, -3.0)).unwrap();
        assert!((i.norm.unwrap() - 1.051_799_790_264_645).abs() < 1e-12);
        assert_eq!(classify(&one, SpaceTag::S2).unwrap().verdict, Verdict::Out);
        let gauss = model("diag(exp(1.0))");
        assert_eq!(classify(&gauss, SpaceTag::S2).unwrap().verdict, Verdict::In);
        let b = classify(&gauss, SpaceTag::b(4.0, 0.0)).unwrap();
        let brute =
            (0..200).map(|m| (2.0 * m as f64 + 1.0).powi(2) * (-(m as f64)).exp()).fold(0.0, f64::max);
        assert!((b.norm.unwrap() - brute).abs() < 1e-12 * brute);
        let out = classify(&model("sep(exp(1.0), one)"), SpaceTag::MR).unwrap();
        assert_eq!(out.verdict, Verdict::Out);
        assert_eq!(out.witness, Some(Witness::FailingWeight { at: -1.0 }));
    }
}
