//! Singular pressure law, nonlinear-diffusion primitive, and growth laws.
//!
//! The pressure law is `p = P(n) = eps * n / (1 - n)` on `0 <= n < 1`. Summing
//! the two species equations gives `dn/dt = d_xx H(n) + reaction` with
//! `H'(n) = n P'(n)`, which is what the explicit time-step bound needs.

use crate::error::{Error, Result};
use crate::grid::TwoSpeciesState;

/// Singular pressure law with stiffness `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    epsilon: f64,
}

impl PressureLaw {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Config(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn pressure(&self, n: f64) -> Result<f64> {
        pressure(n, self.epsilon)
    }

    pub fn density(&self, p: f64) -> Result<f64> {
        density_of_pressure(p, self.epsilon)
    }

    pub fn diffusion_slope(&self, n: f64) -> Result<f64> {
        diffusion_slope(n, self.epsilon)
    }

    /// Maximal packing density `P_M / (eps + P_M)` for a homeostatic pressure.
    pub fn packing_density(&self, homeostatic_pressure: f64) -> f64 {
        homeostatic_pressure / (self.epsilon + homeostatic_pressure)
    }
}

fn check_density(n: f64) -> Result<()> {
    if !(0.0..1.0).contains(&n) {
        return Err(Error::Domain(format!(
            "density {n} outside the pressure-law domain [0, 1)"
        )));
    }
    Ok(())
}

/// `eps * n / (1 - n)`.
pub fn pressure(n: f64, epsilon: f64) -> Result<f64> {
    check_density(n)?;
    Ok(epsilon * n / (1.0 - n))
}

/// Inverse of [`pressure`]: `p / (eps + p)`.
pub fn density_of_pressure(p: f64, epsilon: f64) -> Result<f64> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::Domain(format!("negative pressure {p}")));
    }
    if p.is_infinite() {
        return Ok(1.0);
    }
    Ok(p / (epsilon + p))
}

/// `H'(n) = n P'(n) = eps * n / (1 - n)^2`, the local diffusivity of the summed equation.
pub fn diffusion_slope(n: f64, epsilon: f64) -> Result<f64> {
    check_density(n)?;
    let gap = 1.0 - n;
    Ok(epsilon * n / (gap * gap))
}

/// `H(n) = P(n) - eps ln(P(n) + eps) + eps ln(eps)`, the antiderivative of `n P'(n)`
/// vanishing at 0.
pub fn nonlinear_diffusion(n: f64, epsilon: f64) -> Result<f64> {
    let p = pressure(n, epsilon)?;
    Ok(p - epsilon * ((p + epsilon) / epsilon).ln())
}

/// Evaluation contract for a growth law: bounded on `[0, P_M]`, strictly
/// decreasing, with a single root at the homeostatic pressure.
pub trait Growth {
    fn rate(&self, p: f64) -> f64;

    fn homeostatic_pressure(&self) -> f64;

    /// Lower bound on `|G'|` over `[0, homeostatic_pressure]`.
    fn min_slope(&self) -> f64;

    /// `sup |G|` over `[0, upper]`.
    fn sup_abs(&self, upper: f64) -> f64;

    /// `inf G` over `[0, upper]`.
    fn inf(&self, upper: f64) -> f64;
}

/// Linear growth law `G(p) = gain * (P_M - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthModel {
    pub gain: f64,
    pub homeostatic_pressure: f64,
}

impl GrowthModel {
    /// Validated constructor: `gain > 0` and `P_M > 0`.
    pub fn new(gain: f64, homeostatic_pressure: f64) -> Result<Self> {
        if !(gain > 0.0) || !gain.is_finite() {
            return Err(Error::Config(format!(
                "growth gain must be positive (G strictly decreasing), got {gain}"
            )));
        }
        if !(homeostatic_pressure > 0.0) || !homeostatic_pressure.is_finite() {
            return Err(Error::Config(format!(
                "homeostatic pressure must be positive, got {homeostatic_pressure}"
            )));
        }
        Ok(Self {
            gain,
            homeostatic_pressure,
        })
    }

    /// Unchecked constructor; `gain` may be zero or negative (used to build
    /// inert test models and to exercise hypothesis validation).
    pub const fn raw(gain: f64, homeostatic_pressure: f64) -> Self {
        Self {
            gain,
            homeostatic_pressure,
        }
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        growth_eval(self, p)
    }
}

impl Growth for GrowthModel {
    #[inline]
    fn rate(&self, p: f64) -> f64 {
        self.gain * (self.homeostatic_pressure - p)
    }

    fn homeostatic_pressure(&self) -> f64 {
        self.homeostatic_pressure
    }

    fn min_slope(&self) -> f64 {
        self.gain.abs()
    }

    fn sup_abs(&self, upper: f64) -> f64 {
        self.rate(0.0).abs().max(self.rate(upper).abs())
    }

    fn inf(&self, upper: f64) -> f64 {
        self.rate(0.0).min(self.rate(upper))
    }
}

/// `g * (P_M - p)`; negative above the homeostatic pressure.
pub fn growth_eval(model: &GrowthModel, p: f64) -> Result<f64> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::Domain(format!("negative pressure {p}")));
    }
    Ok(model.rate(p))
}

/// Growth laws of the two species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthPair {
    pub species1: GrowthModel,
    pub species2: GrowthModel,
}

impl GrowthPair {
    pub fn new(species1: GrowthModel, species2: GrowthModel) -> Self {
        Self { species1, species2 }
    }

    /// `G1(p) = 10(1 - p/2)`, `G2(p) = 10(1 - p)`: the two-block runs.
    pub const fn grfig() -> Self {
        Self {
            species1: GrowthModel::raw(5.0, 2.0),
            species2: GrowthModel::raw(10.0, 1.0),
        }
    }

    /// `G1(p) = 10(1 - p)`, `G2(p) = 10(1 - p/2)`: inner species at lower
    /// homeostatic pressure.
    pub const fn grfig1() -> Self {
        Self {
            species1: GrowthModel::raw(10.0, 1.0),
            species2: GrowthModel::raw(5.0, 2.0),
        }
    }

    /// `G1(p) = 10(4 - p)`, `G2(p) = 10(1 - p/2)`: inner species at higher
    /// homeostatic pressure.
    pub const fn grfig3() -> Self {
        Self {
            species1: GrowthModel::raw(10.0, 4.0),
            species2: GrowthModel::raw(5.0, 2.0),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "grfig" => Some(Self::grfig()),
            "grfig1" => Some(Self::grfig1()),
            "grfig3" => Some(Self::grfig3()),
            _ => None,
        }
    }

    /// `P_M = max(P_M^1, P_M^2)`.
    pub fn max_homeostatic_pressure(&self) -> f64 {
        self.species1
            .homeostatic_pressure
            .max(self.species2.homeostatic_pressure)
    }

    /// `G_m`: bound on `|G_1|, |G_2|` over `[0, P_M]`.
    pub fn growth_bound(&self) -> f64 {
        let pm = self.max_homeostatic_pressure();
        self.species1.sup_abs(pm).max(self.species2.sup_abs(pm))
    }

    /// `g_m >= 0` with `min(inf G_1, inf G_2) >= -g_m` over `[0, P_M]`.
    pub fn death_bound(&self) -> f64 {
        let pm = self.max_homeostatic_pressure();
        (-self.species1.inf(pm).min(self.species2.inf(pm))).max(0.0)
    }

    /// `gamma = min(|G_1'|, |G_2'|)`.
    pub fn gamma(&self) -> f64 {
        self.species1.min_slope().min(self.species2.min_slope())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub name: &'static str,
    pub status: ClauseStatus,
    pub detail: String,
}

/// Outcome of checking the growth and initial-data hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub growth_bound: f64,
    pub death_bound: f64,
    pub gamma: f64,
    pub max_homeostatic_pressure: f64,
    pub initial_max_pressure: f64,
    /// `A_0 = min_j n_j` of the initial data (zero when some cell is empty).
    pub initial_min_density: f64,
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn has_failures(&self) -> bool {
        self.clauses.iter().any(|c| c.status == ClauseStatus::Fail)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.status == ClauseStatus::Warn)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    /// Errors out on the first hard violation.
    pub fn into_result(self) -> Result<Self> {
        if let Some(c) = self.clauses.iter().find(|c| c.status == ClauseStatus::Fail) {
            return Err(Error::Config(format!("{}: {}", c.name, c.detail)));
        }
        Ok(self)
    }
}

impl std::fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "G_m = {}, g_m = {}, gamma = {}, P_M = {}",
            self.growth_bound, self.death_bound, self.gamma, self.max_homeostatic_pressure
        )?;
        for c in &self.clauses {
            let tag = match c.status {
                ClauseStatus::Pass => "PASS",
                ClauseStatus::Warn => "WARN",
                ClauseStatus::Fail => "FAIL",
            };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks every runtime-checkable clause of the growth and initial-data hypotheses.
pub fn validate_hypotheses(
    pair: &GrowthPair,
    epsilon: f64,
    initial: &TwoSpeciesState,
) -> HypothesisReport {
    let mut clauses = Vec::new();
    let mut push = |name, status, detail: String| clauses.push(Clause { name, status, detail });

    let pm = pair.max_homeostatic_pressure();
    let growth_bound = pair.growth_bound();
    let death_bound = pair.death_bound();
    let gamma = pair.gamma();

    push(
        "growth.bounded",
        if growth_bound.is_finite() { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!("sup |G_i| on [0, {pm}] = {growth_bound}"),
    );
    let decreasing = pair.species1.gain > 0.0 && pair.species2.gain > 0.0;
    push(
        "growth.monotone",
        if decreasing { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!(
            "gains g1 = {}, g2 = {} must be positive",
            pair.species1.gain, pair.species2.gain
        ),
    );
    let roots_ok =
        pair.species1.homeostatic_pressure > 0.0 && pair.species2.homeostatic_pressure > 0.0;
    push(
        "growth.homeostatic",
        if roots_ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!(
            "P_M^1 = {}, P_M^2 = {}",
            pair.species1.homeostatic_pressure, pair.species2.homeostatic_pressure
        ),
    );
    push(
        "growth.gamma",
        if gamma > 0.0 { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!("gamma = {gamma}, g_m = {death_bound}"),
    );

    let eps_ok = epsilon > 0.0 && epsilon.is_finite();
    push(
        "epsilon.positive",
        if eps_ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!("epsilon = {epsilon}"),
    );

    let min_species = initial
        .n1
        .iter()
        .chain(initial.n2.iter())
        .fold(f64::INFINITY, |a, &b| a.min(b));
    push(
        "initial.nonnegative",
        if min_species >= 0.0 { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!("min species density = {min_species}"),
    );

    let totals: Vec<f64> = initial.total().collect();
    let max_n = totals.iter().copied().fold(0.0, f64::max);
    let min_n = totals.iter().copied().fold(f64::INFINITY, f64::min);
    push(
        "initial.below_saturation",
        if max_n < 1.0 { ClauseStatus::Pass } else { ClauseStatus::Fail },
        format!("max n = {max_n}"),
    );
    push(
        "initial.lower_bound",
        if min_n > 0.0 { ClauseStatus::Pass } else { ClauseStatus::Warn },
        format!("A_0 = min n = {min_n} (must be > 0)"),
    );

    let segregated = crate::grid::segregation_front(initial).is_some();
    push(
        "initial.segregated",
        if segregated { ClauseStatus::Pass } else { ClauseStatus::Warn },
        if segregated {
            "species 1 lies left of a single interface, species 2 right of it".to_string()
        } else {
            "no single interface separates the species".to_string()
        },
    );

    let initial_max_pressure = if eps_ok && max_n < 1.0 {
        pressure(max_n, epsilon).unwrap_or(f64::INFINITY)
    } else {
        f64::INFINITY
    };
    push(
        "initial.pressure_bound",
        if initial_max_pressure <= pm { ClauseStatus::Pass } else { ClauseStatus::Warn },
        format!("max initial pressure = {initial_max_pressure} vs P_M = {pm}"),
    );

    HypothesisReport {
        growth_bound,
        death_bound,
        gamma,
        max_homeostatic_pressure: pm,
        initial_max_pressure,
        initial_min_density: if min_n.is_finite() { min_n.max(0.0) } else { 0.0 },
        clauses,
    }
}
