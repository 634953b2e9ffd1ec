//! Closed-form Hele-Shaw spheroid: matched pressure profile, interface
//! velocity, and classical RK4 integration of the interface radius.
//!
//! In the saturated limit the inner species fills `|x| < R1` and the outer
//! species fills `R1 < |x| < L`. The pressure solves `-p'' = g_i (P_i - p)` on
//! each region with `p'(0) = p'(L) = 0` and is continuous with a continuous
//! derivative at `|x| = R1`:
//!
//! ```text
//! p(x) = P1 + A cosh(sqrt(g1) x)            |x| <= R1
//! p(x) = P2 + C cosh(sqrt(g2) (|x| - L))    R1 <= |x| <= L
//! ```
//!
//! The interface moves with `R1' = -p'(R1)`.

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Matching determinants below this are rejected.
const DEGENERATE_LAMBDA: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidParams {
    pub g1: f64,
    pub g2: f64,
    pub p1: f64,
    pub p2: f64,
    pub half_length: f64,
    pub radius: f64,
}

impl SpheroidParams {
    pub fn new(g1: f64, g2: f64, p1: f64, p2: f64, half_length: f64, radius: f64) -> Result<Self> {
        let params = Self {
            g1,
            g2,
            p1,
            p2,
            half_length,
            radius,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.g1, self.g2, self.p1, self.p2, self.half_length, self.radius]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !all_positive {
            return Err(Error::Config(format!("spheroid parameters must be positive: {self:?}")));
        }
        if self.radius >= self.half_length {
            return Err(Error::Config(format!(
                "interface radius {} must be below the half length {}",
                self.radius, self.half_length
            )));
        }
        Ok(())
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }
}

/// Matched pressure profile for one interface radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleProfile {
    pub params: SpheroidParams,
    /// Inner cosh amplitude.
    pub inner_amplitude: f64,
    /// Outer cosh amplitude.
    pub outer_amplitude: f64,
    /// `sqrt(g1) cosh(sqrt(g2)(R1-L)) sinh(sqrt(g1)R1) - sqrt(g2) sinh(sqrt(g2)(R1-L)) cosh(sqrt(g1)R1)`
    pub lambda: f64,
}

impl OracleProfile {
    fn roots(&self) -> (f64, f64) {
        (self.params.g1.sqrt(), self.params.g2.sqrt())
    }

    pub fn is_inner(&self, x: f64) -> bool {
        x.abs() <= self.params.radius
    }

    pub fn inner(&self, x: f64) -> f64 {
        let (a, _) = self.roots();
        self.params.p1 + self.inner_amplitude * (a * x).cosh()
    }

    pub fn outer(&self, x: f64) -> f64 {
        let (_, b) = self.roots();
        self.params.p2 + self.outer_amplitude * (b * (x.abs() - self.params.half_length)).cosh()
    }

    /// Derivative of the inner branch (extended past `R1`).
    pub fn inner_slope(&self, x: f64) -> f64 {
        let (a, _) = self.roots();
        self.inner_amplitude * a * (a * x).sinh()
    }

    /// Derivative of the outer branch on `x > 0` (extended past `R1`).
    pub fn outer_slope(&self, x: f64) -> f64 {
        let (_, b) = self.roots();
        self.outer_amplitude * b * (b * (x - self.params.half_length)).sinh()
    }

    pub fn pressure(&self, x: f64) -> f64 {
        if self.is_inner(x) {
            self.inner(x)
        } else {
            self.outer(x)
        }
    }

    /// Growth rate of the species occupying `x`, evaluated at `p`.
    pub fn growth(&self, x: f64, p: f64) -> f64 {
        if self.is_inner(x) {
            self.params.g1 * (self.params.p1 - p)
        } else {
            self.params.g2 * (self.params.p2 - p)
        }
    }

    /// `(|inner(R1) - outer(R1)|, |inner'(R1) - outer'(R1)|)`.
    pub fn matching_gaps(&self) -> (f64, f64) {
        let r = self.params.radius;
        (
            (self.inner(r) - self.outer(r)).abs(),
            (self.inner_slope(r) - self.outer_slope(r)).abs(),
        )
    }
}

pub fn matching_determinant(params: &SpheroidParams) -> f64 {
    let (a, b) = (params.g1.sqrt(), params.g2.sqrt());
    let r = params.radius;
    let l = params.half_length;
    a * (b * (r - l)).cosh() * (a * r).sinh() - b * (b * (r - l)).sinh() * (a * r).cosh()
}

pub fn build_profile(params: &SpheroidParams) -> Result<OracleProfile> {
    params.validate()?;
    let lambda = matching_determinant(params);
    if !(lambda.abs() >= DEGENERATE_LAMBDA) {
        return Err(Error::DegenerateMatching(lambda.abs()));
    }
    let (a, b) = (params.g1.sqrt(), params.g2.sqrt());
    let r = params.radius;
    let l = params.half_length;
    let contrast = params.p1 - params.p2;
    Ok(OracleProfile {
        params: *params,
        inner_amplitude: contrast * b * (b * (r - l)).sinh() / lambda,
        outer_amplitude: contrast * a * (a * r).sinh() / lambda,
        lambda,
    })
}

/// `dR1/dt = -p'(R1+)`.
pub fn interface_velocity(params: &SpheroidParams) -> Result<f64> {
    let profile = build_profile(params)?;
    Ok(-profile.outer_slope(params.radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    /// The radius left `(delta, L - delta)`.
    ReachedBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTrajectory {
    /// `(t, R1)` pairs at multiples of the step, plus the final time.
    pub samples: Vec<(f64, f64)>,
    pub halted: Option<HaltReason>,
}

impl InterfaceTrajectory {
    pub fn final_radius(&self) -> f64 {
        self.samples.last().map(|s| s.1).unwrap_or(f64::NAN)
    }

    /// Linear interpolation between samples.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        let idx = self.samples.iter().position(|s| s.0 >= t)?;
        if idx == 0 {
            return Some(self.samples[0].1);
        }
        let (t0, r0) = self.samples[idx - 1];
        let (t1, r1) = self.samples[idx];
        Some(r0 + (r1 - r0) * (t - t0) / (t1 - t0))
    }
}

/// Margin kept from the centre and from the domain edge.
pub const EDGE_MARGIN: f64 = 1e-3;

/// Classical fourth-order Runge-Kutta integration of `R1' = -p'(R1)`.
pub fn integrate_interface(
    params: &SpheroidParams,
    t_max: f64,
    dt_ode: f64,
) -> Result<InterfaceTrajectory> {
    params.validate()?;
    if !(dt_ode > 0.0) || !(t_max >= 0.0) {
        return Err(Error::Config(format!(
            "need dt_ode > 0 and t_max >= 0, got {dt_ode}, {t_max}"
        )));
    }
    let lo = EDGE_MARGIN;
    let hi = params.half_length - EDGE_MARGIN;
    let inside = |r: f64| r > lo && r < hi;
    let velocity = |r: f64| -> Result<Option<f64>> {
        if !inside(r) {
            return Ok(None);
        }
        interface_velocity(&params.with_radius(r)).map(Some)
    };

    let mut samples = vec![(0.0, params.radius)];
    if !inside(params.radius) {
        return Ok(InterfaceTrajectory {
            samples,
            halted: Some(HaltReason::ReachedBoundary),
        });
    }
    let mut r = params.radius;
    let mut k = 0usize;
    loop {
        let t = k as f64 * dt_ode;
        if t >= t_max {
            break;
        }
        let next_t = ((k + 1) as f64 * dt_ode).min(t_max);
        let h = next_t - t;
        let stage = |r: f64| velocity(r);
        let Some(k1) = stage(r)? else { break };
        let Some(k2) = stage(r + 0.5 * h * k1)? else {
            return halted(samples);
        };
        let Some(k3) = stage(r + 0.5 * h * k2)? else {
            return halted(samples);
        };
        let Some(k4) = stage(r + h * k3)? else {
            return halted(samples);
        };
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        k += 1;
        samples.push((next_t, r));
        if !inside(r) {
            return halted(samples);
        }
    }
    Ok(InterfaceTrajectory {
        samples,
        halted: None,
    })
}

fn halted(samples: Vec<(f64, f64)>) -> Result<InterfaceTrajectory> {
    Ok(InterfaceTrajectory {
        samples,
        halted: Some(HaltReason::ReachedBoundary),
    })
}

/// Saturated limit state on a grid: indicator densities and the matched pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProfile {
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn limit_profile(params: &SpheroidParams, grid: &Grid1D) -> Result<LimitProfile> {
    let profile = build_profile(params)?;
    let m = grid.num_cells();
    let mut out = LimitProfile {
        n1: vec![0.0; m],
        n2: vec![0.0; m],
        p: vec![0.0; m],
    };
    for (j, &x) in grid.centers().iter().enumerate() {
        if profile.is_inner(x) {
            out.n1[j] = 1.0;
        } else {
            out.n2[j] = 1.0;
        }
        out.p[j] = profile.pressure(x);
    }
    Ok(out)
}

/// Result of the finite-difference residual self-test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualCheck {
    pub coarse: f64,
    pub fine: f64,
    pub ratio: f64,
    pub continuity_gap: f64,
    pub slope_gap: f64,
}

/// Largest `|-p'' - G(p)|` with centered second differences of step `h`
/// over interior sample points of both branches.
pub fn branch_residual(profile: &OracleProfile, h: f64, samples_per_branch: usize) -> f64 {
    let r = profile.params.radius;
    let l = profile.params.half_length;
    let mut worst: f64 = 0.0;
    let mut check = |x: f64, f: &dyn Fn(f64) -> f64, g: f64, pm: f64| {
        let second = (f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h);
        let p = f(x);
        worst = worst.max((-second - g * (pm - p)).abs());
    };
    let params = profile.params;
    let inner = |x: f64| profile.inner(x);
    let outer = |x: f64| profile.outer(x);
    let k = samples_per_branch.max(2);
    for i in 0..k {
        let s = (i as f64 + 0.5) / k as f64;
        check(s * r, &inner, params.g1, params.p1);
        check(r + s * (l - r), &outer, params.g2, params.p2);
    }
    worst
}

/// Runs the residual oracle at `h` and `h / 2` together with the matching gaps.
pub fn residual_self_test(params: &SpheroidParams, h: f64) -> Result<ResidualCheck> {
    let profile = build_profile(params)?;
    let coarse = branch_residual(&profile, h, 16);
    let fine = branch_residual(&profile, 0.5 * h, 16);
    let (continuity_gap, slope_gap) = profile.matching_gaps();
    Ok(ResidualCheck {
        coarse,
        fine,
        ratio: coarse / fine,
        continuity_gap,
        slope_gap,
    })
}
