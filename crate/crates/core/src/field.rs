//! Smeared vacuum propagators of a (1+1)-D Klein-Gordon field of mass `m`.
//!
//! With window operators `Phi_L = L^-1/2 int_{-L/2}^{L/2} phi(x + x0) dx` (and
//! `Pi_L` likewise), the equal-time vacuum correlations are
//!
//! ```text
//! D_Phi(r) = 2/(pi L) int_0^inf sin^2(kL/2) cos(kr) / (k^2 w_k) dk
//! D_Pi(r)  = 2/(pi L) int_0^inf sin^2(kL/2) cos(kr) w_k / k^2 dk,   w_k = sqrt(k^2 + m^2)
//! ```
//!
//! Each integral is split at a cutoff `K`. The head `[0, K]` is integrated
//! adaptively in the product form `w (sin(kL/2)/k)^2 cos(kr)`, which has no
//! cancellation at `k -> 0`. For the tail the product is expanded as
//! `(2 cos kr - cos k(r+L) - cos k|r-L|)/4` and `w` in powers of `m^2/k^2`,
//! leaving a sum of generalized cosine integrals (see [`tail`]). `K` is
//! doubled until head plus tail stops moving.
//!
//! `D_Pi` has a `1/k` tail. It converges only when every cosine in the
//! expansion oscillates; at `r = 0` and `r = L` a constant survives and the
//! integral diverges logarithmically in the cutoff.

pub mod tail;

use std::f64::consts::PI;

use serde::Serialize;

use crate::entanglement::{negativity, CollectiveCovariance, EntanglementResult};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, uniform_points, Control};
use crate::special::binomial;

/// Which smeared operator the propagator correlates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrature {
    /// `<Phi_L Phi_L>`
    Field,
    /// `<Pi_L Pi_L>`
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRegionSpec {
    mass: f64,
    length: f64,
    separation: f64,
}

impl FieldRegionSpec {
    pub fn new(mass: f64, length: f64, separation: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("field mass must be > 0, got {mass}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain(format!(
                "smearing length must be > 0, got {length}"
            )));
        }
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(Error::domain(format!(
                "separation must be >= 0, got {separation}"
            )));
        }
        Ok(FieldRegionSpec {
            mass,
            length,
            separation,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// The windows do not overlap or touch.
    pub fn is_disjoint(&self) -> bool {
        self.separation > self.length
    }
}

/// Accuracy policy for the propagators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorControl {
    /// Absolute target for each propagator value.
    pub tol: f64,
    /// Cutoff doublings before giving up on tail stabilization.
    pub max_doublings: u32,
}

impl Default for PropagatorControl {
    fn default() -> Self {
        PropagatorControl {
            tol: 1e-10,
            max_doublings: 10,
        }
    }
}

impl PropagatorControl {
    pub fn with_tol(tol: f64) -> Self {
        PropagatorControl {
            tol,
            ..Self::default()
        }
    }
}

/// `sin^2(kL/2) cos(kr) = sum_j c_j cos(a_j k)`.
fn cosine_terms(length: f64, r: f64) -> [(f64, f64); 3] {
    [(0.5, r), (-0.25, r + length), (-0.25, (r - length).abs())]
}

fn weight(kind: Quadrature, mass: f64, k: f64) -> f64 {
    let w = k.hypot(mass);
    match kind {
        Quadrature::Field => 1.0 / w,
        Quadrature::Momentum => w,
    }
}

fn head_integrand(kind: Quadrature, mass: f64, length: f64, r: f64) -> impl Fn(f64) -> f64 {
    move |k: f64| {
        let sinc = if k == 0.0 {
            0.5 * length
        } else {
            (0.5 * k * length).sin() / k
        };
        weight(kind, mass, k) * sinc * sinc * (k * r).cos()
    }
}

fn head(
    kind: Quadrature,
    mass: f64,
    length: f64,
    r: f64,
    from: f64,
    to: f64,
    tol: f64,
) -> Result<f64> {
    // panels no wider than half the fastest oscillation period
    let width = PI / (r + length);
    let pts = uniform_points(from, to, width);
    let ctl = Control {
        abs_tol: tol,
        max_intervals: 200_000.max(4 * pts.len()),
    };
    Ok(integrate_panels(head_integrand(kind, mass, length, r), &pts, ctl)?.value)
}

/// `int_K^inf w(k) sin^2(kL/2) cos(kr) / k^2 dk` from the large-`k`
/// expansion of `w`.
fn tail_integral(kind: Quadrature, mass: f64, length: f64, r: f64, k0: f64) -> Result<f64> {
    let (base_power, exponent) = match kind {
        Quadrature::Field => (3u32, -0.5),
        Quadrature::Momentum => (1u32, 0.5),
    };
    let ratio = (mass / k0).powi(2);
    let mut total = 0.0;
    for (c, a) in cosine_terms(length, r) {
        let mut n = 0u32;
        loop {
            let b = binomial(exponent, n);
            let size = b.abs() * ratio.powi(n as i32);
            if n > 0 && size < 1e-18 {
                break;
            }
            let p = base_power + 2 * n;
            let i_p = tail::cos_tail(p, a, k0).map_err(|e| match e {
                Error::LogDivergent { .. } => Error::LogDivergent { r },
                other => other,
            })?;
            total += c * b * mass.powi(2 * n as i32) * i_p;
            n += 1;
        }
    }
    Ok(total)
}

/// Coefficient of the non-oscillating `1/k` tail term; the momentum
/// integral diverges like `constant * ln K` when it is non-zero.
fn divergent_constant(kind: Quadrature, length: f64, r: f64) -> f64 {
    match kind {
        Quadrature::Field => 0.0,
        Quadrature::Momentum => cosine_terms(length, r)
            .iter()
            .filter(|(_, a)| *a == 0.0)
            .map(|(c, _)| c)
            .sum(),
    }
}

/// Momentum tails diverge when the constant (`a_j = 0`) cosine terms do
/// not cancel.
fn check_convergent(kind: Quadrature, length: f64, r: f64) -> Result<()> {
    if divergent_constant(kind, length, r) != 0.0 {
        return Err(Error::LogDivergent { r });
    }
    Ok(())
}

/// Smeared propagator at center distance `r` (sign of `r` is irrelevant).
pub fn propagator(
    kind: Quadrature,
    mass: f64,
    length: f64,
    r: f64,
    ctl: PropagatorControl,
) -> Result<f64> {
    FieldRegionSpec::new(mass, length, r.abs())?;
    let r = r.abs();
    check_convergent(kind, length, r)?;
    let pref = 2.0 / (PI * length);
    let tol = ctl.tol / pref;

    let mut k0 = (100.0 / length).max(10.0 * mass);
    let mut body = head(kind, mass, length, r, 0.0, k0, 0.25 * tol)?;
    let mut total = body + tail_integral(kind, mass, length, r, k0)?;
    let mut change = f64::INFINITY;
    for _ in 0..ctl.max_doublings {
        let k1 = 2.0 * k0;
        body += head(kind, mass, length, r, k0, k1, 0.25 * tol)?;
        let next = body + tail_integral(kind, mass, length, r, k1)?;
        change = (next - total).abs();
        total = next;
        k0 = k1;
        if change <= 0.5 * tol {
            return Ok(pref * total);
        }
    }
    Err(Error::TailUnstable {
        cutoff: k0,
        change: pref * change,
    })
}

/// Same integral restricted to `|k| <= cutoff` (sharp momentum cutoff).
/// Finite for every `r`; tends to [`propagator`] where that converges.
pub fn propagator_cutoff(
    kind: Quadrature,
    mass: f64,
    length: f64,
    r: f64,
    cutoff: f64,
    ctl: PropagatorControl,
) -> Result<f64> {
    FieldRegionSpec::new(mass, length, r.abs())?;
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::domain(format!("cutoff must be > 0, got {cutoff}")));
    }
    let pref = 2.0 / (PI * length);
    Ok(pref
        * head(
            kind,
            mass,
            length,
            r.abs(),
            0.0,
            cutoff,
            0.5 * ctl.tol / pref,
        )?)
}

/// `D_Phi,L(r)` for the mass and window of `spec`.
pub fn d_phi(spec: FieldRegionSpec, r: f64) -> Result<f64> {
    propagator(
        Quadrature::Field,
        spec.mass,
        spec.length,
        r,
        PropagatorControl::default(),
    )
}

/// `D_Pi,L(r)`. [`Error::LogDivergent`] at `r = 0` and `r = L`.
pub fn d_pi(spec: FieldRegionSpec, r: f64) -> Result<f64> {
    propagator(
        Quadrature::Momentum,
        spec.mass,
        spec.length,
        r,
        PropagatorControl::default(),
    )
}

/// Propagator with logarithmic divergences mapped to `+inf` (at `r = 0`)
/// or `-inf` (at `r = L`), following the sign of the surviving constant.
pub fn propagator_or_infinite(
    kind: Quadrature,
    mass: f64,
    length: f64,
    r: f64,
    ctl: PropagatorControl,
) -> Result<f64> {
    match propagator(kind, mass, length, r, ctl) {
        Err(Error::LogDivergent { .. }) => {
            Ok(f64::INFINITY.copysign(divergent_constant(kind, length, r.abs())))
        }
        other => other,
    }
}

/// How the momentum divergence is treated when building covariances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Regularization {
    /// Infinite-cutoff values; `D_Pi(0) = +inf`.
    None,
    /// Sharp momentum cutoff `|k| <= cutoff`.
    Cutoff(f64),
}

/// Propagator under the chosen treatment of the momentum divergence.
pub fn regularized_propagator(
    kind: Quadrature,
    mass: f64,
    length: f64,
    r: f64,
    reg: Regularization,
    ctl: PropagatorControl,
) -> Result<f64> {
    match reg {
        Regularization::None => propagator_or_infinite(kind, mass, length, r, ctl),
        Regularization::Cutoff(c) => propagator_cutoff(kind, mass, length, r, c, ctl),
    }
}

/// `G = D_Phi(0)`, `H = D_Pi(0)`, `G_AB = D_Phi(r)`, `H_AB = D_Pi(r)` for
/// two disjoint windows.
pub fn field_covariance(
    spec: FieldRegionSpec,
    reg: Regularization,
    ctl: PropagatorControl,
) -> Result<CollectiveCovariance> {
    if !spec.is_disjoint() {
        return Err(Error::domain(format!(
            "windows overlap: separation {} <= length {}",
            spec.separation, spec.length
        )));
    }
    let (m, l, r) = (spec.mass, spec.length, spec.separation);
    Ok(CollectiveCovariance::new(
        regularized_propagator(Quadrature::Field, m, l, 0.0, reg, ctl)?,
        regularized_propagator(Quadrature::Momentum, m, l, 0.0, reg, ctl)?,
        regularized_propagator(Quadrature::Field, m, l, r, reg, ctl)?,
        regularized_propagator(Quadrature::Momentum, m, l, r, reg, ctl)?,
    ))
}

/// Negativity degree of the two window operators, `(delta1 delta2)_0 = 1/4`.
pub fn field_negativity(spec: FieldRegionSpec) -> Result<EntanglementResult> {
    negativity(field_covariance(
        spec,
        Regularization::None,
        PropagatorControl::default(),
    )?)
}

/// Two interleaved trains of `windows` windows each (A, B, A, B, ...),
/// each window of width `length`, neighbouring windows `gap` apart edge to
/// edge. The block operator is `(windows * length)^-1/2` times the summed
/// window integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicRegionSpec {
    pub mass: f64,
    pub length: f64,
    pub windows: usize,
    pub gap: f64,
}

impl PeriodicRegionSpec {
    pub fn new(mass: f64, length: f64, windows: usize, gap: f64) -> Result<Self> {
        FieldRegionSpec::new(mass, length, 0.0)?;
        if windows == 0 {
            return Err(Error::domain("need at least one window per block"));
        }
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::domain(format!("window gap must be > 0, got {gap}")));
        }
        Ok(PeriodicRegionSpec {
            mass,
            length,
            windows,
            gap,
        })
    }

    fn pitch(&self) -> f64 {
        self.length + self.gap
    }
}

/// Covariance of the two window trains, summing pairwise propagators over
/// center distances.
pub fn periodic_field_covariance(
    spec: PeriodicRegionSpec,
    reg: Regularization,
    ctl: PropagatorControl,
) -> Result<CollectiveCovariance> {
    let w = spec.windows;
    // within a train distances are even multiples of the pitch, across odd
    let mut within = vec![0u64; 2 * w];
    let mut across = vec![0u64; 2 * w];
    for i in 0..w {
        for j in 0..w {
            within[2 * i.abs_diff(j)] += 1;
            across[(2 * i + 1).abs_diff(2 * j)] += 1;
        }
    }
    let sum = |kind: Quadrature, counts: &[u64]| -> Result<f64> {
        let mut acc = 0.0;
        for (steps, &count) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            let r = steps as f64 * spec.pitch();
            acc +=
                count as f64 * regularized_propagator(kind, spec.mass, spec.length, r, reg, ctl)?;
        }
        Ok(acc / w as f64)
    };
    Ok(CollectiveCovariance::new(
        sum(Quadrature::Field, &within)?,
        sum(Quadrature::Momentum, &within)?,
        sum(Quadrature::Field, &across)?,
        sum(Quadrature::Momentum, &across)?,
    ))
}

pub fn periodic_field_negativity(spec: PeriodicRegionSpec) -> Result<EntanglementResult> {
    negativity(periodic_field_covariance(
        spec,
        Regularization::None,
        PropagatorControl::default(),
    )?)
}
