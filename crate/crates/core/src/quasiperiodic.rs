//! The Fibonacci-kicked oscillator.
//!
//! Two kicked intervals of durations `T1`, `T2` give the transfer matrices
//! `λi = R(ωTi) · K(u)`. The half-trace of their commutator,
//! `ℐ = 1 + ½ (u/ω)² sin²(ω(T1 − T2))`, is conserved by the Fibonacci
//! automorphism. Where `ω(T1 − T2) = mπ` the commutator is the identity and
//! the two intervals commute; if both are also inside a Floquet band the
//! Fibonacci sequence propagates like one effective oscillator.
//!
//! Phase-space orbits read the Fibonacci word left to right as time order:
//! letter `k` acts after letter `k − 1`, so the cumulative matrix after `n`
//! letters is `λ_{ℓn} ··· λ_{ℓ1}`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{non_negative, positive, Error, Escape, Result};
use crate::floquet::{
    floquet_index, is_in_band, kick_block, kicked_half_trace, rotation_block, EffectivePropagator,
    PropagatorKind,
};
use crate::free_group::{fibonacci_word, Generator};
use crate::symplectic::{PhasePoint, SymplecticMatrix};

/// τ = (1 + √5)/2.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;
/// Phase-space orbits stop once `|(x, p)|` exceeds this.
pub const ORBIT_ESCAPE: f64 = 1e50;
/// Tolerance used by [`commutativity_report`].
pub const COMMUTATIVITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibonacciKickedParams {
    m: f64,
    omega: f64,
    u: f64,
    t1: f64,
    t2: f64,
}

impl FibonacciKickedParams {
    /// Zero-length intervals (a bare kick) are allowed.
    pub fn new(m: f64, omega: f64, u: f64, t1: f64, t2: f64) -> Result<Self> {
        Ok(Self {
            m: positive("m", m)?,
            omega: positive("omega", omega)?,
            u: non_negative("u", u)?,
            t1: non_negative("t1", t1)?,
            t2: non_negative("t2", t2)?,
        })
    }

    /// `T1 = t`, `T2 = τ t`.
    pub fn fibonacci(m: f64, omega: f64, u: f64, t: f64) -> Result<Self> {
        Self::new(m, omega, u, t, GOLDEN_RATIO * t)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn u(&self) -> f64 {
        self.u
    }
    pub fn t1(&self) -> f64 {
        self.t1
    }
    pub fn t2(&self) -> f64 {
        self.t2
    }
}

fn propagators(omega: f64, u: f64, t1: f64, t2: f64) -> (SymplecticMatrix, SymplecticMatrix) {
    let kick = kick_block(u);
    (
        rotation_block(omega, t1) * kick,
        rotation_block(omega, t2) * kick,
    )
}

/// `(λ1, λ2)`.
pub fn interval_propagators(p: &FibonacciKickedParams) -> (SymplecticMatrix, SymplecticMatrix) {
    propagators(p.omega, p.u, p.t1, p.t2)
}

/// `K = (λ1 λ2)(λ2 λ1)⁻¹`, by exact products.
pub fn commutator_matrix(l1: &SymplecticMatrix, l2: &SymplecticMatrix) -> SymplecticMatrix {
    (*l1 * *l2) * (*l2 * *l1).inverse()
}

/// `ℐ = ½ tr K` from the matrices.
pub fn nielsen_invariant(p: &FibonacciKickedParams) -> f64 {
    let (l1, l2) = interval_propagators(p);
    commutator_matrix(&l1, &l2).half_trace()
}

/// `1 + ½ (u/ω)² sin²(ω(T1 − T2))`.
pub fn nielsen_invariant_closed_form(p: &FibonacciKickedParams) -> f64 {
    let s = (p.omega * (p.t1 - p.t2)).sin();
    let r = p.u / p.omega;
    1.0 + 0.5 * r * r * s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutativityReport {
    pub invariant_value: f64,
    pub is_commutative: bool,
    /// Max-norm of `K − e`.
    pub commutator_deviation: f64,
}

/// ℐ = 1 is necessary but not sufficient for commuting intervals, so the
/// commutator matrix is checked as well.
pub fn commutativity_report(p: &FibonacciKickedParams) -> CommutativityReport {
    let (l1, l2) = interval_propagators(p);
    let k = commutator_matrix(&l1, &l2);
    let invariant_value = k.half_trace();
    let commutator_deviation = k.max_abs_diff(&SymplecticMatrix::identity());
    CommutativityReport {
        invariant_value,
        is_commutative: (invariant_value - 1.0).abs() <= COMMUTATIVITY_TOL
            && commutator_deviation <= COMMUTATIVITY_TOL,
        commutator_deviation,
    }
}

/// One-parameter family `T1 = T`, `T2 = ratio · T`, scanned in `ωT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibonacciFamily {
    m: f64,
    omega: f64,
    u: f64,
    ratio: f64,
}

impl FibonacciFamily {
    pub fn new(m: f64, omega: f64, u: f64, ratio: f64) -> Result<Self> {
        Ok(Self {
            m: positive("m", m)?,
            omega: positive("omega", omega)?,
            u: non_negative("u", u)?,
            ratio: positive("ratio", ratio)?,
        })
    }

    pub fn golden(m: f64, omega: f64, u: f64) -> Result<Self> {
        Self::new(m, omega, u, GOLDEN_RATIO)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn u(&self) -> f64 {
        self.u
    }
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `u / 2ω`, the single-interval band parameter.
    pub fn kick_ratio(&self) -> f64 {
        self.u / (2.0 * self.omega)
    }

    pub fn params_at(&self, omega_t: f64) -> Result<FibonacciKickedParams> {
        let t = omega_t / self.omega;
        FibonacciKickedParams::new(self.m, self.omega, self.u, t, self.ratio * t)
    }

    /// Spacing `π / |ratio − 1|` of the commutative points in ωT.
    pub fn commutative_spacing(&self) -> Result<f64> {
        let d = (self.ratio - 1.0).abs();
        if d == 0.0 {
            Err(Error::CommutativeEverywhere)
        } else {
            Ok(PI / d)
        }
    }

    fn invariant_at(&self, omega_t: f64) -> f64 {
        let t = omega_t / self.omega;
        let (l1, l2) = propagators(self.omega, self.u, t, self.ratio * t);
        commutator_matrix(&l1, &l2).half_trace()
    }
}

/// All `ωT = mπ/(ratio − 1)` in `[lower, upper]`; for the golden ratio this
/// is `mπτ`. `m = 0` is skipped unless `include_zero`.
pub fn commutative_points(
    family: &FibonacciFamily,
    lower: f64,
    upper: f64,
    include_zero: bool,
) -> Result<Vec<f64>> {
    if !(lower.is_finite() && upper.is_finite() && lower <= upper) {
        return Err(Error::InvalidRange {
            lower,
            upper,
            reason: "need finite lower <= upper",
        });
    }
    let spacing = family.commutative_spacing()?;
    let first = (lower / spacing).ceil() as i64;
    let last = (upper / spacing).floor() as i64;
    Ok((first..=last)
        .filter(|&m| include_zero || m != 0)
        .map(|m| m as f64 * spacing)
        .collect())
}

/// One grid point of [`band_overlap_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub omega_t: f64,
    pub invariant: f64,
    pub in_band_1: bool,
    pub in_band_2: bool,
    pub overlap: bool,
    pub commutative: bool,
    pub quasi_floquet: bool,
}

/// Superposes the band structures at `ωT` and `ratio · ωT` and marks the
/// commutative points. A grid point is commutative when a commutative
/// point lies within half the local grid spacing of it.
pub fn band_overlap_scan(
    family: &FibonacciFamily,
    grid: &[f64],
    include_zero: bool,
) -> Result<Vec<ScanRecord>> {
    if let Some(i) = grid
        .windows(2)
        .position(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::UnsortedGrid { index: i + 1 });
    }
    let spacing = match family.commutative_spacing() {
        Ok(s) => Some(s),
        Err(Error::CommutativeEverywhere) => None,
        Err(e) => return Err(e),
    };
    let kick_ratio = family.kick_ratio();

    let records = grid
        .iter()
        .enumerate()
        .map(|(i, &beta)| {
            let left = i.checked_sub(1).map(|j| beta - grid[j]);
            let right = grid.get(i + 1).map(|&b| b - beta);
            let half_step = match (left, right) {
                (Some(l), Some(r)) => 0.5 * l.min(r),
                (Some(h), None) | (None, Some(h)) => 0.5 * h,
                (None, None) => 1e-12 * beta.abs().max(1.0),
            };
            let commutative = match spacing {
                None => true,
                Some(s) => {
                    let m = (beta / s).round();
                    (include_zero || m != 0.0) && (beta - m * s).abs() <= half_step
                }
            };
            let in_band_1 = is_in_band(kicked_half_trace(kick_ratio, beta));
            let in_band_2 = is_in_band(kicked_half_trace(kick_ratio, family.ratio * beta));
            let overlap = in_band_1 && in_band_2;
            ScanRecord {
                omega_t: beta,
                invariant: family.invariant_at(beta),
                in_band_1,
                in_band_2,
                overlap,
                commutative,
                quasi_floquet: overlap && commutative,
            }
        })
        .collect();
    Ok(records)
}

/// `Q(x, p) = xx·x² + 2·xp·x·p + pp·p²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub xx: f64,
    pub xp: f64,
    pub pp: f64,
}

impl QuadraticForm {
    pub fn eval(&self, v: PhasePoint) -> f64 {
        self.xx * v.x * v.x + 2.0 * self.xp * v.x * v.p + self.pp * v.p * v.p
    }

    pub fn det(&self) -> f64 {
        self.xx * self.pp - self.xp * self.xp
    }

    fn normalized(self) -> Self {
        let d = self.det().abs().sqrt();
        if d > 0.0 {
            Self {
                xx: self.xx / d,
                xp: self.xp / d,
                pp: self.pp / d,
            }
        } else {
            self
        }
    }
}

/// Quadratic form preserved by `g` (`gᵀ S g = S`), scaled to `|det S| = 1`.
///
/// Elliptic `g`: with eigenvector `v` for `e^{iθ}`, `P = [Re v, Im v]`
/// satisfies `g P = P R(θ)`, so `S = (P Pᵀ)⁻¹ = Re(v v†)⁻¹` is preserved and
/// positive definite. Other `g`: `S = J (g − ½χ e)`, an indefinite form.
/// For `g = ±e` every form is preserved and `x² + p²` is returned.
pub fn conserved_form(g: &SymplecticMatrix) -> QuadraticForm {
    let neg = SymplecticMatrix::from_entries(-1.0, 0.0, 0.0, -1.0);
    if g.is_identity(1e-12) || g.max_abs_diff(&neg) <= 1e-12 {
        return QuadraticForm {
            xx: 1.0,
            xp: 0.0,
            pp: 1.0,
        };
    }
    let h = g.half_trace();
    if h.abs() < 1.0 {
        let im = (1.0 - h * h).sqrt();
        // eigenvector for h + i·im, from whichever row is better conditioned
        let (v0, v1) = if g.b().abs() >= g.c().abs() {
            ((g.b(), 0.0), (h - g.a(), im))
        } else {
            ((h - g.d(), im), (g.c(), 0.0))
        };
        // P Pᵀ with P = [[Re v0, Im v0], [Re v1, Im v1]]
        let m00 = v0.0 * v0.0 + v0.1 * v0.1;
        let m01 = v0.0 * v1.0 + v0.1 * v1.1;
        let m11 = v1.0 * v1.0 + v1.1 * v1.1;
        let det = m00 * m11 - m01 * m01;
        QuadraticForm {
            xx: m11 / det,
            xp: -m01 / det,
            pp: m00 / det,
        }
        .normalized()
    } else {
        // J·A with A = g − h·e = [[α, β], [γ, −α]] gives [[γ, −α], [−α, −β]]
        let alpha = 0.5 * (g.a() - g.d());
        QuadraticForm {
            xx: g.c(),
            xp: -alpha,
            pp: -g.b(),
        }
        .normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub step: usize,
    /// Interval applied to reach this point; `None` for the start.
    pub letter: Option<Generator>,
    pub point: PhasePoint,
    /// Conserved form of `λ1` evaluated at `point`.
    pub q: f64,
}

/// First `n` letters of the infinite Fibonacci word `y1 y2 y2 y1 y2 ...`.
///
/// `w(k+2) = w(k) w(k+1)`, so the even-index words are prefixes of each
/// other and converge to this word; odd-index words start with `y2`.
pub fn fibonacci_prefix(n: usize) -> Vec<Generator> {
    let mut k = 0;
    let (mut a, mut b) = (1usize, 1usize);
    while a < n {
        k += 2;
        (a, b) = (a + b, a + 2 * b);
    }
    fibonacci_word(k)
        .letters()
        .iter()
        .take(n)
        .map(|l| l.generator)
        .collect()
}

/// Applies the Fibonacci-ordered intervals to `start`, one letter per step.
pub fn phase_orbit(
    p: &FibonacciKickedParams,
    start: PhasePoint,
    n: usize,
) -> std::result::Result<Vec<OrbitPoint>, Escape<OrbitPoint>> {
    let (l1, l2) = interval_propagators(p);
    let form = conserved_form(&l1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(OrbitPoint {
        step: 0,
        letter: None,
        point: start,
        q: form.eval(start),
    });
    let mut v = start;
    for (i, g) in fibonacci_prefix(n).into_iter().enumerate() {
        v = match g {
            Generator::Y1 => l1.apply(v),
            Generator::Y2 => l2.apply(v),
        };
        if !v.is_finite() || v.norm() > ORBIT_ESCAPE {
            return Err(Escape {
                step: i + 1,
                threshold: ORBIT_ESCAPE,
                partial: out,
            });
        }
        out.push(OrbitPoint {
            step: i + 1,
            letter: Some(g),
            point: v,
            q: form.eval(v),
        });
    }
    Ok(out)
}

/// Dilatation `ψ(x) → amplitude · ψ(scale · x)` of a hyperbolic period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dilatation {
    /// `e^{−κT}`.
    pub scale: f64,
    /// `e^{−κT/2}`.
    pub amplitude: f64,
}

/// Parameters of the quantum propagator over one full period or word. Only
/// meaningful at the end of the period; inside it the interval propagators
/// apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumDescriptor {
    pub effective: EffectivePropagator,
    /// Present for hyperbolic periods. Repeated application concentrates
    /// any state towards a sharp position or momentum distribution.
    pub dilatation: Option<Dilatation>,
}

pub fn effective_quantum_descriptor(
    g_period: &SymplecticMatrix,
    period: f64,
) -> Result<QuantumDescriptor> {
    let effective = floquet_index(g_period, period)?;
    let dilatation = (effective.kind == PropagatorKind::Hyperbolic).then(|| {
        let kt = effective.rate * period;
        Dilatation {
            scale: (-kt).exp(),
            amplitude: (-0.5 * kt).exp(),
        }
    });
    Ok(QuantumDescriptor {
        effective,
        dilatation,
    })
}
