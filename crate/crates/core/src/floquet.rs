//! Floquet analysis of the periodically δ-kicked oscillator.
//!
//! One period is a positive kick followed by free oscillation, in
//! transfer-matrix form (`u' = m u`):
//!
//! ```text
//! λ = [[cos ωT, sin ωT / ω], [-ω sin ωT, cos ωT]] · [[1, 0], [u, 1]]
//! ½χ(β) = cos β + (u / 2ω) sin β,   β = ωT
//! ```
//!
//! Bands are the β-intervals with |½χ| ≤ 1, gaps those with |½χ| > 1.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{non_negative, positive, Error, Result};
use crate::symplectic::{SymplecticMatrix, PARABOLIC_TOL};

/// Iteration cap for bracketed bisection.
pub const MAX_BISECTION_STEPS: usize = 200;
/// Bands narrower than this are flagged degenerate.
pub const DEGENERATE_WIDTH: f64 = 1e-8;
/// Widest β-range accepted by [`find_bands`].
pub const MAX_BETA_SPAN: f64 = 100.0 * TAU;
/// Quadrature panels used by [`irrep_check`].
pub const COMPLETENESS_PANELS: usize = 10_000;

const SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickedSystemParams {
    m: f64,
    omega: f64,
    u: f64,
    period: f64,
}

impl KickedSystemParams {
    /// `u = 0` is accepted as the kick-free limit.
    pub fn new(m: f64, omega: f64, u: f64, period: f64) -> Result<Self> {
        Ok(Self {
            m: positive("m", m)?,
            omega: positive("omega", omega)?,
            u: non_negative("u", u)?,
            period: positive("period", period)?,
        })
    }

    /// Parameters with `ω = 1`, `u/2ω = ratio` and `ωT = beta`.
    pub fn from_ratio(ratio: f64, beta: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 2.0 * non_negative("ratio", ratio)?, beta)
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
    pub fn period(&self) -> f64 {
        self.period
    }

    /// `u / 2ω`.
    pub fn ratio(&self) -> f64 {
        self.u / (2.0 * self.omega)
    }

    /// `β = ωT`.
    pub fn beta(&self) -> f64 {
        self.omega * self.period
    }
}

/// Free-oscillation transfer block over duration `t`.
pub fn rotation_block(omega: f64, t: f64) -> SymplecticMatrix {
    SymplecticMatrix::scaled_rotation(omega * t, omega)
}

/// Positive δ-kick in transfer-matrix form, `[[1, 0], [u, 1]]`.
pub fn kick_block(u: f64) -> SymplecticMatrix {
    SymplecticMatrix::from_entries(1.0, 0.0, u, 1.0)
}

/// One-period transfer matrix: kick, then rotation.
pub fn kicked_monodromy(p: &KickedSystemParams) -> SymplecticMatrix {
    rotation_block(p.omega, p.period) * kick_block(p.u)
}

/// `cos β + ratio · sin β`.
pub fn kicked_half_trace(ratio: f64, beta: f64) -> f64 {
    let (s, c) = beta.sin_cos();
    c + ratio * s
}

pub fn is_in_band(half_trace: f64) -> bool {
    half_trace.abs() <= 1.0
}

/// `(β, ½χ(β))` over `beta_grid`, at the kick ratio of `p`.
pub fn half_trace_curve(p: &KickedSystemParams, beta_grid: &[f64]) -> Vec<(f64, f64)> {
    let r = p.ratio();
    beta_grid
        .iter()
        .map(|&b| (b, kicked_half_trace(r, b)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandKind {
    Band,
    Gap,
}

impl fmt::Display for BandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandKind::Band => "band",
            BandKind::Gap => "gap",
        })
    }
}

/// A band or gap in β. For bands `center` is the zero of ½χ; for gaps it
/// is the extremum of ½χ. Intervals clipped by the search range keep the
/// center of the unclipped interval, which may then lie outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    pub kind: BandKind,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_degenerate(&self) -> bool {
        self.width() < DEGENERATE_WIDTH
    }

    pub fn contains(&self, beta: f64) -> bool {
        beta >= self.lower && beta <= self.upper
    }
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sign_change(a: f64, b: f64) -> bool {
    (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)
}

/// Bands and gaps of the kicked oscillator covering `[lower, upper]` in β.
///
/// ½χ = A cos(β − φ) with `A = √(1 + r²)`, `φ = atan r`, so it is monotone
/// between consecutive extrema `φ + kπ`. Each monotone segment brackets at
/// most one root of ½χ − 1, ½χ + 1 and ½χ, and each is found by bisection.
/// Where the extremum only touches ±1 (no kick) a zero-width gap is emitted.
pub fn find_bands(p: &KickedSystemParams, lower: f64, upper: f64) -> Result<Vec<Band>> {
    find_bands_for_ratio(p.ratio(), lower, upper)
}

pub fn find_bands_for_ratio(ratio: f64, lower: f64, upper: f64) -> Result<Vec<Band>> {
    non_negative("ratio", ratio)?;
    if !(lower.is_finite() && upper.is_finite() && lower < upper) {
        return Err(Error::InvalidRange {
            lower,
            upper,
            reason: "need finite lower < upper",
        });
    }
    if upper - lower > MAX_BETA_SPAN {
        return Err(Error::InvalidRange {
            lower,
            upper,
            reason: "span exceeds 100 periods",
        });
    }

    let f = |b: f64| kicked_half_trace(ratio, b);
    let phase = ratio.atan();
    let extremum = |k: i64| phase + k as f64 * PI;
    let k_first = ((lower - phase) / PI).floor() as i64;
    let k_last = ((upper - phase) / PI).ceil() as i64;

    let snap_tol = |b: f64| SNAP_TOL * b.abs().max(1.0);
    let mut breaks = vec![lower, upper];
    let mut touching = Vec::new();
    for k in k_first..k_last {
        let (a, b) = (extremum(k), extremum(k + 1));
        let (fa, fb) = (f(a), f(b));
        for level in [1.0, -1.0] {
            if sign_change(fa - level, fb - level) {
                let root = bisect(|x| f(x) - level, a, b);
                if root > lower - snap_tol(root) && root < upper + snap_tol(root) {
                    breaks.push(root.clamp(lower, upper));
                }
            }
        }
    }
    for k in k_first..=k_last {
        let e = extremum(k);
        if f(e).abs() <= 1.0 && e >= lower && e <= upper {
            touching.push(e);
        }
    }

    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= snap_tol(*b));
    // keep the exact range ends after dedup
    if let Some(first) = breaks.first_mut() {
        *first = lower;
    }
    if let Some(last) = breaks.last_mut() {
        *last = upper;
    }

    let band_center = |mid: f64| {
        let k = ((mid - phase) / PI).floor() as i64;
        bisect(f, extremum(k), extremum(k + 1))
    };
    let gap_center = |mid: f64| extremum(((mid - phase) / PI).round() as i64);

    let mut out: Vec<Band> = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let kind = if is_in_band(f(mid)) {
            BandKind::Band
        } else {
            BandKind::Gap
        };
        match out.last_mut() {
            Some(prev) if prev.kind == kind => prev.upper = hi,
            _ => out.push(Band {
                lower: lo,
                upper: hi,
                center: f64::NAN,
                kind,
            }),
        }
    }

    // tangential touching points split a band with a zero-width gap
    touching.sort_by(f64::total_cmp);
    touching.dedup_by(|a, b| (*a - *b).abs() <= snap_tol(*b));
    for t in touching {
        let gap = Band {
            lower: t,
            upper: t,
            center: t,
            kind: BandKind::Gap,
        };
        let idx = out
            .iter()
            .position(|b| b.kind == BandKind::Band && b.contains(t))
            .expect("touching point lies in a band");
        let band = out[idx];
        let mut pieces = Vec::with_capacity(3);
        if t > band.lower {
            pieces.push(Band { upper: t, ..band });
        }
        pieces.push(gap);
        if t < band.upper {
            pieces.push(Band { lower: t, ..band });
        }
        out.splice(idx..=idx, pieces);
    }

    for b in &mut out {
        if b.center.is_nan() {
            let mid = 0.5 * (b.lower + b.upper);
            b.center = match b.kind {
                BandKind::Band => band_center(mid),
                BandKind::Gap => gap_center(mid),
            };
        }
    }
    Ok(out)
}

/// Distance of a band edge from its defining equation.
///
/// ½χ = +1 holds on `tan(β/2) = u/2ω` and on `β = 2πm` (`tan(β/2) = 0`);
/// ½χ = −1 holds on `cot(β/2) = −u/2ω` and on `β = π + 2πm`
/// (`cot(β/2) = 0`). The smaller residual of the two branches is returned.
pub fn edge_residual(beta: f64, ratio: f64) -> f64 {
    let half = 0.5 * beta;
    if kicked_half_trace(ratio, beta) > 0.0 {
        let t = half.tan();
        t.abs().min((t - ratio).abs())
    } else {
        let c = half.cos() / half.sin();
        c.abs().min((c + ratio).abs())
    }
}

/// Residual of the band-center equation `cot β = −u/2ω` (as `cos β + r sin β`
/// divided by `sin β`, finite for every nonzero ratio).
pub fn center_residual(beta: f64, ratio: f64) -> f64 {
    (beta.cos() / beta.sin() + ratio).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagatorKind {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl fmt::Display for PropagatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropagatorKind::Elliptic => "elliptic",
            PropagatorKind::Hyperbolic => "hyperbolic",
            PropagatorKind::Parabolic => "parabolic",
        })
    }
}

/// Effective one-period propagator: a harmonic oscillator of frequency Ω
/// (elliptic) or a dilatation with rate κ (hyperbolic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePropagator {
    pub kind: PropagatorKind,
    /// Ω ∈ [0, 2π/T) for elliptic, κ > 0 for hyperbolic, 0 for parabolic.
    pub rate: f64,
    pub period: f64,
    /// `exp(−iΩT/2)` for elliptic, 1 otherwise.
    pub phase_factor: Complex64,
}

impl EffectivePropagator {
    /// Classical Floquet factors `exp(±iΩT)` (elliptic only).
    pub fn floquet_factors(&self) -> Option<[Complex64; 2]> {
        (self.kind == PropagatorKind::Elliptic).then(|| {
            let theta = self.rate * self.period;
            [Complex64::cis(theta), Complex64::cis(-theta)]
        })
    }

    /// Width `2π/T` of the temporal Brillouin zone.
    pub fn zone_width(&self) -> f64 {
        TAU / self.period
    }
}

/// Floquet index of a one-period monodromy `g`.
///
/// Elliptic: `cos ΩT = ½χ`, with the sign of `sin ΩT` taken from `−c` (the
/// lower-left entry), as for an oscillator propagator, then Ω reduced into
/// `[0, 2π/T)`. Hyperbolic: `cosh κT = |½χ|`. `±e` count as elliptic with
/// `ΩT = 0` or `π`; other |½χ| = 1 matrices are parabolic.
pub fn floquet_index(g: &SymplecticMatrix, period: f64) -> Result<EffectivePropagator> {
    positive("period", period)?;
    let h = g.half_trace();
    let elliptic = |theta: f64| {
        let theta = theta.rem_euclid(TAU);
        EffectivePropagator {
            kind: PropagatorKind::Elliptic,
            rate: theta / period,
            period,
            phase_factor: Complex64::cis(-0.5 * theta),
        }
    };
    let on_boundary = (h.abs() - 1.0).abs() <= PARABOLIC_TOL;
    let out = if on_boundary {
        if g.is_identity(PARABOLIC_TOL) {
            elliptic(0.0)
        } else if g.max_abs_diff(&SymplecticMatrix::from_entries(-1.0, 0.0, 0.0, -1.0))
            <= PARABOLIC_TOL
        {
            elliptic(PI)
        } else {
            EffectivePropagator {
                kind: PropagatorKind::Parabolic,
                rate: 0.0,
                period,
                phase_factor: Complex64::new(1.0, 0.0),
            }
        }
    } else if h.abs() < 1.0 {
        let sin = (1.0 - h * h).sqrt().copysign(-g.c());
        elliptic(sin.atan2(h))
    } else {
        EffectivePropagator {
            kind: PropagatorKind::Hyperbolic,
            rate: h.abs().acosh() / period,
            period,
            phase_factor: Complex64::new(1.0, 0.0),
        }
    };
    Ok(out)
}

/// Splits `NΩ = m·2π/T + Ω'` with `0 ≤ Ω' < 2π/T`; returns `(Ω', m)`.
pub fn floquet_state_phase(n: u64, eff: &EffectivePropagator) -> Result<(f64, u64)> {
    if eff.kind != PropagatorKind::Elliptic {
        return Err(Error::NoFloquetQuantumNumbers);
    }
    let zone = eff.zone_width();
    let total = n as f64 * eff.rate;
    let mut winding = (total / zone).floor();
    let mut reduced = total - winding * zone;
    if reduced >= zone {
        reduced -= zone;
        winding += 1.0;
    } else if reduced < 0.0 {
        reduced += zone;
        winding -= 1.0;
    }
    Ok((reduced.max(0.0), winding as u64))
}

/// `D^Ω(nT) = exp(iΩnT)`, the character of the time-translation group on
/// the Brillouin zone `Ω ∈ [0, 2π/T)`.
pub fn floquet_character(omega: f64, period: f64, n: i64) -> Complex64 {
    Complex64::cis(omega * n as f64 * period)
}

/// `(1/|BZ|) ∫_BZ conj(D^Ω(nT)) D^Ω(mT) dΩ` by the composite trapezoid rule.
pub fn completeness_integral(period: f64, n: i64, m: i64, panels: usize) -> Complex64 {
    let zone = TAU / period;
    let panels = panels.max(1);
    let h = zone / panels as f64;
    let integrand =
        |w: f64| floquet_character(w, period, n).conj() * floquet_character(w, period, m);
    let mut sum = 0.5 * (integrand(0.0) + integrand(zone));
    for i in 1..panels {
        sum += integrand(h * i as f64);
    }
    sum * h / zone
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrepCheck {
    /// `D(nT) D(mT) = D((n+m)T)` within 1e-12.
    pub homomorphism: bool,
    /// Completeness integral within 1e-6 of `δ_{n,m}`.
    pub completeness: bool,
    pub completeness_value: Complex64,
}

pub fn irrep_check(omega: f64, period: f64, n: i64, m: i64) -> IrrepCheck {
    let lhs = floquet_character(omega, period, n) * floquet_character(omega, period, m);
    let rhs = floquet_character(omega, period, n + m);
    let value = completeness_integral(period, n, m, COMPLETENESS_PANELS);
    let delta = if n == m { 1.0 } else { 0.0 };
    IrrepCheck {
        homomorphism: (lhs - rhs).norm() <= 1e-12,
        completeness: (value - Complex64::new(delta, 0.0)).norm() <= 1e-6,
        completeness_value: value,
    }
}
