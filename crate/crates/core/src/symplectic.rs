//! Linear canonical transformations of one-degree-of-freedom phase space.
//!
//! Every propagator is a real 2×2 matrix `[[a, b], [c, d]]` with unit
//! determinant acting on column vectors `(x, p)`. The closed forms cover the
//! three quadratic Hamiltonian types (oscillator, hyperbolic/dilatation,
//! free particle) and their zero-duration δ-kick limits.
//!
//! Composition convention: for interval 1 followed by interval 2 the
//! composed propagator is `g2 · g1`, so in [`multiply`] the earliest
//! interval is the rightmost factor.
//!
//! The free-particle propagator uses the sign `[[1, -t], [0, 1]]`. Many
//! texts write `+t`; this crate keeps the minus sign throughout.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{positive, Error, Result};

/// Tolerance on `|det - 1|` for freshly constructed matrices.
pub const CONSTRUCTION_DET_TOL: f64 = 1e-10;
/// Tolerance on `|det - 1|` for composed products.
pub const PRODUCT_DET_TOL: f64 = 1e-9;
/// Half-traces within this distance of ±1 classify as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// A point `(x, p)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.p)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.p.is_finite()
    }
}

/// Real 2×2 matrix with unit determinant, row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl SymplecticMatrix {
    /// Builds a matrix after checking `|ad - bc - 1| <= 1e-10`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.det();
        if (det - 1.0).abs() <= CONSTRUCTION_DET_TOL {
            Ok(m)
        } else {
            Err(Error::NotSymplectic { det })
        }
    }

    /// Closed-form constructors use this; their determinant is one analytically.
    pub(crate) fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Self {
        let m = Self { a, b, c, d };
        debug_assert!(
            (m.det() - 1.0).abs() <= CONSTRUCTION_DET_TOL * m.scale().max(1.0),
            "closed form lost unit determinant: {m}"
        );
        m
    }

    pub fn identity() -> Self {
        Self::from_entries(1.0, 0.0, 0.0, 1.0)
    }

    /// Rotation block `[[cos θ, sin θ / s], [-s sin θ, cos θ]]` with scale `s > 0`.
    pub(crate) fn scaled_rotation(theta: f64, scale: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self::from_entries(cos, sin / scale, -scale * sin, cos)
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `½ tr g`, the quantity that decides the Hamiltonian type.
    pub fn half_trace(&self) -> f64 {
        0.5 * self.trace()
    }

    /// Exact inverse `[[d, -b], [-c, a]]` (adjugate, since det = 1).
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Largest entry magnitude.
    pub fn scale(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    /// Max-norm distance between two matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&Self::identity()) <= tol
    }

    pub fn apply(&self, v: PhasePoint) -> PhasePoint {
        PhasePoint {
            x: self.a * v.x + self.b * v.p,
            p: self.c * v.x + self.d * v.p,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            k >>= 1;
        }
        result
    }

    /// Conjugation `q · self · q⁻¹`.
    pub fn conjugate_by(&self, q: &Self) -> Self {
        *q * *self * q.inverse()
    }

    /// Both eigenvalues. For |½χ| < 1 they are `h ± i√(1-h²)`; otherwise
    /// real and reciprocal, ordered larger magnitude first.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let h = self.half_trace();
        let disc = h * h - self.det();
        if disc < 0.0 {
            let im = (-disc).sqrt();
            [Complex64::new(h, im), Complex64::new(h, -im)]
        } else {
            let root = disc.sqrt();
            // avoid cancellation in the smaller root
            let big = if h >= 0.0 { h + root } else { h - root };
            let small = if big == 0.0 { 0.0 } else { self.det() / big };
            [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
        }
    }
}

impl Mul for SymplecticMatrix {
    type Output = SymplecticMatrix;

    fn mul(self, rhs: SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Harmonic oscillator `H = P²/2m + mω²X²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    m: f64,
    omega: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            m: positive("m", m)?,
            omega: positive("omega", omega)?,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Repulsive oscillator `H = (P²/m - mκ²X²)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicParams {
    m: f64,
    kappa: f64,
}

impl HyperbolicParams {
    pub fn new(m: f64, kappa: f64) -> Result<Self> {
        Ok(Self {
            m: positive("m", m)?,
            kappa: positive("kappa", kappa)?,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KickSign {
    /// Limit of a short square-well (oscillator) interval.
    Negative,
    /// Limit of a short square-tunnel (hyperbolic) interval.
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickStrength {
    u_prime: f64,
    sign: KickSign,
}

impl KickStrength {
    pub fn new(u_prime: f64, sign: KickSign) -> Result<Self> {
        Ok(Self {
            u_prime: crate::error::non_negative("u_prime", u_prime)?,
            sign,
        })
    }

    pub fn u_prime(&self) -> f64 {
        self.u_prime
    }

    pub fn sign(&self) -> KickSign {
        self.sign
    }
}

/// `[[cos ωt, sin ωt/(mω)], [-mω sin ωt, cos ωt]]`.
pub fn oscillator_propagator(p: &OscillatorParams, t: f64) -> SymplecticMatrix {
    SymplecticMatrix::scaled_rotation(p.omega * t, p.m * p.omega)
}

/// `[[cosh κt, sinh κt/(mκ)], [mκ sinh κt, cosh κt]]`.
pub fn hyperbolic_propagator(p: &HyperbolicParams, t: f64) -> SymplecticMatrix {
    let x = p.kappa * t;
    let s = p.m * p.kappa;
    let (sh, ch) = (x.sinh(), x.cosh());
    SymplecticMatrix::from_entries(ch, sh / s, s * sh, ch)
}

/// `diag(e^{κt}, e^{-κt})`.
pub fn dilatation_propagator(kappa: f64, t: f64) -> SymplecticMatrix {
    let x = kappa * t;
    SymplecticMatrix::from_entries(x.exp(), 0.0, 0.0, (-x).exp())
}

/// Free particle, `[[1, -t], [0, 1]]`. The mass only enters the quantum
/// kernel, so it is validated but does not appear in the matrix.
pub fn free_propagator(m: f64, t: f64) -> Result<SymplecticMatrix> {
    positive("m", m)?;
    Ok(SymplecticMatrix::from_entries(1.0, -t, 0.0, 1.0))
}

/// Shear `[[1, 0], [∓u', 1]]`; the upper sign is the negative kick.
pub fn delta_kick(k: &KickStrength) -> SymplecticMatrix {
    let c = match k.sign {
        KickSign::Negative => -k.u_prime,
        KickSign::Positive => k.u_prime,
    };
    SymplecticMatrix::from_entries(1.0, 0.0, c, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// Type I, |½χ| < 1.
    Elliptic,
    /// Type II, |½χ| > 1.
    Hyperbolic,
    /// Type III, |½χ| = 1 and g ≠ e.
    Parabolic,
    Identity,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassKind::Elliptic => "elliptic",
            ClassKind::Hyperbolic => "hyperbolic",
            ClassKind::Parabolic => "parabolic",
            ClassKind::Identity => "identity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianClass {
    pub kind: ClassKind,
    pub half_trace: f64,
}

/// Conjugacy type of `g` from its half-trace.
pub fn classify(g: &SymplecticMatrix) -> HamiltonianClass {
    let h = g.half_trace();
    let kind = if g.is_identity(PARABOLIC_TOL) {
        ClassKind::Identity
    } else if (h.abs() - 1.0).abs() <= PARABOLIC_TOL {
        ClassKind::Parabolic
    } else if h.abs() < 1.0 {
        ClassKind::Elliptic
    } else {
        ClassKind::Hyperbolic
    };
    HamiltonianClass {
        kind,
        half_trace: h,
    }
}

/// Phase-space propagator → transfer matrix acting on `(x, ẋ)` with `p = mẋ`:
/// `M = diag(√m, 1/√m) · g · diag(1/√m, √m)`.
pub fn to_transfer_matrix(g: &SymplecticMatrix, m: f64) -> Result<SymplecticMatrix> {
    positive("m", m)?;
    let s = m.sqrt();
    let left = SymplecticMatrix::from_entries(s, 0.0, 0.0, 1.0 / s);
    Ok(left * *g * left.inverse())
}

/// Inverse of [`to_transfer_matrix`].
pub fn from_transfer_matrix(transfer: &SymplecticMatrix, m: f64) -> Result<SymplecticMatrix> {
    positive("m", m)?;
    let s = m.sqrt();
    let left = SymplecticMatrix::from_entries(s, 0.0, 0.0, 1.0 / s);
    Ok(left.inverse() * *transfer * left)
}

/// A time-independent quadratic Hamiltonian with a confining or repulsive
/// quadratic potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadraticHamiltonian {
    Oscillator(OscillatorParams),
    Hyperbolic(HyperbolicParams),
}

impl QuadraticHamiltonian {
    pub fn energy(&self, point: PhasePoint) -> f64 {
        match self {
            Self::Oscillator(o) => {
                point.p * point.p / (2.0 * o.m) + 0.5 * o.m * o.omega * o.omega * point.x * point.x
            }
            Self::Hyperbolic(h) => {
                point.p * point.p / (2.0 * h.m) - 0.5 * h.m * h.kappa * h.kappa * point.x * point.x
            }
        }
    }

    pub fn propagator(&self, t: f64) -> SymplecticMatrix {
        match self {
            Self::Oscillator(o) => oscillator_propagator(o, t),
            Self::Hyperbolic(h) => hyperbolic_propagator(h, t),
        }
    }

    /// Initial data `h(0) = diag(1, mω)` (resp. `diag(1, mκ)`) whose columns
    /// are the two fundamental solutions I and II.
    pub fn fundamental_initial(&self) -> [PhasePoint; 2] {
        let scale = match self {
            Self::Oscillator(o) => o.m * o.omega,
            Self::Hyperbolic(h) => h.m * h.kappa,
        };
        [PhasePoint::new(1.0, 0.0), PhasePoint::new(0.0, scale)]
    }

    /// Fundamental solutions I and II at time `t`.
    pub fn fundamental_solutions(&self, t: f64) -> [PhasePoint; 2] {
        let g = self.propagator(t);
        self.fundamental_initial().map(|v| g.apply(v))
    }
}

/// Energies `(E_I, E_II)` of the two fundamental solutions.
pub fn fundamental_energies(h: &QuadraticHamiltonian) -> (f64, f64) {
    let [one, two] = h.fundamental_initial();
    (h.energy(one), h.energy(two))
}

/// Ordered product `gs[0] · gs[1] · … · gs[n-1]`. The earliest interval is
/// the last element. Products are never re-normalised; a drifted
/// determinant is an error.
pub fn multiply(gs: &[SymplecticMatrix]) -> Result<SymplecticMatrix> {
    let (first, rest) = gs.split_first().ok_or(Error::EmptyProduct)?;
    let product = rest.iter().fold(*first, |acc, g| acc * *g);
    let det = product.det();
    if (det - 1.0).abs() <= PRODUCT_DET_TOL {
        Ok(product)
    } else {
        Err(Error::DeterminantDrift { det })
    }
}
