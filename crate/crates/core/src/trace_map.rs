//! Half-trace dynamics induced by the Fibonacci automorphism.
//!
//! With `g3 = g1 g2`, the half-traces `(x, y, z)` of `(φⁿ(g1), φⁿ(g2), φⁿ(g3))`
//! obey `(x, y, z) → (y, z, 2yz − x)`. The half-trace of the commutator,
//! `½χ(K) = 2(x² + y² + z²) − 4xyz − 1`, is constant along every orbit.

use crate::error::{Escape, Result};
use crate::symplectic::SymplecticMatrix;

/// Orbits stop once any half-trace exceeds this magnitude.
pub const ESCAPE_THRESHOLD: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TraceTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Half-traces of `g1`, `g2` and `g1 g2`.
    pub fn from_matrices(g1: &SymplecticMatrix, g2: &SymplecticMatrix) -> Self {
        Self {
            x: g1.half_trace(),
            y: g2.half_trace(),
            z: (*g1 * *g2).half_trace(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Non-finite, or beyond [`ESCAPE_THRESHOLD`].
    pub fn is_escaped(&self) -> bool {
        let finite = self.x.is_finite() && self.y.is_finite() && self.z.is_finite();
        !finite || self.max_abs() > ESCAPE_THRESHOLD
    }
}

pub fn step(t: TraceTriple) -> TraceTriple {
    TraceTriple {
        x: t.y,
        y: t.z,
        z: 2.0 * t.y * t.z - t.x,
    }
}

/// Inverse of [`step`].
pub fn unstep(t: TraceTriple) -> TraceTriple {
    TraceTriple {
        x: 2.0 * t.x * t.y - t.z,
        y: t.x,
        z: t.y,
    }
}

/// `½χ(K) = 2(x² + y² + z²) − 4xyz − 1`.
pub fn conserved_cubic(t: TraceTriple) -> f64 {
    2.0 * (t.x * t.x + t.y * t.y + t.z * t.z) - 4.0 * t.x * t.y * t.z - 1.0
}

/// `t0` followed by `n` iterates of [`step`].
pub fn orbit(
    t0: TraceTriple,
    n: usize,
) -> std::result::Result<Vec<TraceTriple>, Escape<TraceTriple>> {
    let mut points = Vec::with_capacity(n + 1);
    let mut t = t0;
    for i in 0..=n {
        if t.is_escaped() {
            return Err(Escape {
                step: i,
                threshold: ESCAPE_THRESHOLD,
                partial: points,
            });
        }
        points.push(t);
        t = step(t);
    }
    Ok(points)
}

/// Point cloud on the level set `conserved_cubic = level`.
///
/// For every `(x, y)` on a `resolution × resolution` grid over
/// `[-bound, bound]²` the cubic is a quadratic in `z`; each real root inside
/// the box is emitted.
pub fn sample_level_set(level: f64, bound: f64, resolution: usize) -> Result<Vec<TraceTriple>> {
    crate::error::positive("bound", bound)?;
    let n = resolution.max(2);
    let mut out = Vec::new();
    let h = 2.0 * bound / (n - 1) as f64;
    for i in 0..n {
        let x = -bound + h * i as f64;
        for j in 0..n {
            let y = -bound + h * j as f64;
            // 2z² − 4xy z + (2x² + 2y² − 1 − level) = 0
            let b = -4.0 * x * y;
            let c = 2.0 * (x * x + y * y) - 1.0 - level;
            let disc = b * b - 8.0 * c;
            if disc < 0.0 {
                continue;
            }
            let root = disc.sqrt();
            let mut zs = vec![(-b + root) / 4.0];
            if root > 0.0 {
                zs.push((-b - root) / 4.0);
            }
            out.extend(
                zs.into_iter()
                    .filter(|z| z.abs() <= bound)
                    .map(|z| TraceTriple::new(x, y, z)),
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        let one = TraceTriple::new(1.0, 1.0, 1.0);
        assert_eq!(step(one), one);
        let zero = TraceTriple::new(0.0, 0.0, 0.0);
        assert_eq!(step(zero), zero);
    }

    #[test]
    fn cubic_examples() {
        assert_eq!(conserved_cubic(TraceTriple::new(1.0, 1.0, 1.0)), 1.0);
        assert_eq!(conserved_cubic(TraceTriple::new(0.0, 0.0, 0.0)), -1.0);
        assert_eq!(conserved_cubic(TraceTriple::new(2.0, 2.0, 2.0)), -9.0);
        for (a, b) in [(0.3, 1.9), (2.2, -0.4), (5.0, 4.0)] {
            let t = TraceTriple::new(f64::cos(a), f64::cos(b), f64::cos(a + b));
            assert!((conserved_cubic(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_orbit_from_identity_traces() {
        let pts = orbit(TraceTriple::new(1.0, 1.0, 1.0), 100).unwrap();
        assert_eq!(pts.len(), 101);
        assert!(pts.iter().all(|p| *p == TraceTriple::new(1.0, 1.0, 1.0)));
    }

    #[test]
    fn escaping_orbit_keeps_cubic_until_escape() {
        let err = orbit(TraceTriple::new(2.0, 2.0, 2.0), 1000).unwrap_err();
        assert!(err.step > 5 && err.step < 30);
        assert_eq!(err.partial.len(), err.step);
        // exact in binary arithmetic while the entries stay integers below 2^53
        for p in err.partial.iter().take_while(|p| p.max_abs() < 1e4) {
            assert_eq!(conserved_cubic(*p), -9.0);
        }
    }

    #[test]
    fn unstep_inverts_step() {
        let t = TraceTriple::new(0.3, -0.8, 0.55);
        let back = unstep(step(t));
        assert!((back.x - t.x).abs() < 1e-12);
        assert!((back.y - t.y).abs() < 1e-12);
        assert!((back.z - t.z).abs() < 1e-12);
    }

    #[test]
    fn level_set_points_satisfy_level() {
        let pts = sample_level_set(1.5, 2.0, 41).unwrap();
        assert!(!pts.is_empty());
        for p in pts {
            assert!((conserved_cubic(p) - 1.5).abs() < 1e-9, "{p:?}");
        }
        assert!(sample_level_set(0.0, -1.0, 10).is_err());
    }
}
