use std::fmt;
use std::str::FromStr;

/// Largest number of steps a grid may span.
pub const MAX_GRID_STEPS: f64 = 1e7;

/// `start:stop:step`, inclusive of `stop` when it lies on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + self.step * i as f64)
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let num = |name: &str, v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("{name} `{v}` is not a finite number"))
        };
        let g = GridSpec {
            start: num("start", start)?,
            stop: num("stop", stop)?,
            step: num("step", step)?,
        };
        if g.step <= 0.0 {
            return Err(format!("step must be > 0, got {}", g.step));
        }
        if g.start >= g.stop {
            return Err(format!("start must be < stop, got {}:{}", g.start, g.stop));
        }
        if (g.stop - g.start) / g.step > MAX_GRID_STEPS {
            return Err(format!("grid has more than {MAX_GRID_STEPS:e} steps"));
        }
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_counts() {
        let g: GridSpec = "0:6.2832:0.01".parse().unwrap();
        assert_eq!(g.len(), 629);
        let g: GridSpec = "0:3.1416:0.1".parse().unwrap();
        assert_eq!(g.len(), 32);
        let g: GridSpec = "-1:1:0.5".parse().unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for s in [
            "0:-1:0.1",
            "0:1:0",
            "0:1:-0.1",
            "1:1:0.1",
            "0:1",
            "a:1:0.1",
            "0:1e9:1e-3",
            "0:inf:1",
        ] {
            assert!(s.parse::<GridSpec>().is_err(), "{s}");
        }
    }
}
