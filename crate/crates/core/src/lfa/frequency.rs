use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// A Fourier frequency `θ = (θ₁, θ₂)` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub theta1: f64,
    pub theta2: f64,
}

fn reduce(x: f64) -> f64 {
    // into (-π/2, 3π/2]
    x - 2.0 * PI * ((x - 1.5 * PI) / (2.0 * PI)).ceil()
}

impl Frequency {
    pub const fn new(theta1: f64, theta2: f64) -> Self {
        Self { theta1, theta2 }
    }

    /// Same frequency with both components reduced into `(-π/2, 3π/2]`.
    pub fn canonical(&self) -> Self {
        Self::new(reduce(self.theta1), reduce(self.theta2))
    }

    /// Low frequencies are `[-π/2, π/2)²`; everything else is high.
    pub fn is_low(&self) -> bool {
        let low = |t: f64| (-FRAC_PI_2..FRAC_PI_2).contains(&t);
        low(self.theta1) && low(self.theta2)
    }

    pub fn is_high(&self) -> bool {
        !self.is_low()
    }

    /// `true` when the frequency is `(0, 0)` modulo 2π.
    pub fn is_zero_mod_2pi(&self) -> bool {
        let near = |t: f64| {
            let r = t.rem_euclid(2.0 * PI);
            r.min(2.0 * PI - r) < 1e-14
        };
        near(self.theta1) && near(self.theta2)
    }

    fn shifted(&self, s1: f64, s2: f64) -> Self {
        Self::new(self.theta1 + s1, self.theta2 + s2).canonical()
    }
}

/// Harmonic shifts in the fixed order `(0,0), (π,0), (0,π), (π,π)`.
pub const HARMONIC_SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (PI, 0.0), (0.0, PI), (PI, PI)];

/// The four frequencies that alias to the same coarse-grid frequency as the
/// low frequency `theta` under standard coarsening.
pub fn harmonics(theta: Frequency) -> Result<[Frequency; 4]> {
    if !theta.is_low() {
        return Err(Error::NotLowFrequency {
            theta1: theta.theta1,
            theta2: theta.theta2,
        });
    }
    Ok(HARMONIC_SHIFTS.map(|(s1, s2)| {
        if s1 == 0.0 && s2 == 0.0 {
            theta
        } else {
            theta.shifted(s1, s2)
        }
    }))
}

/// `n × n` evenly spaced frequencies covering `[-π/2 + τ, π/2 - τ]²`,
/// endpoints included.
pub fn low_frequency_lattice(n: usize, tau: f64) -> Vec<Frequency> {
    let (lo, hi) = (-FRAC_PI_2 + tau, FRAC_PI_2 - tau);
    let axis: Vec<f64> = if n == 1 {
        vec![0.5 * (lo + hi)]
    } else {
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    };
    axis.iter()
        .flat_map(|&t2| axis.iter().map(move |&t1| Frequency::new(t1, t2)))
        .collect()
}

/// Extremal high frequencies that an evenly spaced lattice may miss.
pub const HIGH_EXTREMES: [Frequency; 4] = [
    Frequency::new(PI, PI),
    Frequency::new(FRAC_PI_2, FRAC_PI_2),
    Frequency::new(0.0, FRAC_PI_2),
    Frequency::new(PI, 0.0),
];

/// High frequencies from a `density × density` lattice of
/// `[-π/2, 3π/2)²`, plus [`HIGH_EXTREMES`].
pub fn high_frequency_samples(density: usize) -> Vec<Frequency> {
    let step = 2.0 * PI / density as f64;
    let mut out: Vec<Frequency> = (0..density)
        .flat_map(|k2| {
            (0..density).map(move |k1| {
                Frequency::new(-FRAC_PI_2 + k1 as f64 * step, -FRAC_PI_2 + k2 as f64 * step)
            })
        })
        .filter(Frequency::is_high)
        .collect();
    out.extend_from_slice(&HIGH_EXTREMES);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonics_of_low_frequency() {
        let t = Frequency::new(0.1, 0.2);
        let hs = harmonics(t).unwrap();
        let want = [
            (0.1, 0.2),
            (0.1 + PI, 0.2),
            (0.1, 0.2 + PI),
            (0.1 + PI, 0.2 + PI),
        ];
        for (h, w) in hs.iter().zip(want) {
            assert!((h.theta1 - w.0).abs() < 1e-15 && (h.theta2 - w.1).abs() < 1e-15);
        }
        assert_eq!(hs.iter().filter(|h| h.is_low()).count(), 1);
        assert!(hs[0].is_low());
    }

    #[test]
    fn harmonics_reject_high() {
        assert!(matches!(
            harmonics(Frequency::new(PI, 0.0)),
            Err(Error::NotLowFrequency { .. })
        ));
    }

    #[test]
    fn canonical_range() {
        let c = Frequency::new(-FRAC_PI_2, 2.0 * PI + 0.3).canonical();
        assert!((c.theta1 - 1.5 * PI).abs() < 1e-15);
        assert!((c.theta2 - 0.3).abs() < 1e-14);
        assert!(Frequency::new(2.0 * PI, -2.0 * PI).is_zero_mod_2pi());
    }

    #[test]
    fn shifted_lattice_avoids_zero() {
        let pts = low_frequency_lattice(32, PI / 64.0);
        assert_eq!(pts.len(), 1024);
        assert!(pts.iter().all(|p| p.is_low() && !p.is_zero_mod_2pi()));
        // odd multiples of π/64
        let t = pts[0].theta1 / (PI / 64.0);
        assert!((t + 31.0).abs() < 1e-12);
        let t = pts[1].theta1 / (PI / 64.0);
        assert!((t + 29.0).abs() < 1e-12);
    }

    #[test]
    fn high_samples_are_high() {
        let s = high_frequency_samples(32);
        assert!(s.iter().all(Frequency::is_high));
        assert_eq!(s.len(), 32 * 32 - 16 * 16 + 4);
    }
}
