//! Smoothing factors of the Braess-Sarazin relaxation over the high
//! frequencies, and the optimal damping parameter.

use super::frequency::{high_frequency_samples, Frequency};
use super::symbols::{symbols_2d, RelaxationSymbol, RelaxationVariant};
use crate::error::{Error, Result};

/// Sampling density used when none is given.
pub const DEFAULT_DENSITY: usize = 64;

fn check_density(density: usize) -> Result<()> {
    if density < 32 {
        return Err(Error::InvalidParameter(format!(
            "frequency sampling density must be >= 32, got {density}"
        )));
    }
    Ok(())
}

/// Largest `|λ(I - ω K̃⁻¹ L̃)|` over the high frequencies of a
/// `density × density` lattice plus the extremal points.
pub fn smoothing_factor(
    omega: f64,
    variant: RelaxationVariant,
    beta: f64,
    h: f64,
    density: usize,
) -> Result<f64> {
    check_density(density)?;
    let relax = RelaxationSymbol {
        variant,
        alpha: 1.0,
        omega,
    };
    high_frequency_samples(density)
        .into_iter()
        .try_fold(0.0f64, |worst, theta| {
            Ok(worst.max(relax.smoother(theta, beta, h)?.spectral_radius()?))
        })
}

/// Range `[min, max]` of the eigenvalues of `K̃⁻¹ L̃` over the sampled high
/// frequencies. These are the envelopes `|1 - cω|` whose maximum is the
/// smoothing factor.
pub fn eigenvalue_range(
    variant: RelaxationVariant,
    beta: f64,
    h: f64,
    density: usize,
) -> Result<(f64, f64)> {
    check_density(density)?;
    let relax = RelaxationSymbol {
        variant,
        alpha: 1.0,
        omega: 1.0,
    };
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for theta in high_frequency_samples(density) {
        for lam in relax
            .preconditioned_operator(theta, beta, h)?
            .eigenvalues()?
        {
            range.0 = range.0.min(lam.re);
            range.1 = range.1.max(lam.re);
        }
    }
    Ok(range)
}

/// Minimizes the smoothing factor over `ω ∈ (0, 2]` by golden-section search
/// (the factor is a maximum of `|1 - cω|` terms, hence unimodal in ω).
/// Returns `(ω_opt, μ_opt)`.
pub fn optimal_smoothing_with_density(
    variant: RelaxationVariant,
    beta: f64,
    h: f64,
    density: usize,
) -> Result<(f64, f64)> {
    check_density(density)?;
    // The eigenvalues of K̃⁻¹L̃ do not depend on ω; collect them once.
    let relax = RelaxationSymbol {
        variant,
        alpha: 1.0,
        omega: 1.0,
    };
    let mut spectra = Vec::new();
    for theta in high_frequency_samples(density) {
        spectra.extend(
            relax
                .preconditioned_operator(theta, beta, h)?
                .eigenvalues()?,
        );
    }
    let mu = |omega: f64| {
        spectra
            .iter()
            .map(|lam| (1.0 - omega * lam).norm())
            .fold(0.0, f64::max)
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (mu(x1), mu(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = mu(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = mu(x2);
        }
    }
    let omega = 0.5 * (lo + hi);
    Ok((omega, mu(omega)))
}

pub fn optimal_smoothing(variant: RelaxationVariant, beta: f64, h: f64) -> Result<(f64, f64)> {
    optimal_smoothing_with_density(variant, beta, h, DEFAULT_DENSITY)
}

/// Range of `a/â = M̃ Ã_fd` over the high frequencies of a
/// `density × density` lattice plus the extremal points.
pub fn ratio_range(density: usize) -> Result<(f64, f64)> {
    if density < 64 {
        return Err(Error::InvalidParameter(format!(
            "ratio_range needs density >= 64, got {density}"
        )));
    }
    // h cancels in the product
    Ok(high_frequency_samples(density)
        .into_iter()
        .map(|theta: Frequency| {
            let s = symbols_2d(theta, 1.0);
            s.a * s.a_fd
        })
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        }))
}
