use crate::error::{Error, Result};
use crate::scalar::Real;

/// Schmidt coefficients across the cut after the first `cut` sites,
/// descending and normalized to `Σ μ² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum<T> {
    cut: usize,
    values: Vec<T>,
}

impl<T: Real> SchmidtSpectrum<T> {
    /// Normalizes and sorts raw singular values; zeros are dropped.
    pub fn from_singular_values(cut: usize, mut values: Vec<T>) -> Result<Self> {
        values.retain(|&v| v > T::zero());
        if values.is_empty() {
            return Err(Error::invalid("Schmidt spectrum of a zero vector"));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        let norm = values.iter().map(|&v| v * v).sum::<T>().sqrt();
        for v in &mut values {
            *v /= norm;
        }
        Ok(Self { cut, values })
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Rényi entropy in bits, `log₂(Σ p^α) / (1 − α)` with `p = μ²`;
    /// `α = 1` gives the von Neumann entropy `−Σ p log₂ p`.
    pub fn renyi(&self, alpha: T) -> Result<T> {
        if !(alpha > T::zero()) {
            return Err(Error::invalid(format!("Rényi index must be positive, got {alpha}")));
        }
        let probs = self.values.iter().map(|&m| m * m).filter(|&p| p > T::zero());
        if alpha == T::one() {
            Ok(probs.map(|p| -p * p.log2()).sum::<T>().max(T::zero()))
        } else {
            let s: T = probs.map(|p| p.powf(alpha)).sum();
            Ok((s.log2() / (T::one() - alpha)).max(T::zero()))
        }
    }
}

/// Largest entropy over all cuts; ties go to the smallest cut.
pub fn max_entropy_over_cuts<T: Real>(spectra: &[SchmidtSpectrum<T>], alpha: T) -> Result<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for s in spectra {
        let v = s.renyi(alpha)?;
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((s.cut, v));
        }
    }
    best.ok_or_else(|| Error::invalid("no cuts to scan"))
}

pub fn avg_entropy_over_cuts<T: Real>(spectra: &[SchmidtSpectrum<T>], alpha: T) -> Result<T> {
    if spectra.is_empty() {
        return Err(Error::invalid("no cuts to scan"));
    }
    let mut sum = T::zero();
    for s in spectra {
        sum += s.renyi(alpha)?;
    }
    Ok(sum / T::from_count(spectra.len()))
}
