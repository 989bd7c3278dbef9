use super::svd::SvdResult;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bond truncation rule: keep the fewest singular values whose discarded
/// squared weight is at most `max_discarded`, but never more than `max_bond`.
/// Degenerate multiplets are kept or dropped whole where the cap allows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy<T: Real> {
    max_bond: usize,
    max_discarded: T,
}

impl<T: Real> TruncationPolicy<T> {
    pub fn new(max_bond: usize, max_discarded: T) -> Result<Self> {
        if max_bond == 0 {
            return Err(Error::invalid("a bond can never be truncated to dimension 0"));
        }
        if !(max_discarded >= T::zero()) {
            return Err(Error::invalid("discarded-weight threshold must be non-negative"));
        }
        Ok(Self { max_bond, max_discarded })
    }

    /// Only exact zeros are removed.
    pub fn exact() -> Self {
        Self { max_bond: usize::MAX, max_discarded: T::zero() }
    }

    pub fn capped(max_bond: usize) -> Result<Self> {
        Self::new(max_bond, T::zero())
    }

    pub fn max_bond(&self) -> usize {
        self.max_bond
    }

    pub fn max_discarded(&self) -> T {
        self.max_discarded
    }
}

/// Outcome of truncating one SVD.
#[derive(Clone, Debug)]
pub struct Truncated<T: Real> {
    pub svd: SvdResult<T>,
    /// Sum of squares of the dropped singular values.
    pub discarded_weight: T,
    /// The bond cap was hit before the weight threshold could be met.
    pub capped: bool,
}

/// Truncates a spectrum that the caller has normalized to unit weight.
///
/// Values below `T::zero_cutoff() * σ_max` are always dropped.
pub fn truncate<T: Real>(svd: &SvdResult<T>, policy: &TruncationPolicy<T>) -> Result<Truncated<T>> {
    if policy.max_bond == 0 {
        return Err(Error::invalid("a bond can never be truncated to dimension 0"));
    }
    let sigma = &svd.singular_values;
    let k = sigma.len();
    let sigma_max = sigma.first().copied().unwrap_or_else(T::zero);
    let floor = sigma_max * T::zero_cutoff();
    let nonzero = sigma.iter().take_while(|&&s| s > floor).count().max(1);

    // tail[d] = Σ_{j ≥ d} σ_j²
    let mut tail = vec![T::zero(); k + 1];
    for j in (0..k).rev() {
        tail[j] = tail[j + 1] + sigma[j] * sigma[j];
    }
    let by_weight = (1..=nonzero).find(|&d| tail[d] <= policy.max_discarded).unwrap_or(nonzero);
    let keep = whole_multiplets(&sigma[..nonzero], by_weight.min(policy.max_bond), policy.max_bond);
    let capped = keep < by_weight;
    let discarded_weight = sigma[keep..].iter().map(|&s| s * s).sum();
    Ok(Truncated {
        svd: svd.leading(keep),
        discarded_weight,
        capped,
    })
}

/// Moves a cut that falls inside a degenerate multiplet to its edge: up if
/// the whole multiplet fits under `max_bond`, otherwise down. Splitting a
/// multiplet picks an arbitrary basis inside it, which breaks symmetries of
/// the state (e.g. makes a Hermitian super-ket complex).
fn whole_multiplets<T: Real>(sigma: &[T], keep: usize, max_bond: usize) -> usize {
    if keep == 0 || keep >= sigma.len() {
        return keep;
    }
    let tol = T::lit(1e-9);
    let floor = sigma[0] * T::zero_cutoff();
    let same = |i: usize| sigma[i - 1] - sigma[i] <= tol * sigma[i - 1] + floor;
    if !same(keep) {
        return keep;
    }
    let mut end = keep + 1;
    while end < sigma.len() && same(end) {
        end += 1;
    }
    if end <= max_bond {
        return end;
    }
    let mut start = keep - 1;
    while start > 0 && same(start) {
        start -= 1;
    }
    if start > 0 {
        start
    } else {
        keep
    }
}
